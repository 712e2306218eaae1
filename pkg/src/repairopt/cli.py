"""Command-line front end: plan, solve, code, verify, report.

Every run is reproducible from its inputs and the recorded seed; outputs
are JSON (machine), CSV, or aligned text, with rationals serialized as
"p/q" strings and missing links as "inf".
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import bounds as bounds_mod
from . import coder, exacttandem, fixtures
from .flowgraph import build_flow_graph, check_feasible, enumerate_cut_constraints
from .lpcore import solve_min_cost
from .netmodel import (
    TopologyError,
    baseline_cost,
    build_topology,
    format_rational,
    parse_rational,
    spec_from_json,
    spec_to_json,
)


def _seed_option(seed):
    if seed is not None:
        return seed
    env = os.environ.get("REPAIROPT_SEED")
    return int(env) if env else 0


def _load_spec(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols):
    try:
        if spec_path:
            doc = json.loads(Path(spec_path).read_text())
            return spec_from_json(doc)
        if topology is None:
            raise click.UsageError("provide --spec PATH or --topology KIND")
        if n is None or k is None or m is None:
            raise click.UsageError("--topology needs --n, --k and --M")
        return build_topology(
            topology, n, k=k, M=m, alpha=alpha, d=d, failed=failed,
            center=center, rows=rows, cols=cols)
    except (TopologyError, ValueError, OSError) as exc:
        raise click.UsageError(str(exc))


def _emit(payload, fmt: str, out: str | None, filename: str):
    if fmt == "json":
        text = json.dumps(payload, indent=2)
    elif fmt == "csv":
        text = payload["csv"]
    else:
        text = payload.get("text", json.dumps(payload, indent=2))
    if out:
        target = Path(out)
        target.mkdir(parents=True, exist_ok=True)
        path = target / filename
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(text + "\n")
        tmp.replace(path)
        click.echo(str(path))
    else:
        click.echo(text)


def spec_options(fn):
    decorators = [
        click.option("--spec", "spec_path", type=click.Path(), help="Network-spec JSON file."),
        click.option("--topology", type=click.Choice(["tandem", "star", "grid", "complete"])),
        click.option("--n", type=int),
        click.option("--k", type=int),
        click.option("--d", type=int),
        click.option("--alpha", type=str),
        click.option("--M", "m", type=str),
        click.option("--failed", type=int),
        click.option("--center", type=int, help="Star center node."),
        click.option("--rows", type=int),
        click.option("--cols", type=int),
    ]
    for dec in reversed(decorators):
        fn = dec(fn)
    return fn


@click.group()
def main():
    """Minimum-cost repair planning for networked storage."""


@main.group()
def topology():
    """Topology utilities."""


@topology.command("gen")
@spec_options
@click.option("--out", type=click.Path(), help="Directory for the generated file.")
def topology_gen(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols, out):
    """Generate a network-spec JSON document."""
    spec = _load_spec(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols)
    _emit(spec_to_json(spec), "json", out, "network.json")


@main.command()
@spec_options
@click.option("--raw", is_flag=True, help="Skip constraint reduction.")
@click.option("--out", type=click.Path())
def constraints(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols, raw, out):
    """Enumerate the cut-set constraints of the repair LP."""
    spec = _load_spec(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols)
    fg = build_flow_graph(spec)
    cs = enumerate_cut_constraints(fg, reduce=not raw)
    _emit(cs.to_json(), "json", out, "constraints.json")


@main.command()
@spec_options
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", type=click.Path())
def solve(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols, fmt, out):
    """Solve the minimum-cost repair LP exactly."""
    spec = _load_spec(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols)
    fg = build_flow_graph(spec)
    cs = enumerate_cut_constraints(fg)
    costs = [spec.cost.cost(i, j) for (i, j) in cs.edge_index]
    sol = solve_min_cost(cs, costs)
    payload = {
        "status": sol.status,
        "value": format_rational(sol.value),
        "z": {f"{i}->{j}": format_rational(v)
              for (i, j), v in zip(cs.edge_index, sol.z_star)},
        "dual": [format_rational(y) for y in sol.dual],
        "pivots": sol.pivots,
    }
    payload["csv"] = "status,value\n" + f"{sol.status},{format_rational(sol.value)}"
    _emit(payload, fmt, out, "solution.json" if fmt == "json" else "solution.csv")


@main.command("bounds")
@spec_options
@click.option("--out", type=click.Path())
def bounds_cmd(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols, out):
    """Compare the LP optimum to baselines and closed-form bounds (CSV)."""
    spec = _load_spec(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols)
    report = bounds_mod.compare_lp_to_bounds(spec)
    gain_paper = ""
    if spec.kind == "tandem" and spec.failed in (1, spec.n):
        gain_paper = format_rational(bounds_mod.gain_tandem_endnode(spec.n, spec.k))
    elif spec.kind == "star" and spec.failed != spec.param("center"):
        gain_paper = format_rational(bounds_mod.gain_star_noncentral(spec.n, spec.k))
    header = "topology,n,k,M,alpha,lp,closed_form,baseline,gain_paper,gain_computed"
    row = ",".join([
        spec.kind, str(spec.n), str(spec.k), format_rational(spec.M),
        format_rational(spec.alpha), format_rational(report.sigma_opt),
        format_rational(report.closed_form_value) if report.closed_form_value is not None else "",
        format_rational(report.sigma_non_opt), gain_paper,
        format_rational(report.g_c),
    ])
    _emit({"csv": header + "\n" + row}, "csv", out, "bounds.csv")


@main.command()
@spec_options
@click.option("--seed", type=int)
@click.option("--retries", "-R", type=int, default=coder.DEFAULT_RETRIES)
@click.option("--out", type=click.Path())
def code(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols, seed, retries, out):
    """Construct and verify a code achieving the LP-optimal repair cost."""
    spec = _load_spec(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols)
    seed = _seed_option(seed)
    try:
        report = coder.run_repair(spec, seed, retries=retries)
    except coder.CoderError as exc:
        click.echo(f"code construction failed: {exc}", err=True)
        sys.exit(1)
    payload = {key: (format_rational(v) if isinstance(v, Fraction) else v)
               for key, v in report.items()}
    _emit(payload, "json", out, "code-report.json")
    if not report["rcp_ok"]:
        sys.exit(1)


@main.command()
@spec_options
@click.option("--stages", "-T", type=int, default=10)
@click.option("--seed", type=int)
@click.option("--retries", "-R", type=int, default=coder.DEFAULT_RETRIES)
@click.option("--out", type=click.Path())
def simulate(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols,
             stages, seed, retries, out):
    """Run repeated failure/repair stages and verify the code each time."""
    spec = _load_spec(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols)
    seed = _seed_option(seed)
    try:
        reports = coder.simulate_stages(spec, stages, seed, retries=retries)
    except coder.CoderError as exc:
        click.echo(f"simulation failed: {exc}", err=True)
        sys.exit(1)
    payload = {
        "seed": seed,
        "stages": [
            {key: (format_rational(v) if isinstance(v, Fraction) else v)
             for key, v in rep.items()}
            for rep in reports
        ],
    }
    _emit(payload, "json", out, "simulation.json")
    if any(not rep["rcp_ok"] for rep in reports):
        sys.exit(1)


@main.command("exact-repair")
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--q", type=int, required=True)
@click.option("--failed", "-t", type=int, required=True)
@click.option("--k1", type=int)
@click.option("--k2", type=int)
@click.option("--seed", type=int)
@click.option("--out", type=click.Path())
def exact_repair_cmd(n, k, q, failed, k1, k2, seed, out):
    """Exact line-network repair with the explicit Vandermonde code."""
    seed = _seed_option(seed)
    try:
        code_obj = exacttandem.init_vandermonde(n, k, q, seed=seed)
        if k1 is None or k2 is None:
            k1, k2 = exacttandem.default_split(failed, n, k)
        transcript = exacttandem.exact_repair(code_obj, failed, k1, k2)
    except (exacttandem.ExactRepairError, ValueError) as exc:
        raise click.UsageError(str(exc))
    payload = {
        "n": n, "k": k, "q": q, "failed": failed, "k1": k1, "k2": k2,
        "seed": seed,
        "message": list(code_obj.message),
        "hops": [{"from": a, "to": b, "symbol": s} for a, b, s in transcript.hops],
        "restored": transcript.restored,
        "expected": transcript.expected,
        "exact": transcript.exact,
        "hop_count": transcript.hop_count,
    }
    _emit(payload, "json", out, "exact-repair.json")
    if not transcript.exact:
        sys.exit(1)


@main.command()
@spec_options
@click.option("--z", "z_text", required=True,
              help="Comma-separated fragment counts, matching the edge order.")
def verify(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols, z_text):
    """Check a user-supplied subgraph against the cut constraints."""
    spec = _load_spec(spec_path, topology, n, k, d, alpha, m, failed, center, rows, cols)
    fg = build_flow_graph(spec)
    cs = enumerate_cut_constraints(fg)
    try:
        z = [parse_rational(part) for part in z_text.split(",")]
        if any(v is None for v in z):
            raise ValueError("z entries must be finite")
        feasible = check_feasible(cs, z)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    cost = sum(spec.cost.cost(i, j) * v for (i, j), v in zip(cs.edge_index, z))
    click.echo(json.dumps({
        "feasible": feasible,
        "cost": format_rational(cost),
        "edge_index": [f"{i}->{j}" for (i, j) in cs.edge_index],
    }, indent=2))
    if not feasible:
        sys.exit(1)


@main.command("fixtures")
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text")
def fixtures_cmd(fmt):
    """Run the built-in fixture suite and print a pass/fail table."""
    rows = fixtures.run_fixture_suite()
    if fmt == "json":
        click.echo(json.dumps([
            {"name": r.name, "lp": format_rational(r.lp_value),
             "expected": format_rational(r.expected_lp),
             "published": format_rational(r.published_lp),
             "baseline": format_rational(r.baseline),
             "gain": format_rational(r.gain), "ok": r.ok}
            for r in rows
        ], indent=2))
    else:
        sep = "," if fmt == "csv" else "  "
        widths = (18, 8, 8, 10, 8, 8, 6) if fmt == "text" else None
        header = ["fixture", "lp", "expected", "published", "baseline", "gain", "status"]
        lines = []
        for r in rows:
            lines.append([r.name, format_rational(r.lp_value),
                          format_rational(r.expected_lp), format_rational(r.published_lp),
                          format_rational(r.baseline),
                          format_rational(r.gain), "PASS" if r.ok else "FAIL"])
        if fmt == "text":
            fmt_row = lambda cells: sep.join(c.ljust(w) for c, w in zip(cells, widths))
            click.echo(fmt_row(header))
            for line in lines:
                click.echo(fmt_row(line))
        else:
            click.echo(sep.join(header))
            for line in lines:
                click.echo(sep.join(line))
    if not all(r.ok for r in rows):
        sys.exit(1)


if __name__ == "__main__":
    main()
