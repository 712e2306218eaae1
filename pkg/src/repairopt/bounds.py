"""Closed-form repair-cost lower bounds and optimization-gain reporting.

The line and star formulas are tight for unit link costs, so they double
as cross-checks on the LP. The gain compares the bandwidth-optimal
shortest-path baseline against the optimized cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .flowgraph import build_flow_graph, enumerate_cut_constraints
from .lpcore import solve_min_cost
from .netmodel import NetworkSpec, baseline_cost


def msr_beta(M, k: int, d: int) -> Fraction:
    """Per-helper download at the minimum-storage point: M / (k (d-k+1))."""
    if d < k:
        raise ValueError("need d >= k")
    return Fraction(M) / (k * (d - k + 1))


def _pos(x: Fraction) -> Fraction:
    return x if x > 0 else Fraction(0)


def tandem_lower_bound(k: int, M, alpha) -> Fraction:
    """k (M - (k-1) alpha), clamped at zero; tight for unit-cost lines."""
    return k * _pos(Fraction(M) - (k - 1) * Fraction(alpha))


def star_lower_bound(n: int, k: int, M, alpha) -> Fraction:
    """((n-2)/(n-k) + 1)(M - (k-1) alpha)+ for a non-central failure."""
    factor = Fraction(n - 2, n - k) + 1
    return factor * _pos(Fraction(M) - (k - 1) * Fraction(alpha))


def gain_tandem_endnode(n: int, k: int) -> Fraction:
    """End-of-line gain formula n(n+1) / (2k(n-k)) at M=k(n-k), alpha=n-k.

    The numerator counts hop costs n, n-1, ..., 1; it differs from the
    shortest-path baseline this package computes (see compare_lp_to_bounds,
    which reports both).
    """
    return Fraction(n * (n + 1), 2 * k * (n - k))


def gain_star_noncentral(n: int, k: int) -> Fraction:
    """Non-central-failure gain (2n-3) / (2n-k-2) at M=k(n-k), alpha=n-k."""
    return Fraction(2 * n - 3, 2 * n - k - 2)


@dataclass(frozen=True)
class GainReport:
    sigma_non_opt: Fraction
    sigma_opt: Fraction
    g_c: Fraction
    closed_form_value: Fraction | None
    matches_closed_form: bool


def closed_form_for(spec: NetworkSpec) -> Fraction | None:
    """The applicable tight bound, if one exists for this topology.

    Only unit-cost line networks and star networks with a non-central
    failure have closed forms; everything else returns None.
    """
    unit = all(c == 1 for c in (spec.cost.cost(i, j) for (i, j) in spec.cost.edges()))
    if not unit:
        return None
    if spec.kind == "tandem":
        return tandem_lower_bound(spec.k, spec.M, spec.alpha)
    if spec.kind == "star" and spec.failed != spec.param("center"):
        return star_lower_bound(spec.n, spec.k, spec.M, spec.alpha)
    return None


def compare_lp_to_bounds(spec: NetworkSpec) -> GainReport:
    """Solve the LP and report baseline, optimum, gain, and the closed form."""
    fg = build_flow_graph(spec)
    cs = enumerate_cut_constraints(fg)
    costs = [spec.cost.cost(i, j) for (i, j) in cs.edge_index]
    sol = solve_min_cost(cs, costs)
    if sol.status != "optimal":
        raise RuntimeError(f"LP did not solve: {sol.status}")
    base = baseline_cost(spec)
    if sol.value < 0 or sol.value > base:
        raise RuntimeError("LP value violates the baseline sandwich")
    closed = closed_form_for(spec)
    return GainReport(
        sigma_non_opt=base,
        sigma_opt=sol.value,
        g_c=base / sol.value if sol.value else Fraction(0),
        closed_form_value=closed,
        matches_closed_form=(closed == sol.value) if closed is not None else False,
    )
