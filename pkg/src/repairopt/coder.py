"""Construction and verification of optimal-cost minimum-storage codes.

The pipeline: solve the repair LP, scale the optimal subgraph to integral
fragment counts, pick a prime field from the degree bound, then execute
the repair as random linear coding with surviving-node cooperation. Nodes
are processed in topological order; each forwards fresh random
combinations of everything it stores plus everything it received this
stage, and the regenerated node keeps random combinations of its inflow.
Repair is functional: the new coefficients need not equal the lost ones,
only the any-k-reconstruct property must survive.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import gfalg
from .flowgraph import FlowGraphError, build_flow_graph, enumerate_cut_constraints
from .lpcore import LPSolution, solve_min_cost
from .netmodel import NetworkSpec, TopologyError, respec_failure


class CoderError(RuntimeError):
    pass


class PlanInfeasibleError(CoderError):
    """The subgraph does not deliver enough fragments to the new node."""


class RetryExhaustedError(CoderError):
    """Random coding failed to satisfy the code property within the budget."""


DEFAULT_RETRIES = 100


@dataclass(frozen=True)
class RepairPlan:
    """Integral repair traffic for one stage, plus the field parameters."""

    edges: tuple[tuple[int, int], ...]
    counts: tuple[int, ...]  # subfragments per edge, after scaling
    scale: int               # subfragments per original fragment
    new_node: int
    lp_value: Fraction       # in original fragment units
    n_nc: int
    d0: int
    q: int

    def active_edges(self) -> list[tuple[tuple[int, int], int]]:
        return [(e, c) for e, c in zip(self.edges, self.counts) if c > 0]

    def achieved_cost(self, spec: NetworkSpec) -> Fraction:
        total = sum((spec.cost.cost(i, j) * c for (i, j), c in self.active_edges()),
                    Fraction(0))
        return total / self.scale


def compute_n_nc(edges, counts, new_node: int) -> int:
    """1 + the largest number of encoding nodes on any active path into
    the new node (the new node itself counts as one encoder)."""
    active = [(i, j) for (i, j), c in zip(edges, counts) if c > 0]
    if not active:
        raise CoderError("empty repair plan")
    nodes = {v for e in active for v in e}
    indeg = {v: 0 for v in nodes}
    for _, j in active:
        indeg[j] += 1
    order = [v for v in sorted(nodes) if indeg[v] == 0]
    depth = {v: 0 for v in nodes}
    seen = []
    queue = list(order)
    while queue:
        v = queue.pop(0)
        seen.append(v)
        for (i, j) in active:
            if i == v:
                depth[j] = max(depth[j], depth[i] + 1)
                indeg[j] -= 1
                if indeg[j] == 0:
                    queue.append(j)
    return depth[new_node] + 1


def field_size_bound(n: int, k: int, M_scaled: int, n_nc: int) -> int:
    """Degree bound on the product of code determinants; the field must be
    strictly larger than this."""
    if not (1 <= k <= n):
        raise ValueError("need n >= k >= 1")
    return math.comb(n, k) * M_scaled * n_nc


def make_plan(spec: NetworkSpec, cs, sol: LPSolution) -> RepairPlan:
    """Scale the LP vertex to integral subfragment counts and fix the field."""
    if sol.status != "optimal":
        raise CoderError(f"cannot plan from LP status {sol.status}")
    denoms = [v.denominator for v in sol.z_star]
    denoms += [spec.alpha.denominator, spec.M.denominator]
    scale = math.lcm(*denoms) if denoms else 1
    counts = tuple(int(v * scale) for v in sol.z_star)
    n_nc = compute_n_nc(cs.edge_index, counts, spec.failed)
    M_scaled = int(spec.M * scale)
    d0 = field_size_bound(spec.n, spec.k, M_scaled, n_nc)
    q = gfalg.smallest_prime_geq(d0 + 1)
    return RepairPlan(edges=cs.edge_index, counts=counts, scale=scale,
                      new_node=spec.failed, lp_value=sol.value,
                      n_nc=n_nc, d0=d0, q=q)


@dataclass(frozen=True)
class CodeState:
    """Per-node coding coefficients over GF(q), at subfragment granularity."""

    q: int
    n: int
    k: int
    M_s: int      # file size in subfragments
    alpha_s: int  # stored subfragments per node
    scale: int
    columns: tuple[tuple[tuple[int, ...], ...], ...]  # [node-1][col][row]

    def node_columns(self, i: int) -> list[list[int]]:
        return [list(c) for c in self.columns[i - 1]]


def _subset_rank(state_columns, subset, M_s: int, q: int) -> int:
    cols = []
    for node in subset:
        cols.extend(state_columns[node - 1])
    matrix = [[col[r] for col in cols] for r in range(M_s)]
    return gfalg.mat_rank(matrix, q)


def verify_rcp(state: CodeState):
    """Check every k-subset spans the full file; returns (ok, witness)."""
    for subset in combinations(range(1, state.n + 1), state.k):
        if _subset_rank(state.columns, subset, state.M_s, state.q) != state.M_s:
            return False, subset
    return True, None


def _random_columns(rng: random.Random, q: int, nrows: int, ncols: int):
    return tuple(tuple(rng.randrange(q) for _ in range(nrows)) for _ in range(ncols))


def init_code(spec: NetworkSpec, q: int, *, seed=None, rng: random.Random | None = None,
              scale: int = 1, retries: int = DEFAULT_RETRIES) -> tuple[CodeState, int]:
    """Random initial code with the any-k property; returns (state, attempts)."""
    rng = rng if rng is not None else random.Random(seed)
    M_s = spec.M * scale
    alpha_s = spec.alpha * scale
    if M_s.denominator != 1 or alpha_s.denominator != 1:
        raise CoderError("scale does not make M and alpha integral")
    M_s, alpha_s = int(M_s), int(alpha_s)
    if M_s != spec.k * alpha_s:
        raise CoderError("coder requires the minimum-storage regime alpha = M/k")
    for attempt in range(1, retries + 1):
        cols = tuple(_random_columns(rng, q, M_s, alpha_s) for _ in range(spec.n))
        state = CodeState(q=q, n=spec.n, k=spec.k, M_s=M_s, alpha_s=alpha_s,
                          scale=scale, columns=cols)
        ok, _ = verify_rcp(state)
        if ok:
            return state, attempt
    raise RetryExhaustedError(f"no valid initial code in {retries} attempts (q={q})")


def load_code(q: int, k: int, node_columns, scale: int = 1) -> CodeState:
    """Wrap explicit per-node coefficient columns as a CodeState."""
    cols = tuple(tuple(tuple(c) for c in node) for node in node_columns)
    n = len(cols)
    M_s = len(cols[0][0])
    alpha_s = len(cols[0])
    return CodeState(q=q, n=n, k=k, M_s=M_s, alpha_s=alpha_s, scale=scale,
                     columns=cols)


def _topological_nodes(active, new_node: int) -> list[int]:
    nodes = {v for e, _ in active for v in e}
    indeg = {v: 0 for v in nodes}
    for (_, j), _ in active:
        indeg[j] += 1
    order = []
    ready = sorted(v for v in nodes if indeg[v] == 0)
    while ready:
        v = ready.pop(0)
        order.append(v)
        for (i, j), _ in active:
            if i == v:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        ready.sort()
    return order


def regenerate(state: CodeState, spec: NetworkSpec, plan: RepairPlan, *,
               seed=None, rng: random.Random | None = None,
               retries: int = DEFAULT_RETRIES) -> tuple[CodeState, int]:
    """Execute the repair along the plan; returns (new state, attempts).

    Each attempt redraws every coding coefficient; an attempt fails only
    if the regenerated system loses the any-k property.
    """
    rng = rng if rng is not None else random.Random(seed)
    if plan.new_node != spec.failed:
        raise CoderError("plan was built for a different failure")
    if plan.scale != state.scale:
        raise CoderError("plan granularity does not match the code state")
    q = state.q
    active = plan.active_edges()
    if not active:
        raise PlanInfeasibleError("empty repair plan")
    inflow = sum(c for (_, j), c in active if j == plan.new_node)
    if inflow < state.alpha_s:
        raise PlanInfeasibleError(
            f"plan delivers {inflow} subfragments, new node stores {state.alpha_s}")
    order = _topological_nodes(active, plan.new_node)

    for attempt in range(1, retries + 1):
        received: dict[int, list[list[int]]] = {}
        for node in order:
            if node == plan.new_node:
                continue
            pool = state.node_columns(node) + received.get(node, [])
            for (i, j), count in active:
                if i != node:
                    continue
                for _ in range(count):
                    combo = [0] * state.M_s
                    for vec in pool:
                        c = rng.randrange(q)
                        if c:
                            for r in range(state.M_s):
                                combo[r] += c * vec[r]
                    received.setdefault(j, []).append([x % q for x in combo])
        pool = received.get(plan.new_node, [])
        new_cols = []
        for _ in range(state.alpha_s):
            combo = [0] * state.M_s
            for vec in pool:
                c = rng.randrange(q)
                if c:
                    for r in range(state.M_s):
                        combo[r] += c * vec[r]
            new_cols.append(tuple(x % q for x in combo))
        columns = list(state.columns)
        columns[spec.failed - 1] = tuple(new_cols)
        candidate = CodeState(q=q, n=state.n, k=state.k, M_s=state.M_s,
                              alpha_s=state.alpha_s, scale=state.scale,
                              columns=tuple(columns))
        ok, _ = verify_rcp(candidate)
        if ok:
            return candidate, attempt
    raise RetryExhaustedError(f"repair failed RCP in {retries} attempts (q={q})")


def run_repair(spec: NetworkSpec, seed=None, *, retries: int = DEFAULT_RETRIES) -> dict:
    """Full single-stage pipeline: constraints, LP, field choice, code
    initialization, repair execution and verification."""
    fg = build_flow_graph(spec)
    cs = enumerate_cut_constraints(fg)
    costs = [spec.cost.cost(i, j) for (i, j) in cs.edge_index]
    sol = solve_min_cost(cs, costs)
    plan = make_plan(spec, cs, sol)
    rng = random.Random(seed)
    state, init_attempts = init_code(spec, plan.q, rng=rng, scale=plan.scale,
                                     retries=retries)
    repaired, repair_attempts = regenerate(state, spec, plan, rng=rng, retries=retries)
    ok, witness = verify_rcp(repaired)
    return {
        "failed": spec.failed,
        "lp_value": sol.value,
        "achieved_cost": plan.achieved_cost(spec),
        "q": plan.q,
        "d0": plan.d0,
        "n_nc": plan.n_nc,
        "scale": plan.scale,
        "rcp_ok": ok,
        "witness": witness,
        "init_attempts": init_attempts,
        "repair_attempts": repair_attempts,
        "seed": seed,
    }


def _plan_for_failure(spec: NetworkSpec, failed: int):
    stage_spec = respec_failure(spec, failed)
    fg = build_flow_graph(stage_spec)
    cs = enumerate_cut_constraints(fg)
    costs = [stage_spec.cost.cost(i, j) for (i, j) in cs.edge_index]
    sol = solve_min_cost(cs, costs)
    return stage_spec, make_plan(stage_spec, cs, sol)


def _rescale_plan(plan: RepairPlan, scale: int, q: int, d0: int) -> RepairPlan:
    factor = scale // plan.scale
    return RepairPlan(edges=plan.edges,
                      counts=tuple(c * factor for c in plan.counts),
                      scale=scale, new_node=plan.new_node,
                      lp_value=plan.lp_value, n_nc=plan.n_nc, d0=d0, q=q)


def simulate_stages(spec: NetworkSpec, T: int, seed=None, *,
                    retries: int = DEFAULT_RETRIES) -> list[dict]:
    """T rounds of uniform failure, LP planning, repair and verification.

    Plans for every repairable node are computed up front; a single
    subfragment scale (the lcm over those plans) and a single field,
    chosen from the conservative bound n_nc <= n, keep one code state
    alive across all stages even when some optima are fractional.
    """
    if T < 1:
        raise CoderError("need at least one stage")
    rng = random.Random(seed)
    plans: dict[int, tuple[NetworkSpec, RepairPlan]] = {}
    for node in range(1, spec.n + 1):
        try:
            plans[node] = _plan_for_failure(spec, node)
        except (TopologyError, FlowGraphError):
            continue
    if not plans:
        raise CoderError("no node of this network is repairable")
    scale = math.lcm(*(plan.scale for _, plan in plans.values()))
    M_s = spec.M * scale
    if M_s.denominator != 1:
        raise CoderError("scale does not make M integral")
    d0 = field_size_bound(spec.n, spec.k, int(M_s), spec.n)
    q = gfalg.smallest_prime_geq(d0 + 1)
    plans = {node: (stage_spec, _rescale_plan(plan, scale, q, d0))
             for node, (stage_spec, plan) in plans.items()}
    state, _ = init_code(spec, q, rng=rng, scale=scale, retries=retries)
    candidates = sorted(plans)
    reports = []
    for stage in range(1, T + 1):
        failed = candidates[rng.randrange(len(candidates))]
        stage_spec, plan = plans[failed]
        sol_value = plan.lp_value
        state, attempts = regenerate(state, stage_spec, plan, rng=rng, retries=retries)
        ok, _ = verify_rcp(state)
        reports.append({
            "stage": stage,
            "failed": failed,
            "lp_value": sol_value,
            "achieved_cost": plan.achieved_cost(stage_spec),
            "q": q,
            "d0": plan.d0,
            "n_nc": plan.n_nc,
            "rcp_ok": ok,
            "repair_attempts": attempts,
            "seed": seed,
        })
        if not ok:
            break
    return reports
