"""Storage network model: parameters, directed cost matrices, topology generators.

Node ids are 1-based. All costs are exact rationals; a missing cost-matrix
entry means "no direct link". The new node always takes over the failed
node's position and its incident links, so it is addressed by the failed
node's id throughout.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations


class TopologyError(ValueError):
    """Malformed or unusable network description."""


def parse_rational(value) -> Fraction | None:
    """Parse an integer, a "p/q" string, or "inf" (returned as None)."""
    if value is None:
        return None
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    text = str(value).strip().lower()
    if text in ("inf", "infinity"):
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise TopologyError(f"cannot parse rational {value!r}") from exc


def format_rational(x: Fraction | None) -> str:
    if x is None:
        return "inf"
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class CostMatrix:
    """Directed unit-transmission costs on an acyclic digraph.

    Entries are finite nonnegative rationals; the diagonal is implicitly 0.
    The digraph of finite entries must be acyclic (validated on construction).
    """

    def __init__(self, n: int, entries: dict[tuple[int, int], Fraction]):
        if n < 1:
            raise TopologyError("need at least one node")
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in entries.items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise TopologyError(f"edge ({i},{j}) out of range 1..{n}")
            if i == j:
                if c != 0:
                    raise TopologyError("diagonal entries must be 0")
                continue
            c = Fraction(c)
            if c < 0:
                raise TopologyError(f"negative cost on edge ({i},{j})")
            clean[(i, j)] = c
        self.n = n
        self._cost = dict(sorted(clean.items()))
        self._check_acyclic()

    def _check_acyclic(self) -> None:
        indeg = {v: 0 for v in range(1, self.n + 1)}
        for _, j in self._cost:
            indeg[j] += 1
        queue = deque(v for v, d in indeg.items() if d == 0)
        seen = 0
        while queue:
            v = queue.popleft()
            seen += 1
            for j in self.successors(v):
                indeg[j] -= 1
                if indeg[j] == 0:
                    queue.append(j)
        if seen != self.n:
            raise TopologyError("cost digraph contains a cycle")

    def cost(self, i: int, j: int) -> Fraction | None:
        """Direct link cost, 0 on the diagonal, None if no link."""
        if i == j:
            return Fraction(0)
        return self._cost.get((i, j))

    def edges(self) -> list[tuple[int, int]]:
        return list(self._cost)

    def successors(self, i: int) -> list[int]:
        return [j for (a, j) in self._cost if a == i]

    def predecessors(self, j: int) -> list[int]:
        return [i for (i, b) in self._cost if b == j]

    def to_rows(self) -> list[list[str]]:
        """n x n rows with "0" diagonal and "inf" for absent links."""
        rows = []
        for i in range(1, self.n + 1):
            row = []
            for j in range(1, self.n + 1):
                row.append(format_rational(self.cost(i, j)))
            rows.append(row)
        return rows

    def __eq__(self, other):
        return (
            isinstance(other, CostMatrix)
            and self.n == other.n
            and self._cost == other._cost
        )

    def __repr__(self):
        return f"CostMatrix(n={self.n}, edges={len(self._cost)})"


@dataclass(frozen=True)
class NetworkSpec:
    """Storage system parameters plus the repair scenario.

    alpha = M/k flags the minimum-storage regime that the coder targets;
    other (alpha, M) combinations are legal for planning only.
    """

    n: int
    k: int
    d: int
    alpha: Fraction
    M: Fraction
    failed: int
    helpers: tuple[int, ...]
    cost: CostMatrix
    kind: str = "custom"
    params: tuple[tuple[str, int], ...] = field(default=())

    def __post_init__(self):
        if not (1 <= self.k <= self.d <= self.n - 1):
            raise TopologyError(f"need k <= d <= n-1, got k={self.k} d={self.d} n={self.n}")
        if not (1 <= self.failed <= self.n):
            raise TopologyError("failed node out of range")
        if self.failed in self.helpers:
            raise TopologyError("failed node cannot be a helper")
        if len(set(self.helpers)) != len(self.helpers) or len(self.helpers) != self.d:
            raise TopologyError("helpers must be d distinct surviving nodes")
        if any(not (1 <= h <= self.n) for h in self.helpers):
            raise TopologyError("helper id out of range")
        if self.alpha <= 0 or self.M <= 0:
            raise TopologyError("alpha and M must be positive")
        if self.cost.n != self.n:
            raise TopologyError("cost matrix size does not match n")
        for h in self.helpers:
            if shortest_path_cost(self, h, self.failed) is None:
                raise TopologyError(f"helper {h} cannot reach the new node")

    @property
    def survivors(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if v != self.failed)

    def is_msr(self) -> bool:
        return self.alpha == self.M / self.k

    def param(self, name: str) -> int | None:
        return dict(self.params).get(name)


def shortest_path_cost(spec: NetworkSpec, i: int, j: int) -> Fraction | None:
    """Minimum total cost over directed paths i -> j; None if unreachable."""
    if i == j:
        return Fraction(0)
    cost = spec.cost
    dist: dict[int, Fraction] = {i: Fraction(0)}
    heap: list[tuple[Fraction, int]] = [(Fraction(0), i)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        if u == j:
            return du
        for v in cost.successors(u):
            dv = du + cost.cost(u, v)
            if v not in dist or dv < dist[v]:
                dist[v] = dv
                heapq.heappush(heap, (dv, v))
    return dist.get(j)


def baseline_cost(spec: NetworkSpec) -> Fraction:
    """Repair cost of the bandwidth-optimal approach without cooperation.

    Each helper ships beta fragments along its cheapest route to the new
    node; relays forward without combining.
    """
    from .bounds import msr_beta

    if not spec.is_msr():
        raise TopologyError("baseline is defined for the minimum-storage regime alpha = M/k")
    beta = msr_beta(spec.M, spec.k, spec.d)
    total = Fraction(0)
    for h in spec.helpers:
        c = shortest_path_cost(spec, h, spec.failed)
        if c is None:
            raise TopologyError(f"helper {h} cannot reach the new node")
        total += beta * c
    return total


def _undirected_adjacency(kind: str, n: int, center: int | None,
                          rows: int | None, cols: int | None) -> set[frozenset[int]]:
    links: set[frozenset[int]] = set()
    if kind == "tandem":
        for i in range(1, n):
            links.add(frozenset((i, i + 1)))
    elif kind == "star":
        if center is None or not (1 <= center <= n):
            raise TopologyError("star topology needs a valid center id")
        for i in range(1, n + 1):
            if i != center:
                links.add(frozenset((i, center)))
    elif kind == "grid":
        if rows is None or cols is None or rows * cols != n:
            raise TopologyError("grid topology needs rows*cols == n")
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c + 1
                if c + 1 < cols:
                    links.add(frozenset((v, v + 1)))
                if r + 1 < rows:
                    links.add(frozenset((v, v + cols)))
    elif kind == "complete":
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                links.add(frozenset((i, j)))
    else:
        raise TopologyError(f"unknown topology kind {kind!r}")
    return links


def _orient_toward(links: set[frozenset[int]], n: int, target: int) -> list[tuple[int, int]]:
    """Orient each link toward the target by undirected BFS distance.

    Ties (equal distance) break low-id -> high-id, which keeps the digraph
    acyclic: cross-level edges strictly decrease the distance and same-level
    edges follow a fixed total order.
    """
    adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
    for link in links:
        a, b = tuple(link)
        adj[a].add(b)
        adj[b].add(a)
    dist = {target: 0}
    queue = deque([target])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    oriented = []
    for link in links:
        a, b = sorted(link)
        da, db = dist.get(a), dist.get(b)
        if da is None or db is None:
            continue
        if da > db:
            oriented.append((a, b))
        elif db > da:
            oriented.append((b, a))
        else:
            oriented.append((a, b))
    return sorted(oriented)


def build_topology(kind: str, n: int, *, k: int, M, alpha=None, d: int | None = None,
                   failed: int | None = None, helpers=None, center: int | None = None,
                   rows: int | None = None, cols: int | None = None,
                   cost_matrix: CostMatrix | None = None,
                   overrides: dict[tuple[int, int], Fraction] | None = None) -> NetworkSpec:
    """Build a NetworkSpec for one of the canonical topologies.

    Generated links carry unit cost unless overridden; overrides match an
    oriented edge by its endpoint pair in either order. kind="custom"
    takes an explicit (already directed) cost matrix instead.
    """
    if n < 3:
        raise TopologyError("need n >= 3")
    M = parse_rational(M)
    alpha = parse_rational(alpha) if alpha is not None else M / k
    if M is None or alpha is None:
        raise TopologyError("alpha and M must be finite")
    failed = n if failed is None else failed
    if not (1 <= failed <= n):
        raise TopologyError("failed node out of range")
    if helpers is None:
        helpers = tuple(v for v in range(1, n + 1) if v != failed)
        if d is not None:
            helpers = helpers[:d]
    helpers = tuple(helpers)
    d = len(helpers) if d is None else d

    params: list[tuple[str, int]] = []
    if kind == "custom":
        if cost_matrix is None:
            raise TopologyError("custom topology needs an explicit cost matrix")
        cm = cost_matrix
    else:
        links = _undirected_adjacency(kind, n, center, rows, cols)
        oriented = _orient_toward(links, n, failed)
        entries: dict[tuple[int, int], Fraction] = {}
        for (i, j) in oriented:
            c = Fraction(1)
            if overrides:
                c = overrides.get((i, j), overrides.get((j, i), c))
            entries[(i, j)] = Fraction(c)
        cm = CostMatrix(n, entries)
        if kind == "star":
            params.append(("center", center))
        if kind == "grid":
            params.extend([("rows", rows), ("cols", cols)])

    return NetworkSpec(n=n, k=k, d=d, alpha=alpha, M=M, failed=failed,
                       helpers=helpers, cost=cm, kind=kind, params=tuple(params))


def respec_failure(spec: NetworkSpec, failed: int) -> NetworkSpec:
    """Rebuild the same topology for a failure at a different position.

    Link costs carry over by endpoint pair, so non-unit links keep their
    cost when the orientation flips toward the new failure.
    """
    if spec.kind == "custom":
        if failed != spec.failed:
            raise TopologyError("cannot re-derive a custom topology for a new failure")
        return spec
    overrides = {(i, j): c for (i, j) in spec.cost.edges()
                 if (c := spec.cost.cost(i, j)) != 1}
    return build_topology(
        spec.kind, spec.n, k=spec.k, M=spec.M, alpha=spec.alpha, failed=failed,
        center=spec.param("center"), rows=spec.param("rows"), cols=spec.param("cols"),
        overrides=overrides)


def spec_to_json(spec: NetworkSpec) -> dict:
    """Canonical JSON document for the CLI (rationals as strings, "inf" links)."""
    return {
        "n": spec.n,
        "k": spec.k,
        "d": spec.d,
        "alpha": format_rational(spec.alpha),
        "M": format_rational(spec.M),
        "failed": spec.failed,
        "helpers": list(spec.helpers),
        "cost": spec.cost.to_rows(),
    }


def spec_from_json(doc: dict) -> NetworkSpec:
    try:
        n = int(doc["n"])
        rows = doc["cost"]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise TopologyError("cost matrix must be n x n")
        entries = {}
        for i, row in enumerate(rows, start=1):
            for j, cell in enumerate(row, start=1):
                c = parse_rational(cell)
                if i == j or c is None:
                    continue
                entries[(i, j)] = c
        return NetworkSpec(
            n=n,
            k=int(doc["k"]),
            d=int(doc["d"]),
            alpha=parse_rational(doc["alpha"]),
            M=parse_rational(doc["M"]),
            failed=int(doc["failed"]),
            helpers=tuple(int(h) for h in doc["helpers"]),
            cost=CostMatrix(n, entries),
        )
    except KeyError as exc:
        raise TopologyError(f"network document missing field {exc}") from exc
