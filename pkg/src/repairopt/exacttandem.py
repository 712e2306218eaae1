"""Explicit exact repair for line networks via a Vandermonde code.

Each node t stores the single symbol v_t = m_1 + m_2*a_t + ... +
m_k*a_t^(k-1), the evaluation of the message polynomial at that node's
point. A failed node is rebuilt from k helpers, k1 on its left and k2 on
its right: each directional chain forwards exactly one running combination
per hop, and the two arriving symbols sum to the lost value exactly. Every
repair therefore costs k unit hops, meeting the line-network lower bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import gfalg


class ExactRepairError(ValueError):
    pass


@dataclass(frozen=True)
class VandermondeCode:
    """Scalar MDS code on a line of n nodes over GF(q), q prime > n."""

    n: int
    k: int
    q: int
    points: tuple[int, ...]    # distinct nonzero evaluation points, one per node
    message: tuple[int, ...]   # the k file fragments

    def stored_symbol(self, t: int) -> int:
        a = self.points[t - 1]
        return sum(m * pow(a, e, self.q) for e, m in enumerate(self.message)) % self.q

    def generator_matrix(self) -> list[list[int]]:
        return [[pow(a, e, self.q) for a in self.points] for e in range(self.k)]


def init_vandermonde(n: int, k: int, q: int, *, points=None, message=None,
                     seed=None) -> VandermondeCode:
    """Build the code; points default to 1..n, message is random if absent."""
    if k > n:
        raise ExactRepairError("need k <= n")
    if not gfalg.is_prime(q):
        raise ExactRepairError(f"{q} is not prime")
    if q <= n:
        raise ExactRepairError(f"need q > n for {n} distinct nonzero points")
    rng = random.Random(seed)
    if points is None:
        points = tuple(range(1, n + 1))
    else:
        points = tuple(p % q for p in points)
    if len(points) != n or len(set(points)) != n or any(p == 0 for p in points):
        raise ExactRepairError("points must be n distinct nonzero field elements")
    if message is None:
        message = tuple(rng.randrange(q) for _ in range(k))
    else:
        message = tuple(m % q for m in message)
        if len(message) != k:
            raise ExactRepairError(f"message must have {k} fragments")
    return VandermondeCode(n=n, k=k, q=q, points=points, message=message)


@dataclass(frozen=True)
class RepairTranscript:
    failed: int
    k1: int
    k2: int
    coefficients: tuple[int, ...]            # per helper, backward then forward
    hops: tuple[tuple[int, int, int], ...]   # (sender, receiver, symbol)
    restored: int
    expected: int

    @property
    def exact(self) -> bool:
        return self.restored == self.expected

    @property
    def hop_count(self) -> int:
        return len(self.hops)


def exact_repair(code: VandermondeCode, t: int, k1: int, k2: int) -> RepairTranscript:
    """Rebuild node t using k1 backward and k2 forward neighbours.

    Solves xi' A = (1, a_t, ..., a_t^(k-1)) for the helper Vandermonde
    block A, then walks both relay chains one combined symbol per hop.
    """
    if not (1 <= t <= code.n):
        raise ExactRepairError("failed node out of range")
    if k1 < 0 or k2 < 0 or k1 + k2 != code.k:
        raise ExactRepairError(f"need k1 + k2 = k = {code.k}")
    if t - k1 < 1:
        raise ExactRepairError(f"only {t - 1} backward helpers available, need {k1}")
    if t + k2 > code.n:
        raise ExactRepairError(f"only {code.n - t} forward helpers available, need {k2}")
    q = code.q
    backward = list(range(t - k1, t))
    forward = list(range(t + 1, t + k2 + 1))
    helpers = backward + forward

    A = [[pow(code.points[h - 1], e, q) for e in range(code.k)] for h in helpers]
    target = [pow(code.points[t - 1], e, q) for e in range(code.k)]
    # xi' A = target  <=>  A' xi = target'
    At = [[A[r][c] for r in range(code.k)] for c in range(code.k)]
    xi = gfalg.mat_solve(At, target, q)

    hops: list[tuple[int, int, int]] = []

    def run_chain(chain: list[int], coeffs: list[int], toward: int) -> int:
        acc = 0
        for idx, node in enumerate(chain):
            acc = (acc + coeffs[idx] * code.stored_symbol(node)) % q
            nxt = chain[idx + 1] if idx + 1 < len(chain) else toward
            hops.append((node, nxt, acc))
        return acc

    w_back = run_chain(backward, xi[:k1], t) if k1 else 0
    w_fwd = run_chain(list(reversed(forward)), list(reversed(xi[k1:])), t) if k2 else 0
    restored = (w_back + w_fwd) % q
    return RepairTranscript(failed=t, k1=k1, k2=k2, coefficients=tuple(xi),
                            hops=tuple(hops), restored=restored,
                            expected=code.stored_symbol(t))


def default_split(t: int, n: int, k: int) -> tuple[int, int]:
    """Balanced helper split clipped to what each side of the line offers."""
    k1 = min(t - 1, k // 2)
    k2 = k - k1
    if t + k2 > n:
        k2 = n - t
        k1 = k - k2
    if t - k1 < 1 or t + k2 > n:
        raise ExactRepairError(f"line too short to repair node {t} with k={k}")
    return k1, k2
