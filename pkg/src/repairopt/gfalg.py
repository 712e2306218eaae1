"""Prime-field arithmetic and exact linear algebra over GF(q).

Matrices are plain row-major lists of ints in [0, q); all routines take
the prime modulus explicitly. Elimination uses the first nonzero pivot in
column order so determinants and solutions are reproducible.
"""

from __future__ import annotations

PRIME_SEARCH_LIMIT = 10_000_000


class SingularMatrixError(ValueError):
    pass


def is_prime(x: int) -> bool:
    if x < 2:
        return False
    if x < 4:
        return True
    if x % 2 == 0:
        return False
    f = 3
    while f * f <= x:
        if x % f == 0:
            return False
        f += 2
    return True


def smallest_prime_geq(x: int, limit: int = PRIME_SEARCH_LIMIT) -> int:
    """Least prime >= x by trial division; desk-scale inputs only."""
    if x < 2:
        raise ValueError("need x >= 2")
    if x > limit:
        raise ValueError(f"prime search limit {limit} exceeded")
    p = x
    while not is_prime(p):
        p += 1
        if p > limit:
            raise ValueError(f"prime search limit {limit} exceeded")
    return p


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a: list[list[int]], b: list[list[int]], q: int) -> list[list[int]]:
    if len(a[0]) != len(b):
        raise ValueError("dimension mismatch")
    cols = len(b[0])
    out = []
    for row in a:
        acc = [0] * cols
        for x, brow in zip(row, b):
            if x:
                for j in range(cols):
                    acc[j] += x * brow[j]
        out.append([v % q for v in acc])
    return out


def mat_vec(a: list[list[int]], v: list[int], q: int) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) % q for row in a]


def _eliminate(m: list[list[int]], q: int) -> tuple[list[list[int]], list[int], int]:
    """Row echelon form; returns (matrix, pivot columns, swap sign)."""
    m = [[x % q for x in row] for row in m]
    nrows, ncols = len(m), len(m[0])
    pivots = []
    sign = 1
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        piv = next((r for r in range(row, nrows) if m[r][col] % q != 0), None)
        if piv is None:
            continue
        if piv != row:
            m[row], m[piv] = m[piv], m[row]
            sign = -sign
        inv = pow(m[row][col], -1, q)
        m[row] = [(x * inv) % q for x in m[row]]
        for r in range(nrows):
            if r != row and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    return m, pivots, sign


def mat_rank(m: list[list[int]], q: int) -> int:
    if not m:
        return 0
    _, pivots, _ = _eliminate(m, q)
    return len(pivots)


def mat_det(m: list[list[int]], q: int) -> int:
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    work = [[x % q for x in row] for row in m]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] % q != 0), None)
        if piv is None:
            return 0
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = (-det) % q
        det = (det * work[col][col]) % q
        inv = pow(work[col][col], -1, q)
        work[col] = [(x * inv) % q for x in work[col]]
        for r in range(col + 1, n):
            if work[r][col]:
                f = work[r][col]
                work[r] = [(x - f * y) % q for x, y in zip(work[r], work[col])]
    return det % q


def mat_solve(a: list[list[int]], b: list[int], q: int) -> list[int]:
    """Solve a x = b over GF(q); raises SingularMatrixError if singular."""
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("solve needs a square system")
    aug = [row[:] + [b[i]] for i, row in enumerate(a)]
    reduced, pivots, _ = _eliminate(aug, q)
    if len(pivots) != n or pivots != list(range(n)):
        raise SingularMatrixError("singular system")
    return [reduced[i][n] % q for i in range(n)]


def mat_inv(a: list[list[int]], q: int) -> list[list[int]]:
    n = len(a)
    aug = [row[:] + identity(n)[i] for i, row in enumerate(a)]
    reduced, pivots, _ = _eliminate(aug, q)
    if len(pivots) != n or pivots != list(range(n)):
        raise SingularMatrixError("singular matrix")
    return [row[n:] for row in reduced]
