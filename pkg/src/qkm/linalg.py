"""
Dense exact linear algebra over QScalar, on numpy object arrays.

Elimination is Gauss-Jordan over the field; pivots are chosen among the
candidate rows by smallest :meth:`QScalar.complexity` to limit expression
growth.  Pivot *columns* are always taken left to right, so
:func:`independent_columns` returns the greedy (lexicographically first)
maximal independent set regardless of the row pivot rule.
"""

from __future__ import annotations

from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import NonUniqueSolution, NoSolution
from .qfield import QScalar, one, zero

ZERO = zero(1)
ONE = one(1)


def _as_q(x) -> QScalar:
    return x if isinstance(x, QScalar) else QScalar(x)


def zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(ZERO)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def diagonal(entries: Sequence[QScalar]) -> np.ndarray:
    out = zeros(len(entries), len(entries))
    for i, x in enumerate(entries):
        out[i, i] = _as_q(x)
    return out


def matrix(rows: Iterable[Iterable]) -> np.ndarray:
    rows = [[_as_q(x) for x in r] for r in rows]
    if not rows:
        return zeros(0, 0)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = x
    return out


def column(entries: Sequence) -> np.ndarray:
    out = zeros(len(entries), 1)
    for i, x in enumerate(entries):
        out[i, 0] = _as_q(x)
    return out


def unit_column(n: int, i: int) -> np.ndarray:
    out = zeros(n, 1)
    out[i, 0] = ONE
    return out


def _common_k(*mats: np.ndarray) -> int:
    k = 1
    for m in mats:
        for x in m.flat:
            if x and x.k != k:
                k = lcm(k, x.k)
    return k


def _clear_denominators(entries, k: int):
    """Write nonzero ``entries`` as ``t**shift * poly / den`` with one shared shift and den."""
    xs = [x.promote(k) for x in entries]
    shift = min(x.shift for x in xs)
    den = xs[0].den
    for x in xs[1:]:
        if not x.den.is_one() and x.den != den:
            den = den * (x.den // den.gcd(x.den))
    polys = []
    for x in xs:
        p = x.num if x.den == den else x.num * (den // x.den)
        polys.append(p.left_shift(x.shift - shift) if x.shift != shift else p)
    return shift, den, polys


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product.

    Rows of ``a`` and columns of ``b`` are brought to common denominators
    first so the inner sums are plain polynomial arithmetic; each output
    entry is normalized once.
    """
    m, n = a.shape
    n2, p = b.shape
    if n != n2:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    out = zeros(m, p)
    if not (m and n and p):
        return out
    k = _common_k(a, b)
    brows: list[list] = [[] for _ in range(n)]
    bmeta = {}
    for j, col in enumerate(b.T.tolist()):
        nz = [(l, x) for l, x in enumerate(col) if x]
        if not nz:
            continue
        shift, den, polys = _clear_denominators([x for _, x in nz], k)
        bmeta[j] = (shift, den)
        for (l, _), poly in zip(nz, polys):
            brows[l].append((j, poly))
    for i, row in enumerate(a.tolist()):
        nz = [(l, x) for l, x in enumerate(row) if x and brows[l]]
        if not nz:
            continue
        shift, den, polys = _clear_denominators([x for _, x in nz], k)
        acc: dict = {}
        for (l, _), x in zip(nz, polys):
            for j, y in brows[l]:
                t = x * y
                acc[j] = acc[j] + t if j in acc else t
        for j, v in acc.items():
            if not v.is_zero():
                bs, bd = bmeta[j]
                out[i, j] = QScalar._normalized(k, shift + bs, v, den * bd)
    return out


def chain(*mats: np.ndarray) -> np.ndarray:
    """Product ``mats[0] @ mats[1] @ ...``."""
    out = mats[0]
    for m in mats[1:]:
        out = matmul(out, m)
    return out


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} + {b.shape}")
    out = zeros(*a.shape)
    for idx, x in np.ndenumerate(a):
        out[idx] = x + b[idx]
    return out


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} - {b.shape}")
    out = zeros(*a.shape)
    for idx, x in np.ndenumerate(a):
        out[idx] = x - b[idx]
    return out


def scale(a: np.ndarray, c) -> np.ndarray:
    c = _as_q(c)
    out = zeros(*a.shape)
    if not c:
        return out
    for idx, x in np.ndenumerate(a):
        if x:
            out[idx] = c * x
    return out


def conj(a: np.ndarray) -> np.ndarray:
    """Entrywise bar automorphism."""
    out = zeros(*a.shape)
    for idx, x in np.ndenumerate(a):
        if x:
            out[idx] = x.bar()
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    m, n = a.shape
    p, r = b.shape
    out = zeros(m * p, n * r)
    for (i, j), x in np.ndenumerate(a):
        if not x:
            continue
        for (s, t), y in np.ndenumerate(b):
            if y:
                out[i * p + s, j * r + t] = x * y
    return out


def is_zero(a: np.ndarray) -> bool:
    return not any(x for x in a.flat)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape != b.shape:
        return False
    return all(x == y for x, y in zip(a.flat, b.flat))


def first_difference(a: np.ndarray, b: np.ndarray):
    """Index and values of the first differing entry, or None."""
    if a.shape != b.shape:
        return ("shape", a.shape, b.shape)
    for idx, x in np.ndenumerate(a):
        if x != b[idx]:
            return (idx, x, b[idx])
    return None


def hstack(mats: Sequence[np.ndarray], rows: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return zeros(rows, 0)
    return np.hstack(mats)


def vstack(mats: Sequence[np.ndarray], cols: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return zeros(0, cols)
    return np.vstack(mats)


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(r) for r in a.tolist()]
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        best = None
        best_size = None
        for i in range(r, nrows):
            x = rows[i][c]
            if x:
                size = x.complexity()
                if best is None or size < best_size:
                    best, best_size = i, size
                    if size <= 2:
                        break
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        if not piv.is_one():
            inv = piv.inverse()
            rows[r] = [x * inv if x else x for x in rows[r]]
        prow = rows[r]
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if not f:
                continue
            row = rows[i]
            for j in nz:
                row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    out = zeros(nrows, ncols)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = x
    return out, pivots


def rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def independent_columns(a: np.ndarray) -> list[int]:
    """Greedy maximal set of linearly independent columns, in column order."""
    if a.size == 0:
        return []
    return rref(a)[1]


def kernel(a: np.ndarray) -> np.ndarray:
    """Basis of the right kernel, one column per free variable."""
    nrows, ncols = a.shape
    if nrows == 0:
        return identity(ncols)
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = zeros(ncols, len(free))
    for t, f in enumerate(free):
        out[f, t] = ONE
        for r, p in enumerate(pivots):
            x = red[r, f]
            if x:
                out[p, t] = -x
    return out


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """The unique ``x`` with ``a @ x = b``.

    Raises NoSolution if inconsistent and NonUniqueSolution if ``a`` has a
    nontrivial kernel.
    """
    nrows, ncols = a.shape
    if b.shape[0] != nrows:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    nb = b.shape[1]
    aug = np.hstack([a, b]) if ncols + nb else zeros(nrows, 0)
    red, pivots = rref(aug)
    if any(p >= ncols for p in pivots):
        raise NoSolution("inconsistent linear system")
    if len(pivots) < ncols:
        raise NonUniqueSolution(f"system has a {ncols - len(pivots)}-dimensional solution space")
    x = zeros(ncols, nb)
    for r, p in enumerate(pivots):
        for j in range(nb):
            x[p, j] = red[r, ncols + j]
    return x


def inverse(a: np.ndarray) -> np.ndarray:
    n, m = a.shape
    if n != m:
        raise ValueError("inverse of non-square matrix")
    return solve(a, identity(n))


def to_strings(a: np.ndarray) -> list[list[str]]:
    return [[str(x) for x in row] for row in a.tolist()]
