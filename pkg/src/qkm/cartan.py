"""
Symmetrizable Cartan data and weight-lattice arithmetic.

Weights are integer vectors in fundamental-weight coordinates.  With the
convention ``a_ij = <H_i, alpha_j>`` the simple root ``alpha_j`` has
coordinates given by column ``j`` of the Cartan matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import NotGCM, NotSymmetrizable, RankMismatch, SingularCartanMatrix

PRESETS: dict[str, tuple[tuple[int, ...], ...]] = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "A3": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    "B2": ((2, -1), (-2, 2)),
    "C2": ((2, -2), (-1, 2)),
    "G2": ((2, -1), (-3, 2)),
}


@dataclass(frozen=True, order=True)
class Weight:
    """An integral weight in fundamental-weight coordinates."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def of(cls, *coords: int) -> "Weight":
        return cls(tuple(coords))

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((0,) * rank)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def _check(self, other: "Weight") -> None:
        if len(other.coords) != len(self.coords):
            raise RankMismatch(f"rank {len(self.coords)} vs {len(other.coords)}")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, n: int) -> "Weight":
        return Weight(tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    def to_json(self) -> list[int]:
        return list(self.coords)


def _frac_inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]] | None:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _leading_minors_positive(b: Sequence[Sequence[int]]) -> bool:
    n = len(b)
    for size in range(1, n + 1):
        sub = [[Fraction(b[i][j]) for j in range(size)] for i in range(size)]
        det = Fraction(1)
        for col in range(size):
            piv = next((r for r in range(col, size) if sub[r][col] != 0), None)
            if piv is None:
                return False
            if piv != col:
                sub[col], sub[piv] = sub[piv], sub[col]
                det = -det
            det *= sub[col][col]
            for r in range(col + 1, size):
                f = sub[r][col] / sub[col][col]
                sub[r] = [x - f * y for x, y in zip(sub[r], sub[col])]
        if det <= 0:
            return False
    return True


def _symmetrizers(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    n = len(a)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        component = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or a[i][j] == 0:
                    continue
                want = d[i] * a[i][j] / a[j][i]
                if d[j] is None:
                    d[j] = want
                    component.append(j)
                    stack.append(j)
                elif d[j] != want:
                    raise NotSymmetrizable(f"no symmetrizer for Cartan matrix {a}")
        den = reduce(lcm, (d[i].denominator for i in component), 1)
        ints = [int(d[i] * den) for i in component]
        g = reduce(gcd, ints)
        for i, v in zip(component, ints):
            d[i] = Fraction(v // g)
    return tuple(int(x) for x in d)


@dataclass(frozen=True)
class CartanDatum:
    """A validated symmetrizable generalized Cartan matrix with derived data.

    ``form_gram[i][j] = (omega_i, omega_j)``; ``k`` is the order of the root
    of ``q`` needed so that every exponent the construction produces is
    integral in ``q^{1/k}``.
    """

    matrix: tuple[tuple[int, ...], ...]
    symmetrizers: tuple[int, ...]
    form_gram: tuple[tuple[Fraction, ...], ...]
    k: int
    name: str | None = None
    _inverse: tuple[tuple[Fraction, ...], ...] = field(default=(), repr=False, compare=False)
    finite_type: bool = field(default=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def simple_root(self, i: int) -> Weight:
        return Weight(tuple(self.matrix[j][i] for j in range(self.rank)))

    def fundamental_weight(self, i: int) -> Weight:
        return Weight(tuple(int(i == j) for j in range(self.rank)))

    def weight(self, coords: Iterable[int]) -> Weight:
        w = Weight(tuple(coords))
        if len(w) != self.rank:
            raise RankMismatch(f"weight {w} has rank {len(w)}, datum has rank {self.rank}")
        return w

    def zero_weight(self) -> Weight:
        return Weight.zero(self.rank)

    def rho(self) -> Weight:
        return Weight((1,) * self.rank)

    def bilinear(self, lam: Weight, mu: Weight) -> Fraction:
        if len(lam) != self.rank or len(mu) != self.rank:
            raise RankMismatch(f"weights of rank {len(lam)}, {len(mu)} for datum of rank {self.rank}")
        g = self.form_gram
        total = Fraction(0)
        for i, a in enumerate(lam.coords):
            if a:
                row = g[i]
                for j, b in enumerate(mu.coords):
                    if b:
                        total += a * b * row[j]
        return total

    def pairing_with_root(self, i: int, mu: Weight) -> int:
        """``(alpha_i, mu) = d_i <H_i, mu>``, the exponent of ``K_i`` on weight ``mu``."""
        return self.symmetrizers[i] * mu.coords[i]

    def root_coordinates(self, diff: Weight) -> tuple[Fraction, ...]:
        """Coordinates of ``diff`` in the basis of simple roots."""
        inv = self._inverse
        return tuple(sum(inv[i][j] * diff.coords[j] for j in range(self.rank)) for i in range(self.rank))

    def positive_root_combination(self, diff: Weight) -> tuple[int, ...] | None:
        """Nonnegative integer root coordinates of ``diff``, or None."""
        c = self.root_coordinates(diff)
        if all(x.denominator == 1 and x >= 0 for x in c):
            return tuple(int(x) for x in c)
        return None

    def height(self, diff: Weight) -> int | None:
        c = self.positive_root_combination(diff)
        return None if c is None else sum(c)

    def theta_exponent(self, mu: Weight) -> Fraction:
        """``-(mu, mu)/2 + (mu, rho)``."""
        return -self.bilinear(mu, mu) / 2 + self.bilinear(mu, self.rho())

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "matrix": [list(r) for r in self.matrix],
            "symmetrizers": list(self.symmetrizers),
            "k": self.k,
        }


def new_cartan_datum(matrix: Sequence[Sequence[int]], name: str | None = None) -> CartanDatum:
    """Validate a generalized Cartan matrix and derive its datum."""
    try:
        rows = [list(r) for r in matrix]
    except TypeError:
        raise NotGCM("Cartan matrix must be a list of rows") from None
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotGCM(f"Cartan matrix must be square and nonempty, got {rows}")
    for r in rows:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                if isinstance(x, float) and x.is_integer():
                    continue
                raise NotGCM(f"Cartan matrix entries must be integers, got {x!r}")
    a = tuple(tuple(int(x) for x in r) for r in rows)
    for i in range(n):
        if a[i][i] != 2:
            raise NotGCM(f"diagonal entry a[{i}][{i}] = {a[i][i]} != 2")
        for j in range(n):
            if i == j:
                continue
            if a[i][j] > 0:
                raise NotGCM(f"off-diagonal entry a[{i}][{j}] = {a[i][j]} is positive")
            if (a[i][j] == 0) != (a[j][i] == 0):
                raise NotGCM(f"zero pattern not symmetric at ({i},{j})")
    d = _symmetrizers(a)
    inv = _frac_inverse(a)
    if inv is None:
        raise SingularCartanMatrix(
            f"Cartan matrix {a} is singular (affine or degenerate type); "
            "only invertible symmetrizable matrices are supported"
        )
    # (omega_i, alpha_j) = delta_ij d_j  =>  G A = D  =>  G = D A^{-1}
    gram = tuple(tuple(d[i] * inv[i][j] for j in range(n)) for i in range(n))
    k = 2 * reduce(lcm, (x.denominator for row in gram for x in row), 1)
    sym = [[d[i] * a[i][j] for j in range(n)] for i in range(n)]
    return CartanDatum(
        matrix=a,
        symmetrizers=d,
        form_gram=gram,
        k=k,
        name=name,
        _inverse=tuple(tuple(r) for r in inv),
        finite_type=_leading_minors_positive(sym),
    )


def preset(name: str) -> CartanDatum:
    try:
        return new_cartan_datum(PRESETS[name], name=name)
    except KeyError:
        raise NotGCM(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None


def bilinear(cd: CartanDatum, lam: Weight, mu: Weight) -> Fraction:
    return cd.bilinear(lam, mu)


def rho(cd: CartanDatum) -> Weight:
    return cd.rho()


def parse_datum(spec) -> CartanDatum:
    """A preset name, a JSON matrix string, or a nested list of integers."""
    if isinstance(spec, CartanDatum):
        return spec
    if isinstance(spec, str):
        text = spec.strip()
        if text in PRESETS:
            return preset(text)
        if not text.startswith("["):
            raise NotGCM(f"unknown preset {text!r}; known: {', '.join(PRESETS)}")
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NotGCM(f"cannot parse Cartan matrix {text!r}: {exc.msg}") from None
    return new_cartan_datum(spec)
