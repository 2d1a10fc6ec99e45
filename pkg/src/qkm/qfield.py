"""
Exact arithmetic in the field Q(q^{1/k}).

A :class:`QScalar` is stored as ``t**shift * num(t) / den(t)`` with
``t = q**(1/k)``, where ``num`` and ``den`` are flint ``fmpq_poly`` objects.
Canonical form:

- zero is ``shift = 0, num = 0, den = 1``;
- otherwise ``num(0) != 0``, ``den(0) != 0``, ``den`` is monic and
  ``gcd(num, den) = 1``.

The bar automorphism ``q -> q^{-1}`` is :meth:`QScalar.bar`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Mapping, Union

import flint

from .errors import ExponentNotInLattice, ParseError

_P = flint.fmpq_poly
_ONE_POLY = _P([1])
_ZERO_POLY = _P([])

Number = Union[int, Fraction, "QScalar"]


def _valuation(p) -> int:
    if p[0] != 0:
        return 0
    for i in range(1, p.length()):
        if p[i] != 0:
            return i
    raise ValueError("valuation of zero polynomial")


def _reverse(p):
    return _P(p.coeffs()[::-1])


def _inflate(p, m: int):
    if m == 1:
        return p
    coeffs = p.coeffs()
    out = [0] * ((len(coeffs) - 1) * m + 1) if coeffs else []
    for i, c in enumerate(coeffs):
        out[i * m] = c
    return _P(out)


def _fmpq_to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _poly_key(p) -> tuple:
    return tuple((int(c.p), int(c.q)) for c in p.coeffs())


class QScalar:
    """An element of Q(q^{1/k}).  Immutable; use the module helpers to build."""

    __slots__ = ("k", "shift", "num", "den", "_hash")

    def __init__(self, value: Union[int, Fraction] = 0, k: int = 1):
        if k < 1:
            raise ValueError("k must be a positive integer")
        self.k = k
        self.shift = 0
        if not value:
            self.num = _ZERO_POLY
        elif isinstance(value, Fraction):
            self.num = _P([flint.fmpq(value.numerator, value.denominator)])
        else:
            self.num = _P([value])
        self.den = _ONE_POLY
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def _raw(cls, k: int, shift: int, num, den) -> "QScalar":
        obj = cls.__new__(cls)
        obj.k = k
        obj.shift = shift
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def _normalized(cls, k: int, shift: int, num, den) -> "QScalar":
        if num.is_zero():
            return cls._raw(k, 0, _ZERO_POLY, _ONE_POLY)
        if den.is_zero():
            raise ZeroDivisionError("QScalar denominator is zero")
        v = _valuation(num)
        if v:
            num = num.right_shift(v)
            shift += v
        if not den.is_one():
            v = _valuation(den)
            if v:
                den = den.right_shift(v)
                shift -= v
            if den.degree() > 0:
                g = num.gcd(den)
                if not g.is_one():
                    num = num // g
                    den = den // g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        return cls._raw(k, shift, num, den)

    # -- basic predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def is_one(self) -> bool:
        return self.shift == 0 and self.den.is_one() and self.num.is_one()

    def complexity(self) -> int:
        """Rough size measure used as a pivoting heuristic."""
        if self.num.is_zero():
            return 0
        return self.num.length() + self.den.length()

    # -- k handling ---------------------------------------------------------

    def promote(self, k: int) -> "QScalar":
        """Re-express over ``q^{1/k}``; ``k`` must be a multiple of ``self.k``."""
        if k == self.k:
            return self
        if k % self.k:
            raise ValueError(f"cannot promote k={self.k} to k={k}")
        m = k // self.k
        if self.num.is_zero():
            return QScalar._raw(k, 0, _ZERO_POLY, _ONE_POLY)
        return QScalar._raw(k, self.shift * m, _inflate(self.num, m), _inflate(self.den, m))

    def reduced(self) -> "QScalar":
        """The same value over the smallest possible root of q."""
        if self.num.is_zero():
            return QScalar._raw(1, 0, _ZERO_POLY, _ONE_POLY)
        g = gcd(self.k, self.shift)
        for p in (self.num, self.den):
            for i, c in enumerate(p.coeffs()):
                if c != 0:
                    g = gcd(g, i)
            if g == 1:
                return self
        if g == 1:
            return self
        return QScalar._raw(
            self.k // g,
            self.shift // g,
            _P(self.num.coeffs()[::g]),
            _P(self.den.coeffs()[::g]),
        )

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other, self.k)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        a, b = _align(self, other)
        k = a.k
        m = min(a.shift, b.shift)
        an = a.num.left_shift(a.shift - m) if a.shift != m else a.num
        bn = b.num.left_shift(b.shift - m) if b.shift != m else b.num
        if a.den.is_one() and b.den.is_one():
            return QScalar._normalized(k, m, an + bn, _ONE_POLY)
        if a.den == b.den:
            return QScalar._normalized(k, m, an + bn, a.den)
        return QScalar._normalized(k, m, an * b.den + bn * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self) -> "QScalar":
        if self.num.is_zero():
            return self
        return QScalar._raw(self.k, self.shift, -self.num, self.den)

    def __pos__(self) -> "QScalar":
        return self

    def __sub__(self, other):
        other = _coerce(other, self.k)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other, self.k)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other, self.k)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return QScalar._raw(max(self.k, other.k), 0, _ZERO_POLY, _ONE_POLY)
        a, b = _align(self, other)
        shift = a.shift + b.shift
        if a.den.is_one() and b.den.is_one():
            return QScalar._raw(a.k, shift, a.num * b.num, _ONE_POLY)
        an, ad, bn, bd = a.num, a.den, b.num, b.den
        if not bd.is_one():
            g = an.gcd(bd)
            if not g.is_one():
                an, bd = an // g, bd // g
        if not ad.is_one():
            g = bn.gcd(ad)
            if not g.is_one():
                bn, ad = bn // g, ad // g
        return QScalar._raw(a.k, shift, an * bn, ad * bd)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero QScalar")
        num, den = self.den, self.num
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return QScalar._raw(self.k, -self.shift, num, den)

    def __truediv__(self, other):
        other = _coerce(other, self.k)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other, self.k)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> "QScalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QScalar(1, self.k)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def bar(self) -> "QScalar":
        """Apply q -> q^{-1} (equivalently q^{1/k} -> q^{-1/k})."""
        if self.num.is_zero():
            return self
        if self.den.is_one():
            deg = self.num.degree()
            return QScalar._raw(self.k, -self.shift - deg, _reverse(self.num), _ONE_POLY)
        num = _reverse(self.num)
        den = _reverse(self.den)
        shift = -self.shift - self.num.degree() + self.den.degree()
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return QScalar._raw(self.k, shift, num, den)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other, self.k)
        if other is NotImplemented:
            return NotImplemented
        if self.k != other.k:
            a, b = _align(self, other)
        else:
            a, b = self, other
        return a.shift == b.shift and a.num == b.num and a.den == b.den

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        if self._hash is None:
            r = self.reduced()
            self._hash = hash((r.k, r.shift, _poly_key(r.num), _poly_key(r.den)))
        return self._hash

    # -- inspection -----------------------------------------------------------

    def numerator_terms(self) -> dict[Fraction, Fraction]:
        """Numerator as ``{exponent of q: coefficient}`` (shift included)."""
        return {
            Fraction(self.shift + i, self.k): _fmpq_to_fraction(c)
            for i, c in enumerate(self.num.coeffs())
            if c != 0
        }

    def denominator_terms(self) -> dict[Fraction, Fraction]:
        return {
            Fraction(i, self.k): _fmpq_to_fraction(c)
            for i, c in enumerate(self.den.coeffs())
            if c != 0
        }

    def as_fraction(self) -> Fraction:
        """The rational value of a constant scalar."""
        if self.num.is_zero():
            return Fraction(0)
        if self.shift or self.num.degree() or self.den.degree():
            raise ValueError(f"{self} is not a rational constant")
        return _fmpq_to_fraction(self.num[0])

    def evaluate(self, value: Fraction) -> Fraction:
        """Evaluate at ``q^{1/k} = value`` (exact; for tests and oracles)."""
        value = Fraction(value)
        n = sum(_fmpq_to_fraction(c) * value**i for i, c in enumerate(self.num.coeffs()))
        d = sum(_fmpq_to_fraction(c) * value**i for i, c in enumerate(self.den.coeffs()))
        return n / d * value**self.shift

    def __str__(self) -> str:
        return canonical_string(self)

    def __repr__(self) -> str:
        return f"QScalar({canonical_string(self)!r})"


def _coerce(x, k: int):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return QScalar(x, k)
    return NotImplemented


def _align(a: QScalar, b: QScalar) -> tuple[QScalar, QScalar]:
    if a.k == b.k:
        return a, b
    k = lcm(a.k, b.k)
    return a.promote(k), b.promote(k)


# -- constructors ---------------------------------------------------------------


def zero(k: int = 1) -> QScalar:
    return QScalar(0, k)


def one(k: int = 1) -> QScalar:
    return QScalar(1, k)


def qpow(exponent, k: int = 1) -> QScalar:
    """``q**exponent``; the exponent must lie in (1/k)Z."""
    e = Fraction(exponent) * k
    if e.denominator != 1:
        raise ExponentNotInLattice(f"q^{Fraction(exponent)} is not expressible over q^(1/{k})")
    return QScalar._raw(k, int(e), _ONE_POLY, _ONE_POLY)


def from_terms(terms: Mapping, k: int | None = None) -> QScalar:
    """Laurent polynomial ``sum(c * q**e)`` from ``{e: c}``."""
    items = [(Fraction(e), Fraction(c)) for e, c in terms.items() if c]
    if k is None:
        k = reduce(lcm, (e.denominator for e, _ in items), 1)
    if not items:
        return zero(k)
    scaled = []
    for e, c in items:
        s = e * k
        if s.denominator != 1:
            raise ExponentNotInLattice(f"exponent {e} not in (1/{k})Z")
        scaled.append((int(s), c))
    low = min(s for s, _ in scaled)
    coeffs = [flint.fmpq(0)] * (max(s for s, _ in scaled) - low + 1)
    for s, c in scaled:
        coeffs[s - low] += flint.fmpq(c.numerator, c.denominator)
    return QScalar._normalized(k, low, _P(coeffs), _ONE_POLY)


def bar_scalar(x: QScalar) -> QScalar:
    return x.bar()


@lru_cache(maxsize=None)
def quantum_integer(n: int, d: int = 1, k: int = 1) -> QScalar:
    """``[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`` as a Laurent polynomial."""
    if n == 0:
        return zero(k)
    sign = 1 if n > 0 else -1
    n = abs(n)
    return from_terms({d * (n - 1 - 2 * j): sign for j in range(n)}, k)


@lru_cache(maxsize=None)
def quantum_factorial(n: int, d: int = 1, k: int = 1) -> QScalar:
    out = one(k)
    for j in range(1, n + 1):
        out = out * quantum_integer(j, d, k)
    return out


@lru_cache(maxsize=None)
def quantum_binomial(n: int, m: int, d: int = 1, k: int = 1) -> QScalar:
    if m < 0 or m > n:
        return zero(k)
    return quantum_factorial(n, d, k) / (quantum_factorial(m, d, k) * quantum_factorial(n - m, d, k))


# -- serialization -------------------------------------------------------------


def _format_exponent(e: Fraction) -> str:
    if e == 1:
        return "q"
    return "q^{" + str(e) + "}"


def _format_poly(terms: dict[Fraction, Fraction]) -> str:
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = str(a)
        elif a == 1:
            body = _format_exponent(e)
        else:
            body = f"{a}*{_format_exponent(e)}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def canonical_string(x: QScalar) -> str:
    """Deterministic text form, e.g. ``q^{3/2} - 2 + 1/3*q^{-1}``.

    Non-Laurent values print as ``(N)/(D)`` with ``D`` monic in its top
    term and free of negative powers.
    """
    num = _format_poly(x.numerator_terms())
    if x.den.is_one():
        return num
    return f"({num})/({_format_poly(x.denominator_terms())})"


_TERM = re.compile(
    r"""
    (?P<sign>[+-])?
    (?:(?P<cnum>\d+)(?:/(?P<cden>\d+))?)?
    (?P<star>\*)?
    (?P<q>q(?:\^(?:\{(?P<eb>[+-]?\d+(?:/\d+)?)\}|(?P<ei>[+-]?\d+)))?)?
    """,
    re.VERBOSE,
)


def _parse_poly(text: str) -> dict[Fraction, Fraction]:
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    if s.startswith("(") and s.endswith(")") and _balanced(s[1:-1]):
        s = s[1:-1]
    terms: dict[Fraction, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot parse {text!r} at position {pos}")
        if not first and m.group("sign") is None:
            raise ParseError(f"missing operator in {text!r} at position {pos}")
        if m.group("cnum") is None and m.group("q") is None:
            raise ParseError(f"empty term in {text!r} at position {pos}")
        if m.group("star") and (m.group("cnum") is None or m.group("q") is None):
            raise ParseError(f"misplaced '*' in {text!r}")
        c = Fraction(int(m.group("cnum")), int(m.group("cden") or 1)) if m.group("cnum") else Fraction(1)
        if m.group("sign") == "-":
            c = -c
        if m.group("q") is None:
            e = Fraction(0)
        elif m.group("eb") is not None:
            e = Fraction(m.group("eb"))
        elif m.group("ei") is not None:
            e = Fraction(int(m.group("ei")))
        else:
            e = Fraction(1)
        terms[e] = terms.get(e, Fraction(0)) + c
        pos = m.end()
        first = False
    return terms


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def parse(text: str, k: int | None = None) -> QScalar:
    """Inverse of :func:`canonical_string`."""
    s = text.strip()
    split = None
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0 and i + 1 < len(s) and s[i + 1] == "(":
            split = i
    if split is None:
        terms = _parse_poly(s)
        den_terms = {Fraction(0): Fraction(1)}
    else:
        terms = _parse_poly(s[:split])
        den_terms = _parse_poly(s[split + 1 :])
    kk = reduce(lcm, (e.denominator for e in list(terms) + list(den_terms)), 1)
    if k is not None:
        if k % kk:
            raise ParseError(f"{text!r} needs a root of q of order {kk}, not {k}")
        kk = k
    num = from_terms(terms, kk)
    den = from_terms(den_terms, kk)
    if den.is_zero():
        raise ParseError(f"zero denominator in {text!r}")
    return num / den
