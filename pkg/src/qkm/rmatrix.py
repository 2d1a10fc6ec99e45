"""
The Theta operators and the R-matrix they produce.

``Theta(v) = q^{-(mu,mu)/2 + (mu,rho)} B(v)`` on block(mu) for a bar
involution ``B``; it is again bar-semilinear, and is its own inverse
because ``M conj(M) = 1`` for the block matrices of an involution.  The
half-twist R-matrix on ``V (x) W`` is the linear map

    R = (Theta_V^{-1} (x) Theta_W^{-1}) o Theta_{V (x) W}.

:func:`oracle_r` derives the same operator independently from the
triangular shape ``A (1 + sum X_beta (x) Y_beta)`` and the intertwining
equations, block by block from the top weight down.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .bar import BarOperator, bar_tensor
from .cartan import Weight
from .errors import NonUniqueSolution, NoSolution
from .module import WeightModule
from .qfield import QScalar, qpow
from .tensor import TensorRep, flip_matrix

__all__ = [
    "ThetaOperator",
    "theta_op",
    "RMatrixOperator",
    "half_twist_r",
    "factorwise_theta_inverse",
    "braiding",
    "oracle_r",
    "delta_op",
]


def theta_scalar(module: WeightModule, mu: Weight) -> QScalar:
    cd = module.datum
    return qpow(cd.theta_exponent(mu), cd.k)


@dataclass
class ThetaOperator:
    """Semilinear ``v -> M_mu conj(v)``; ``inverse_matrices`` give Theta^{-1} the same way."""

    carrier: WeightModule
    matrices: dict[Weight, np.ndarray]
    inverse_matrices: dict[Weight, np.ndarray]
    semilinear: bool = True

    def apply(self, mu: Weight, v: np.ndarray) -> np.ndarray:
        return la.matmul(self.matrices[mu], la.conj(v))

    def apply_inverse(self, mu: Weight, v: np.ndarray) -> np.ndarray:
        return la.matmul(self.inverse_matrices[mu], la.conj(v))

    def to_json(self) -> dict:
        return {
            "semilinear": self.semilinear,
            "blocks": [{"weight": mu.to_json(), "matrix": la.to_strings(m)} for mu, m in self.matrices.items()],
        }


def theta_op(carrier: WeightModule, bar: BarOperator) -> ThetaOperator:
    """``D o B`` with D diagonal by weight; the inverse is ``B o D^{-1}``, i.e. ``conj(D^{-1}) M``."""
    mats, inv = {}, {}
    for mu in carrier.weights():
        c = theta_scalar(carrier, mu)
        m = bar.matrix(mu)
        mats[mu] = la.scale(m, c)
        # Theta^{-1}(y) = B(D^{-1} y) = M conj(D^{-1} y) = bar(c)^{-1} M conj(y)
        inv[mu] = la.scale(m, c.bar().inverse())
    return ThetaOperator(carrier, mats, inv)


@dataclass
class RMatrixOperator:
    """Linear weight-preserving operator on ``module = V (x) W``."""

    module: TensorRep
    matrices: dict[Weight, np.ndarray]
    provenance: str
    skipped: list[Weight] = field(default_factory=list)

    def matrix(self, nu: Weight) -> np.ndarray:
        return self.matrices[nu]

    def weights(self) -> list[Weight]:
        return list(self.matrices)

    def to_json(self) -> dict:
        T = self.module
        return {
            "datum": T.datum.to_json(),
            "lambda": T.left.top.to_json(),
            "mu": T.right.top.to_json(),
            "depth": T.depth,
            "provenance": self.provenance,
            "basis_order": "pairs by descending right weight, then descending left weight; "
                           "index i_left * dim_right + i_right inside a pair",
            "blocks": [
                {
                    "weight": nu.to_json(),
                    "basis": [[l.to_json(), r.to_json(), il, ir] for l, r, il, ir in T.labels(nu)],
                    "matrix": la.to_strings(m),
                }
                for nu, m in self.matrices.items()
            ],
            "skipped": [nu.to_json() for nu in self.skipped],
        }


def factorwise_theta_inverse(T: TensorRep, theta_l: ThetaOperator, theta_r: ThetaOperator, nu: Weight) -> np.ndarray:
    """``K`` with ``(Theta_V^{-1} (x) Theta_W^{-1})(x) = K conj(x)`` on block(nu)."""
    n = T.dim(nu)
    out = la.zeros(n, n)
    for b in T.pairs(nu):
        out[b.offset : b.stop, b.offset : b.stop] = la.kron(
            theta_l.inverse_matrices[b.left], theta_r.inverse_matrices[b.right]
        )
    return out


def half_twist_r(T: TensorRep, bar_l: BarOperator, bar_r: BarOperator,
                 singular_bases: dict[Weight, np.ndarray] | None = None,
                 bar_t: BarOperator | None = None) -> RMatrixOperator:
    """``(Theta_V^{-1} (x) Theta_W^{-1}) o Theta_{V (x) W}`` as a linear block matrix.

    Both factors are semilinear, so the composite ``K conj(c M conj(x))``
    equals ``K conj(c) conj(M) x``.
    """
    if bar_t is None:
        bar_t = bar_tensor(T, bar_l, bar_r, singular_bases)
    theta_l = theta_op(T.left, bar_l)
    theta_r = theta_op(T.right, bar_r)
    mats = {}
    for nu in T.weights():
        k = factorwise_theta_inverse(T, theta_l, theta_r, nu)
        c = theta_scalar(T, nu)
        mats[nu] = la.scale(la.matmul(k, la.conj(bar_t.matrix(nu))), c.bar())
    return RMatrixOperator(T, mats, "half-twist")


def half_twist_apply(T: TensorRep, bar_l: BarOperator, bar_r: BarOperator, bar_t: BarOperator,
                     nu: Weight, x: np.ndarray) -> np.ndarray:
    """Apply the half-twist by chaining the semilinear maps literally (no matrix folding)."""
    theta_t = theta_op(T, bar_t)
    theta_l = theta_op(T.left, bar_l)
    theta_r = theta_op(T.right, bar_r)
    y = theta_t.apply(nu, x)
    return la.matmul(factorwise_theta_inverse(T, theta_l, theta_r, nu), la.conj(y))


def braiding(R: RMatrixOperator, flipped: TensorRep) -> dict[Weight, np.ndarray]:
    """``Flip o R`` from ``V (x) W`` to ``W (x) V`` on every block."""
    return {nu: la.matmul(flip_matrix(R.module, flipped, nu), m) for nu, m in R.matrices.items()}


def delta_op(T: TensorRep, flipped: TensorRep, name: str, i: int, nu: Weight) -> tuple[np.ndarray, Weight]:
    """Opposite coproduct of a generator on ``T``: ``Flip o Delta_{W (x) V}(g) o Flip``."""
    mat, target = flipped.generator(name, i, nu)
    fwd = flip_matrix(T, flipped, nu)
    back = flip_matrix(flipped, T, target)
    return la.chain(back, mat, fwd), target


def oracle_r(T: TensorRep, flipped: TensorRep) -> RMatrixOperator:
    """Unique solution of ``R Delta(g) = Delta^op(g) R`` of triangular shape.

    On block(nu) the entry from pair ``s`` to pair ``p`` may be nonzero only
    when ``wt_R(s) - wt_R(p)`` is a nonzero sum of positive roots; diagonal
    pairs carry ``q^{(wt_L, wt_R)}``.  Equations use the E_i and F_i
    relations with the already-solved block above; blocks whose equations
    would leave the retained depth are listed in ``skipped``.
    """
    cd = T.datum
    mats: dict[Weight, np.ndarray] = {}
    for nu in T.weights():
        n = T.dim(nu)
        known = la.zeros(n, n)
        unknowns: list[tuple[int, int]] = []
        for p in T.pairs(nu):
            for s in T.pairs(nu):
                beta = cd.height(s.right - p.right)
                if s is p:
                    a = qpow(cd.bilinear(p.left, p.right), cd.k)
                    for t in range(p.size):
                        known[p.offset + t, p.offset + t] = a
                elif beta is not None and beta > 0:
                    for r in range(p.offset, p.stop):
                        for c in range(s.offset, s.stop):
                            unknowns.append((r, c))
        if not unknowns:
            mats[nu] = known
            continue
        col_of = {rc: t for t, rc in enumerate(unknowns)}
        rows: list[np.ndarray] = []
        rhs: list[np.ndarray] = []
        for i in range(cd.rank):
            up = nu + cd.simple_root(i)
            if up not in mats:
                continue
            m = T.dim(up)
            # R_up E = E^op R_nu
            e = T.e(i, nu)
            eop, _ = delta_op(T, flipped, "E", i, nu)
            lhs_known = la.matmul(mats[up], e)
            base = la.matmul(eop, known)
            coeff = la.zeros(m * n, len(unknowns))
            for (r, c), t in col_of.items():
                for a in range(m):
                    x = eop[a, r]
                    if x:
                        coeff[a * n + c, t] = x
            rows.append(coeff)
            rhs.append(la.sub(lhs_known, base).reshape(m * n, 1))
            # R_nu F = F^op R_up
            f = T.f(i, up)
            fop, _ = delta_op(T, flipped, "F", i, up)
            rhs_known = la.matmul(fop, mats[up])
            base = la.matmul(known, f)
            coeff = la.zeros(n * m, len(unknowns))
            for (r, c), t in col_of.items():
                for b in range(m):
                    x = f[c, b]
                    if x:
                        coeff[r * m + b, t] = x
            rows.append(coeff)
            rhs.append(la.sub(rhs_known, base).reshape(n * m, 1))
        system = la.vstack(rows, len(unknowns))
        target = la.vstack(rhs, 1)
        try:
            sol = la.solve(system, target)
        except NoSolution as exc:
            raise NoSolution(f"intertwining equations on block {nu} are inconsistent") from exc
        except NonUniqueSolution as exc:
            raise NonUniqueSolution(f"intertwining equations on block {nu} do not determine R: {exc}") from exc
        out = known.copy()
        for (r, c), t in col_of.items():
            out[r, c] = sol[t, 0]
        mats[nu] = out
    return RMatrixOperator(T, mats, "oracle")
