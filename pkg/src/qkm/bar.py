"""
Bar involutions: bar-semilinear maps compatible with the algebra
involution fixing E_i, F_i and inverting K_i.

An operator is stored per weight block as a matrix ``M`` with
``B(v) = M @ conj(v)``, where ``conj`` applies q -> q^{-1} entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .cartan import Weight
from .errors import NotSingular
from .irrep import Representation
from .module import WeightModule
from .qfield import QScalar, qpow
from .tensor import GeneratedBlock, TensorRep, generate_blocks, stacked_e

__all__ = [
    "BarOperator",
    "bar_irrep",
    "bar_singular_image",
    "bar_tensor",
    "naive_bar_tensor",
    "bar_from_summands",
    "fixed_basis",
]


@dataclass
class BarOperator:
    """Semilinear operator ``v -> M_mu conj(v)`` on each block of ``carrier``."""

    carrier: WeightModule
    matrices: dict[Weight, np.ndarray]
    semilinear: bool = True
    choice: dict = field(default_factory=dict)

    def matrix(self, mu: Weight) -> np.ndarray:
        return self.matrices[mu]

    def apply(self, mu: Weight, v: np.ndarray) -> np.ndarray:
        return la.matmul(self.matrices[mu], la.conj(v))

    def weights(self) -> list[Weight]:
        return list(self.matrices)

    def to_json(self) -> dict:
        return {
            "semilinear": self.semilinear,
            "blocks": [{"weight": mu.to_json(), "matrix": la.to_strings(m)} for mu, m in self.matrices.items()],
        }


def bar_irrep(V: Representation, scale: QScalar | None = None) -> BarOperator:
    """The bar involution fixing ``scale * v_lambda`` (``v_lambda`` by default).

    In the F-word basis the operator fixing v_lambda is plain coefficient
    conjugation; fixing ``c v_lambda`` instead multiplies it by ``c / bar(c)``.
    """
    factor = la.ONE if scale is None else scale / scale.bar()
    mats = {mu: la.scale(la.identity(V.dim(mu)), factor) for mu in V.weights()}
    choice = {} if scale is None else {"highest_vector_scale": str(scale)}
    return BarOperator(V, mats, choice=choice)


def _exponent(T: WeightModule, top: Weight, mu_r: Weight) -> QScalar:
    cd = T.datum
    rho = cd.rho()
    e = cd.bilinear(top, top) - cd.bilinear(mu_r, mu_r) + 2 * cd.bilinear(top - mu_r, rho)
    return qpow(e, cd.k)


def bar_singular_image(T: TensorRep, u: np.ndarray, nu: Weight, bar_l: BarOperator, bar_r: BarOperator,
                       check: bool = True) -> np.ndarray:
    """``sum_j q^{(mu,mu) - (wt c_j, wt c_j) + 2(mu - wt c_j, rho)} bar(b_j) (x) bar(c_j)``.

    ``mu`` is the highest weight of the right factor; for a reducible right
    factor the sum is split along its isotypic components and each part
    uses that component's highest weight.
    """
    if check and not la.is_zero(la.matmul(stacked_e(T, nu), u)):
        raise NotSingular(f"vector of weight {nu} is not annihilated by every E_i")
    if u.shape[1] != 1:
        return la.hstack([bar_singular_image(T, u[:, t : t + 1], nu, bar_l, bar_r, False)
                          for t in range(u.shape[1])], T.dim(nu))
    out = la.zeros(T.dim(nu), 1)
    for b in T.pairs(nu):
        x = _pair_matrix(u[b.offset : b.stop, 0], b.dim_left, b.dim_right)
        if la.is_zero(x):
            continue
        left = la.matmul(bar_l.matrix(b.left), la.conj(x))
        mr = bar_r.matrix(b.right)
        total = None
        for top, proj in T.right.isotypic_projectors(b.right).items():
            # coefficients of (1 (x) pi) u are x pi^T; then bar both slots
            part = la.matmul(left, la.matmul(mr, la.conj(proj)).T.copy())
            part = la.scale(part, _exponent(T, top, b.right))
            total = part if total is None else la.add(total, part)
        out[b.offset : b.stop, 0] = total.reshape(-1)
    return out


def _pair_matrix(flat: np.ndarray, dl: int, dr: int) -> np.ndarray:
    return np.asarray(flat, dtype=object).reshape(dl, dr)


def naive_bar_tensor(bar_l: BarOperator, bar_r: BarOperator, T: TensorRep) -> BarOperator:
    """Factorwise conjugation ``f(q) v (x) w -> f(q^{-1}) bar(v) (x) bar(w)``.

    Not compatible with the algebra involution in general; used for comparison.
    """
    mats = {}
    for nu in T.weights():
        n = T.dim(nu)
        m = la.zeros(n, n)
        for b in T.pairs(nu):
            m[b.offset : b.stop, b.offset : b.stop] = la.kron(bar_l.matrix(b.left), bar_r.matrix(b.right))
        mats[nu] = m
    return BarOperator(T, mats)


def bar_tensor(T: TensorRep, bar_l: BarOperator, bar_r: BarOperator,
               singular_bases: dict[Weight, np.ndarray] | None = None) -> BarOperator:
    """The bar involution on ``T`` agreeing with :func:`bar_singular_image` on singular vectors.

    Each block is spanned by F-images of singular vectors; the operator is
    determined there by ``B F_i = F_i B``.  ``singular_bases`` overrides the
    chosen singular columns per weight.
    """
    blocks = generate_blocks(T, singular_bases) if singular_bases is not None else T.generated()
    return _bar_from_generation(T, blocks, lambda nu, col: bar_singular_image(T, col, nu, bar_l, bar_r),
                                {"singular_bases": "override" if singular_bases is not None else "default"})


def bar_from_summands(T: TensorRep, singular_images: dict[Weight, np.ndarray],
                      singular_bases: dict[Weight, np.ndarray] | None = None) -> BarOperator:
    """Bar involution fixing chosen images of singular vectors.

    ``singular_images[nu]`` gives the image of each singular column at
    ``nu``; choosing them as the columns themselves makes every chosen
    singular vector bar-fixed, one of the non-unique choices available on a
    reducible module.
    """
    blocks = generate_blocks(T, singular_bases)
    return _bar_from_generation(T, blocks, lambda nu, col: None, {"singular_images": "explicit"},
                                singular_images)


def _bar_from_generation(T: TensorRep, blocks: dict[Weight, GeneratedBlock], image_of, choice,
                         explicit: dict[Weight, np.ndarray] | None = None) -> BarOperator:
    images: dict[Weight, np.ndarray] = {}
    mats = {}
    for nu, blk in blocks.items():
        n = T.dim(nu)
        cols = []
        for t, src in enumerate(blk.sources):
            if src[0] == "singular":
                if explicit is not None:
                    cols.append(explicit[nu][:, src[1] : src[1] + 1])
                else:
                    cols.append(image_of(nu, blk.basis[:, t : t + 1]))
            else:
                _, i, c = src
                up = nu + T.datum.simple_root(i)
                cols.append(la.matmul(T.f(i, up), images[up][:, c : c + 1]))
        img = la.hstack(cols, n)
        images[nu] = img
        mats[nu] = la.matmul(img, la.inverse(la.conj(blk.basis)))
    return BarOperator(T, mats, choice=choice)


def fixed_basis(B: BarOperator, mu: Weight) -> np.ndarray:
    """Independent B-fixed vectors of block(mu) drawn from ``e + B(e)`` and ``q e + B(q e)``.

    When ``B`` is an involution every candidate is fixed and they span the
    block; candidates that are not fixed are discarded, so a short result
    witnesses a non-involution.
    """
    n = B.matrix(mu).shape[0]
    q = qpow(1, 1)
    cols = []
    for t in range(n):
        for c in (la.ONE, q):
            v = la.scale(la.unit_column(n, t), c)
            w = la.add(v, B.apply(mu, v))
            if la.equal(B.apply(mu, w), w):
                cols.append(w)
    cand = la.hstack(cols, n)
    keep = la.independent_columns(cand) if cand.shape[1] else []
    return cand[:, keep]
