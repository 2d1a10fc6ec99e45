"""
Tensor products of weight modules through the coproduct

    E_i -> E_i (x) K_i + 1 (x) E_i,        F_i -> F_i (x) 1 + K_i^{-1} (x) F_i,

together with singular vectors, the projections p1/p2 and the
decomposition of each block into F-images of singular vectors.

Block bases are ordered canonically: pairs (mu_L, mu_R) by descending
right weight, then descending left weight; inside a pair the index is
``i_L * dim_R + i_R`` so pair blocks are Kronecker-compatible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .cartan import CartanDatum, Weight
from .errors import DatumMismatch, DepthTooSmallForRequest, GenerationFailure
from .module import VectorInRep, WeightModule
from .qfield import qpow

__all__ = [
    "PairBlock",
    "TensorRep",
    "SingularBasis",
    "tensor_rep",
    "singular_basis",
    "project_p1",
    "project_p2",
    "flip_matrix",
    "flat_labels",
    "relabel_matrix",
    "GeneratedBlock",
    "generate_blocks",
]


@dataclass(frozen=True)
class PairBlock:
    left: Weight
    right: Weight
    offset: int
    dim_left: int
    dim_right: int

    @property
    def size(self) -> int:
        return self.dim_left * self.dim_right

    @property
    def stop(self) -> int:
        return self.offset + self.size


class TensorRep(WeightModule):
    """``left (x) right`` truncated at ``depth`` below the top weight."""

    def __init__(self, left: WeightModule, right: WeightModule, depth: int | None):
        if left.datum != right.datum:
            raise DatumMismatch("tensor factors are built over different Cartan data")
        for factor in (left, right):
            if factor.depth is not None and (depth is None or factor.depth < depth):
                raise DepthTooSmallForRequest(
                    f"factor retained to depth {factor.depth} cannot support tensor depth {depth}"
                )
        self.datum: CartanDatum = left.datum
        self.left = left
        self.right = right
        self.depth = depth
        self.top = left.top + right.top
        self._pairs: dict[Weight, list[PairBlock]] = {}
        self._pair_index: dict[Weight, dict[tuple[Weight, Weight], PairBlock]] = {}
        self._assemble()
        self._singular: dict[Weight, SingularBasis] = {}
        self._generated: dict | None = None

    def __repr__(self) -> str:
        return f"TensorRep({self.left!r}, {self.right!r}, depth={self.depth})"

    def _assemble(self) -> None:
        lh = {mu: self.left.height(mu) for mu in self.left.weights()}
        rh = {mu: self.right.height(mu) for mu in self.right.weights()}
        found: dict[Weight, list[tuple[Weight, Weight]]] = {}
        for ml, hl in lh.items():
            for mr, hr in rh.items():
                if self.depth is not None and hl + hr > self.depth:
                    continue
                found.setdefault(ml + mr, []).append((ml, mr))
        for nu in sorted(found, key=self.weight_key):
            pairs = sorted(found[nu], key=lambda p: (self.right.weight_key(p[1]), self.left.weight_key(p[0])))
            blocks = []
            off = 0
            for ml, mr in pairs:
                dl, dr = self.left.dim(ml), self.right.dim(mr)
                if not (dl and dr):
                    continue
                blocks.append(PairBlock(ml, mr, off, dl, dr))
                off += dl * dr
            if blocks:
                self._pairs[nu] = blocks
                self._pair_index[nu] = {(b.left, b.right): b for b in blocks}

    # -- structure ----------------------------------------------------------

    def weights(self) -> list[Weight]:
        return list(self._pairs)

    def pairs(self, nu: Weight) -> list[PairBlock]:
        self.dim(nu)
        return self._pairs.get(nu, [])

    def pair(self, nu: Weight, left: Weight, right: Weight) -> PairBlock | None:
        return self._pair_index.get(nu, {}).get((left, right))

    def _block_dim(self, nu: Weight) -> int:
        blocks = self._pairs.get(nu)
        return blocks[-1].stop if blocks else 0

    def labels(self, nu: Weight) -> list[tuple[Weight, Weight, int, int]]:
        out = []
        for b in self.pairs(nu):
            for il in range(b.dim_left):
                for ir in range(b.dim_right):
                    out.append((b.left, b.right, il, ir))
        return out

    # -- generators ---------------------------------------------------------

    def _e_matrix(self, i: int, nu: Weight) -> np.ndarray:
        cd = self.datum
        root = cd.simple_root(i)
        target = nu + root
        out = la.zeros(self.dim(target), self.dim(nu))
        for src in self._pairs[nu]:
            # E_i b (x) K_i c
            tgt = self.pair(target, src.left + root, src.right)
            if tgt is not None:
                k = qpow(cd.pairing_with_root(i, src.right), cd.k)
                _place_left(out, tgt, src, la.scale(self.left.e(i, src.left), k))
            # b (x) E_i c
            tgt = self.pair(target, src.left, src.right + root)
            if tgt is not None:
                _place_right(out, tgt, src, self.right.e(i, src.right))
        return out

    def _f_matrix(self, i: int, nu: Weight) -> np.ndarray:
        cd = self.datum
        root = cd.simple_root(i)
        target = nu - root
        out = la.zeros(self.dim(target), self.dim(nu))
        for src in self._pairs[nu]:
            # F_i b (x) c
            tgt = self.pair(target, src.left - root, src.right)
            if tgt is not None:
                _place_left(out, tgt, src, self.left.f(i, src.left))
            # K_i^{-1} b (x) F_i c
            tgt = self.pair(target, src.left, src.right - root)
            if tgt is not None:
                k = qpow(-cd.pairing_with_root(i, src.left), cd.k)
                _place_right(out, tgt, src, la.scale(self.right.f(i, src.right), k))
        return out

    # -- decomposition ------------------------------------------------------

    def singular_basis(self, nu: Weight) -> "SingularBasis":
        if nu not in self._singular:
            self._singular[nu] = singular_basis(self, nu)
        return self._singular[nu]

    def generated(self) -> dict[Weight, "GeneratedBlock"]:
        if self._generated is None:
            self._generated = generate_blocks(self)
        return self._generated

    def isotypic_projectors(self, nu: Weight) -> dict[Weight, np.ndarray]:
        block = self.generated()[nu]
        inv = la.inverse(block.basis)
        out = {}
        for top in sorted({lab.top for lab in block.labels}, key=self.weight_key):
            keep = la.zeros(len(block.labels), len(block.labels))
            for t, lab in enumerate(block.labels):
                if lab.top == top:
                    keep[t, t] = la.ONE
            out[top] = la.chain(block.basis, keep, inv)
        return out

    def to_json(self) -> dict:
        return {
            "datum": self.datum.to_json(),
            "top": self.top.to_json(),
            "depth": self.depth,
            "blocks": [
                {
                    "weight": nu.to_json(),
                    "dimension": self.dim(nu),
                    "pairs": [
                        {"left": b.left.to_json(), "right": b.right.to_json(),
                         "dim_left": b.dim_left, "dim_right": b.dim_right}
                        for b in self.pairs(nu)
                    ],
                }
                for nu in self.weights()
            ],
        }


def _place_left(out: np.ndarray, tgt: PairBlock, src: PairBlock, mat: np.ndarray) -> None:
    """Add ``mat (x) I`` from pair ``src`` into pair ``tgt`` (same right weight)."""
    dr = src.dim_right
    for (a, b), x in np.ndenumerate(mat):
        if x:
            for r in range(dr):
                out[tgt.offset + a * dr + r, src.offset + b * dr + r] += x


def _place_right(out: np.ndarray, tgt: PairBlock, src: PairBlock, mat: np.ndarray) -> None:
    """Add ``I (x) mat`` from pair ``src`` into pair ``tgt`` (same left weight)."""
    dt, ds = tgt.dim_right, src.dim_right
    for (a, b), x in np.ndenumerate(mat):
        if x:
            for l in range(src.dim_left):
                out[tgt.offset + l * dt + a, src.offset + l * ds + b] += x


def tensor_rep(left: WeightModule, right: WeightModule, depth: int | None = None) -> TensorRep:
    """Tensor product; ``depth`` defaults to the smaller factor depth."""
    if depth is None:
        depths = [d for d in (left.depth, right.depth) if d is not None]
        depth = min(depths) if depths else None
    return TensorRep(left, right, depth)


# -- singular vectors -------------------------------------------------------


@dataclass
class SingularBasis:
    """Columns spanning the singular vectors of block(weight).

    ``normalized_by`` is ``"p2"`` when columns are scaled so their p2-images
    are in reduced column echelon form, ``"kernel"`` when p2 is not injective
    (reducible left factor) and the kernel coordinates are used instead.
    """

    module: TensorRep
    weight: Weight
    matrix: np.ndarray
    normalized_by: str

    @property
    def size(self) -> int:
        return self.matrix.shape[1]

    def column(self, t: int) -> np.ndarray:
        return self.matrix[:, t : t + 1]

    def to_json(self) -> dict:
        return {
            "weight": self.weight.to_json(),
            "normalized_by": self.normalized_by,
            "columns": [[str(x) for x in self.matrix[:, t]] for t in range(self.size)],
        }


def stacked_e(module: WeightModule, nu: Weight) -> np.ndarray:
    mats = [module.e(i, nu) for i in range(module.datum.rank)]
    return la.vstack(mats, module.dim(nu))


def singular_basis(T: TensorRep, nu: Weight) -> SingularBasis:
    """Kernel of the stacked E_i on block(nu), normalized through p2."""
    n = T.dim(nu)
    kern = la.kernel(stacked_e(T, nu)) if n else la.zeros(0, 0)
    if not kern.shape[1]:
        return SingularBasis(T, nu, la.zeros(n, 0), "p2")
    image = p2_matrix(T, nu)
    y = la.matmul(image, kern)
    how = "p2"
    if la.rank(y) < kern.shape[1]:
        y, how = kern, "kernel"
    rows = la.independent_columns(y.T.copy())
    change = la.inverse(y[rows, :])
    return SingularBasis(T, nu, la.matmul(kern, change), how)


def p2_matrix(T: TensorRep, nu: Weight) -> np.ndarray:
    """Coefficient of the left top vector, as a matrix block(nu) -> right block(nu - top_L)."""
    target = nu - T.left.top
    dim = T.right.dim(target) if T.right.height(target) is not None else 0
    out = la.zeros(dim, T.dim(nu))
    b = T.pair(nu, T.left.top, target)
    if b is not None:
        for r in range(b.dim_right):
            out[r, b.offset + r] = la.ONE
    return out


def p1_matrix(T: TensorRep, nu: Weight) -> np.ndarray:
    """Coefficient of the right top vector, as a matrix block(nu) -> left block(nu - top_R)."""
    target = nu - T.right.top
    dim = T.left.dim(target) if T.left.height(target) is not None else 0
    out = la.zeros(dim, T.dim(nu))
    b = T.pair(nu, target, T.right.top)
    if b is not None:
        for l in range(b.dim_left):
            out[l, b.offset + l] = la.ONE
    return out


def project_p2(T: TensorRep, u: VectorInRep) -> VectorInRep:
    target = u.weight - T.left.top
    return VectorInRep(T.right, target, la.matmul(p2_matrix(T, u.weight), u.coords))


def project_p1(T: TensorRep, u: VectorInRep) -> VectorInRep:
    target = u.weight - T.right.top
    return VectorInRep(T.left, target, la.matmul(p1_matrix(T, u.weight), u.coords))


# -- relabelings --------------------------------------------------------------


def flat_labels(module: WeightModule, mu: Weight) -> list[tuple]:
    """Basis labels of block(mu) as tuples of (factor weight, index) leaves."""
    if not isinstance(module, TensorRep):
        return [((mu, t),) for t in range(module.dim(mu))]
    out = []
    for b in module.pairs(mu):
        left = flat_labels(module.left, b.left)
        right = flat_labels(module.right, b.right)
        for l in left:
            for r in right:
                out.append(l + r)
    return out


def relabel_matrix(src: WeightModule, dst: WeightModule, mu: Weight, order=None) -> np.ndarray:
    """Permutation block(mu) of ``src`` -> block(mu) of ``dst`` matching flat labels.

    ``order`` permutes the leaves of each source label before matching,
    e.g. ``(1, 0)`` realizes the flip b (x) c -> c (x) b.
    """
    s = flat_labels(src, mu)
    d = flat_labels(dst, mu)
    index = {lab: t for t, lab in enumerate(d)}
    if len(index) != len(s):
        raise ValueError("blocks do not have matching bases")
    out = la.zeros(len(d), len(s))
    for t, lab in enumerate(s):
        if order is not None:
            lab = tuple(lab[p] for p in order)
        out[index[lab], t] = la.ONE
    return out


def leaf_count(module: WeightModule) -> int:
    return leaf_count(module.left) + leaf_count(module.right) if isinstance(module, TensorRep) else 1


def flip_matrix(src: TensorRep, dst: TensorRep, nu: Weight) -> np.ndarray:
    """Matrix of b (x) c -> c (x) b from ``src = V (x) W`` to ``dst = W (x) V`` on block(nu)."""
    nleft = leaf_count(src.left)
    nright = leaf_count(src.right)
    order = tuple(range(nleft, nleft + nright)) + tuple(range(nleft))
    return relabel_matrix(src, dst, nu, order)


# -- generation from singular vectors -------------------------------------------


@dataclass(frozen=True)
class GenLabel:
    """A generated basis vector ``F_word s`` with ``s`` singular column ``index`` at weight ``top``."""

    top: Weight
    index: int
    word: tuple[int, ...]


@dataclass
class GeneratedBlock:
    """Block basis made of F-images of singular vectors.

    ``sources[t]`` records how column ``t`` arose: ``("singular", s)`` for
    singular column ``s`` at this weight, or ``("F", i, c)`` for ``F_i``
    applied to column ``c`` of the generated basis at ``weight + alpha_i``.
    """

    weight: Weight
    basis: np.ndarray
    labels: list[GenLabel]
    sources: list[tuple]


def generate_blocks(T: WeightModule, singular_bases: dict[Weight, np.ndarray] | None = None
                    ) -> dict[Weight, GeneratedBlock]:
    """Express every block as F-monomial images of singular vectors, top weight first.

    Candidates at a weight are its singular columns followed by ``F_i g`` for
    generated vectors ``g`` above, ordered by F-word as in the irreducible
    construction; the greedy independent subset is kept.
    """
    cd = T.datum
    out: dict[Weight, GeneratedBlock] = {}
    for nu in T.weights():
        if singular_bases is not None and nu in singular_bases:
            sing = singular_bases[nu]
        else:
            sing = T.singular_basis(nu).matrix
        cols = [sing[:, s : s + 1] for s in range(sing.shape[1])]
        labels = [GenLabel(nu, s, ()) for s in range(sing.shape[1])]
        sources: list[tuple] = [("singular", s) for s in range(sing.shape[1])]
        fcands = []
        for i in range(cd.rank):
            up = nu + cd.simple_root(i)
            if up not in out:
                continue
            blk = out[up]
            f = T.f(i, up)
            images = la.matmul(f, blk.basis)
            for c, lab in enumerate(blk.labels):
                fcands.append(((i,) + lab.word, lab.top, lab.index, i, c, images[:, c : c + 1]))
        fcands.sort(key=lambda x: (x[0], T.weight_key(x[1]), x[2]))
        for word, top, index, i, c, col in fcands:
            cols.append(col)
            labels.append(GenLabel(top, index, word))
            sources.append(("F", i, c))
        n = T.dim(nu)
        cand = la.hstack(cols, n)
        keep = la.independent_columns(cand) if cand.shape[1] else []
        if len(keep) < n:
            raise GenerationFailure(
                f"block {nu} has dimension {n} but F-images of singular vectors span only {len(keep)}"
            )
        out[nu] = GeneratedBlock(nu, cand[:, keep], [labels[t] for t in keep], [sources[t] for t in keep])
    return out
