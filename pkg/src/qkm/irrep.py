"""
Irreducible integrable highest-weight modules V_lambda.

Blocks are built level by level in height below lambda.  At weight mu the
spanning set is ``F_i b`` for every basis vector ``b`` of block(mu + alpha_i).
``E_j`` of a spanning vector comes from ``E_j F_i = F_i E_j + delta_ij [K_i]``
using the already-built higher blocks, and the contravariant form (E_i
adjoint to F_i, q and K_i fixed) follows as ``(F_i b, s) = (b, E_i s)``.
Its radical is the maximal proper submodule, so the block basis is the
lexicographically-first set of spanning words independent modulo the
radical; the stored Gram block is the form restricted to that basis.
"""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .cartan import CartanDatum, Weight
from .errors import DepthTooSmallForRequest, NotDominant, OutOfDepth
from .module import VectorInRep, WeightModule, act

__all__ = ["Representation", "build_irrep", "act", "dimension_at"]


class Representation(WeightModule):
    """Depth-truncated irreducible module with exact generator matrices.

    The basis of each block is a list of F-words; a word ``(i_k, ..., i_1)``
    stands for ``F_{i_k} ... F_{i_1} v_lambda``.
    """

    def __init__(self, datum: CartanDatum, highest_weight: Weight, depth: int | None):
        self.datum = datum
        self.highest_weight = highest_weight
        self.top = highest_weight
        self.depth = depth
        self.words: dict[Weight, list[tuple[int, ...]]] = {}
        self.gram: dict[Weight, np.ndarray] = {}
        self._order: list[Weight] = []

    def __repr__(self) -> str:
        d = "full" if self.depth is None else f"depth={self.depth}"
        name = self.datum.name or "explicit"
        return f"Representation({name}, lambda={self.highest_weight}, {d})"

    def weights(self) -> list[Weight]:
        return list(self._order)

    def _block_dim(self, mu: Weight) -> int:
        return len(self.words.get(mu, ()))

    def _e_matrix(self, i, mu):
        # every nonzero block is filled during construction
        raise AssertionError(f"E_{i} on {mu} missing from construction")

    def _f_matrix(self, i, mu):
        raise AssertionError(f"F_{i} on {mu} missing from construction")

    @property
    def highest_vector(self) -> VectorInRep:
        return VectorInRep(self, self.highest_weight, la.unit_column(1, 0))

    def basis_vector(self, mu: Weight, index: int) -> VectorInRep:
        return VectorInRep(self, mu, la.unit_column(self.dim(mu), index))

    def isotypic_projectors(self, mu: Weight) -> dict[Weight, np.ndarray]:
        return {self.highest_weight: la.identity(self.dim(mu))}

    def word_label(self, mu: Weight, index: int) -> str:
        word = self.words[mu][index]
        return "".join(f"F{i}" for i in word) + "v" if word else "v"

    def to_json(self) -> dict:
        blocks = []
        for mu in self.weights():
            blocks.append({
                "weight": mu.to_json(),
                "dimension": self.dim(mu),
                "words": [list(w) for w in self.words[mu]],
            })
        gens = []
        for mu in self.weights():
            for i in range(self.datum.rank):
                e = self.e(i, mu)
                if e.size:
                    gens.append({"generator": "E", "index": i, "source": mu.to_json(),
                                 "matrix": la.to_strings(e)})
                try:
                    f = self.f(i, mu)
                except OutOfDepth:
                    continue
                if f.size:
                    gens.append({"generator": "F", "index": i, "source": mu.to_json(),
                                 "matrix": la.to_strings(f)})
        return {
            "datum": self.datum.to_json(),
            "lambda": self.highest_weight.to_json(),
            "depth": self.depth,
            "blocks": blocks,
            "generators": gens,
        }


def build_irrep(cd: CartanDatum, lam, depth: int | None = None) -> Representation:
    """Construct V_lambda, keeping weights of height at most ``depth`` below lambda."""
    lam = cd.weight(lam)
    if not lam.is_dominant():
        raise NotDominant(f"highest weight {lam} is not dominant")
    if depth is not None and depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth is None and not cd.finite_type:
        raise DepthTooSmallForRequest(
            "an explicit depth is required: the datum is not of finite type, so V_lambda is infinite"
        )
    rep = Representation(cd, lam, depth)
    rep.words[lam] = [()]
    rep.gram[lam] = la.identity(1)
    rep._order.append(lam)
    roots = [cd.simple_root(i) for i in range(cd.rank)]
    level = [lam]
    h = 0
    while level and (depth is None or h < depth):
        h += 1
        cands: dict[Weight, list[tuple[tuple[int, ...], int, int]]] = {}
        for nu in level:
            for i in range(cd.rank):
                mu = nu - roots[i]
                lst = cands.setdefault(mu, [])
                for b, word in enumerate(rep.words[nu]):
                    lst.append(((i,) + word, i, b))
        new_level = []
        for mu in sorted(cands, key=rep.weight_key):
            if _add_block(rep, mu, sorted(cands[mu]), roots):
                new_level.append(mu)
                rep._order.append(mu)
        # F out of the previous level into weights that turned out empty
        level = new_level
    return rep


def _add_block(rep: Representation, mu: Weight, cands, roots) -> bool:
    cd = rep.datum
    n = len(cands)
    ecand = []
    for j in range(cd.rank):
        tgt = mu + roots[j]
        ecand.append(la.zeros(rep._block_dim(tgt), n))
    for col, (_, i, b) in enumerate(cands):
        src = mu + roots[i]
        for j in range(cd.rank):
            tgt = mu + roots[j]
            dt = rep._block_dim(tgt)
            if not dt:
                continue
            mid = src + roots[j]
            vec = la.zeros(dt, 1)
            if rep._block_dim(mid):
                eb = rep.e(j, src)[:, b : b + 1]
                vec = la.matmul(rep.f(i, mid), eb)
            if i == j:
                vec[b, 0] = vec[b, 0] + rep.commutator_scalar(i, src)
            ecand[j][:, col] = vec[:, 0]
    # Candidates are genuine vectors of V_lambda and no vector below the top is
    # singular, so a combination vanishes iff all its E-images do.  The stacked
    # E-images therefore have the column dependencies of the contravariant Gram
    # matrix (which equals upper Gram blocks times these images) at lower degree.
    stacked = la.vstack(ecand, n)
    reduced, piv = la.rref(stacked)
    for i in range(cd.rank):
        src = mu + roots[i]
        if rep._block_dim(src):
            rep._f_cache[(i, src)] = la.zeros(len(piv), rep._block_dim(src))
    if not piv:
        return False
    rep.words[mu] = [cands[p][0] for p in piv]
    sub = la.zeros(len(piv), len(piv))
    for s, p in enumerate(piv):
        _, i, b = cands[p]
        row = la.matmul(rep.gram[mu + roots[i]][b : b + 1, :], ecand[i][:, piv])
        sub[s, :] = row[0, :]
    rep.gram[mu] = sub
    for j in range(cd.rank):
        rep._e_cache[(j, mu)] = ecand[j][:, piv]
    coords = reduced[: len(piv), :]
    for col, (_, i, b) in enumerate(cands):
        src = mu + roots[i]
        rep._f_cache[(i, src)][:, b] = coords[:, col]
    return True


def dimension_at(rep: WeightModule, mu) -> int:
    return rep.dim(rep.datum.weight(mu))
