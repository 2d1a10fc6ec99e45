"""Common interface for weight-graded, possibly depth-truncated U_q-modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import linalg as la
from .cartan import CartanDatum, Weight
from .errors import OutOfDepth
from .qfield import QScalar, qpow, quantum_integer


class WeightModule:
    """A module presented by weight blocks and generator matrices.

    Subclasses provide ``_block_dim``, ``_e_matrix`` and ``_f_matrix`` and the
    list of nonzero weights.  ``depth`` bounds the height ``top - weight``
    of retained blocks; ``None`` means the module is complete.
    """

    datum: CartanDatum
    top: Weight
    depth: int | None

    # -- weights ------------------------------------------------------------

    def height(self, mu: Weight) -> int | None:
        return self.datum.height(self.top - mu)

    def retained(self, mu: Weight) -> bool:
        if self.depth is None:
            return True
        h = self.height(mu)
        return h is None or h <= self.depth

    def weights(self) -> list[Weight]:
        raise NotImplementedError

    def weight_key(self, mu: Weight) -> tuple:
        c = self.datum.positive_root_combination(self.top - mu)
        return (sum(c), tuple(-x for x in c))

    def dim(self, mu: Weight) -> int:
        if not self.retained(mu):
            raise OutOfDepth(f"weight {mu} lies beyond retained depth {self.depth}")
        if self.height(mu) is None:
            return 0
        return self._block_dim(mu)

    def total_dimension(self) -> int:
        return sum(self.dim(mu) for mu in self.weights())

    def is_complete(self) -> bool:
        return self.depth is None

    # -- generators ---------------------------------------------------------

    def e(self, i: int, mu: Weight) -> np.ndarray:
        """Matrix of E_i from block(mu) to block(mu + alpha_i)."""
        key = (i, mu)
        cache = self._e_cache
        if key not in cache:
            target = mu + self.datum.simple_root(i)
            src = self.dim(mu)
            tgt = self.dim(target)
            cache[key] = la.zeros(tgt, src) if not (src and tgt) else self._e_matrix(i, mu)
        return cache[key]

    def f(self, i: int, mu: Weight) -> np.ndarray:
        """Matrix of F_i from block(mu) to block(mu - alpha_i)."""
        key = (i, mu)
        cache = self._f_cache
        if key not in cache:
            target = mu - self.datum.simple_root(i)
            if not self.retained(target):
                raise OutOfDepth(f"F_{i} maps weight {mu} to {target}, beyond depth {self.depth}")
            src = self.dim(mu)
            tgt = self.dim(target)
            cache[key] = la.zeros(tgt, src) if not (src and tgt) else self._f_matrix(i, mu)
        return cache[key]

    def k_scalar(self, i: int, mu: Weight, power: int = 1) -> QScalar:
        """Eigenvalue of ``K_i**power`` on block(mu)."""
        return qpow(power * self.datum.pairing_with_root(i, mu), self.datum.k)

    def kw_scalar(self, w: Weight, mu: Weight) -> QScalar:
        """Eigenvalue of K_w for a coweight ``w`` given in the basis H_i."""
        return qpow(sum(a * b for a, b in zip(w.coords, mu.coords)), self.datum.k)

    def commutator_scalar(self, i: int, mu: Weight) -> QScalar:
        """``(K_i - K_i^{-1})/(q_i - q_i^{-1})`` on block(mu)."""
        return quantum_integer(mu.coords[i], self.datum.symmetrizers[i], self.datum.k)

    def generator(self, name: str, i: int, mu: Weight) -> tuple[np.ndarray, Weight]:
        """Matrix of E_i, F_i or K_i on block(mu) and the target weight."""
        root = self.datum.simple_root(i)
        if name == "E":
            return self.e(i, mu), mu + root
        if name == "F":
            return self.f(i, mu), mu - root
        if name == "K":
            n = self.dim(mu)
            return la.scale(la.identity(n), self.k_scalar(i, mu)), mu
        raise ValueError(f"unknown generator {name!r}")

    def isotypic_projectors(self, mu: Weight) -> dict[Weight, np.ndarray]:
        raise NotImplementedError

    @cached_property
    def _e_cache(self) -> dict:
        return {}

    @cached_property
    def _f_cache(self) -> dict:
        return {}


@dataclass
class VectorInRep:
    """A weight vector: a column of coordinates in ``module``'s block(weight)."""

    module: WeightModule
    weight: Weight
    coords: np.ndarray

    def __post_init__(self):
        if self.coords.shape != (self.module.dim(self.weight), 1):
            raise ValueError(
                f"coordinate column of shape {self.coords.shape} for block of dimension "
                f"{self.module.dim(self.weight)}"
            )

    def is_zero(self) -> bool:
        return la.is_zero(self.coords)

    def scaled(self, c) -> "VectorInRep":
        return VectorInRep(self.module, self.weight, la.scale(self.coords, c))

    def __add__(self, other: "VectorInRep") -> "VectorInRep":
        if other.weight != self.weight:
            raise ValueError("adding vectors of different weights")
        return VectorInRep(self.module, self.weight, la.add(self.coords, other.coords))

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorInRep):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.weight == other.weight and la.equal(self.coords, other.coords)


def act(module: WeightModule, word, v: VectorInRep) -> VectorInRep:
    """Apply an algebra word to ``v``.

    ``word`` is written in algebraic order, so its rightmost token acts
    first.  Tokens are ``("E", i)``, ``("F", i)``, ``("K", i)`` or scalars.
    """
    cur_w, cur = v.weight, v.coords
    for token in reversed(list(word)):
        if isinstance(token, (int, Fraction, QScalar)):
            cur = la.scale(cur, token)
            continue
        name, i = token
        mat, target = module.generator(name, i, cur_w)
        cur = la.matmul(mat, cur)
        cur_w = target
    return VectorInRep(module, cur_w, cur)
