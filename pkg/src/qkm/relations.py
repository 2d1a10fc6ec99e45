"""Defining relations of U_q(g) checked as exact block-matrix identities."""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .cartan import Weight
from .errors import OutOfDepth
from .module import WeightModule
from .qfield import quantum_binomial
from .report import Report


def word_matrix(module: WeightModule, word, mu: Weight) -> tuple[np.ndarray, Weight]:
    """Matrix of a generator word on block(mu); the rightmost letter acts first."""
    cur = la.identity(module.dim(mu))
    w = mu
    for name, i in reversed(list(word)):
        mat, w = module.generator(name, i, w)
        cur = la.matmul(mat, cur)
    return cur, w


def _block_label(mu: Weight, *extra) -> tuple:
    return (mu.to_json(),) + extra


def check_grading(module: WeightModule, report: Report) -> None:
    cd = module.datum
    for mu in module.weights():
        n = module.dim(mu)
        for i in range(cd.rank):
            root = cd.simple_root(i)
            e = module.e(i, mu)
            ok = e.shape == (module.dim(mu + root), n)
            try:
                f = module.f(i, mu)
                ok = ok and f.shape == (module.dim(mu - root), n)
            except OutOfDepth:
                pass
            status = "pass" if ok else "fail"
            report.add("grading", _block_label(mu, i), status)


def check_commutation(module: WeightModule, report: Report) -> None:
    """``E_i F_j - F_j E_i = delta_ij (K_i - K_i^{-1})/(q_i - q_i^{-1})`` on each block."""
    cd = module.datum
    for mu in module.weights():
        n = module.dim(mu)
        for i in range(cd.rank):
            for j in range(cd.rank):
                label = _block_label(mu, i, j)
                try:
                    ef, _ = word_matrix(module, [("E", i), ("F", j)], mu)
                    fe, _ = word_matrix(module, [("F", j), ("E", i)], mu)
                except OutOfDepth:
                    report.skip("commutation", label)
                    continue
                lhs = la.sub(ef, fe)
                rhs = la.zeros(*lhs.shape)
                if i == j:
                    rhs = la.scale(la.identity(n), module.commutator_scalar(i, mu))
                report.compare("commutation", label, lhs, rhs)


def check_serre(module: WeightModule, report: Report) -> None:
    """``sum_s (-1)^s [n choose s]_{q_i} X_i^{n-s} X_j X_i^s = 0`` with ``n = 1 - a_ij``, X in {E, F}.

    Evaluated Horner-style: ``T <- X_i T + c_s X_j X_i^s``.
    """
    cd = module.datum
    for mu in module.weights():
        for name in ("E", "F"):
            for i in range(cd.rank):
                for j in range(cd.rank):
                    if i == j:
                        continue
                    n = 1 - cd.matrix[i][j]
                    label = _block_label(mu, name, i, j)
                    try:
                        total = _serre_block(module, name, i, j, n, mu)
                    except OutOfDepth:
                        report.skip(f"serre_{name}", label)
                        continue
                    report.compare(f"serre_{name}", label, total, la.zeros(*total.shape))


def _serre_block(module: WeightModule, name: str, i: int, j: int, n: int, mu: Weight) -> np.ndarray:
    cd = module.datum
    power = None  # X_i^s on block(mu); None stands for the identity
    w = mu
    total = None
    for s in range(n + 1):
        if s:
            xi, w = module.generator(name, i, w)
            power = xi if power is None else la.matmul(xi, power)
        xj, wj = module.generator(name, j, w)
        term = xj if power is None else la.matmul(xj, power)
        c = quantum_binomial(n, s, cd.symmetrizers[i], cd.k)
        term = la.scale(term, -c if s % 2 else c)
        if total is None:
            total, tw = term, wj
        else:
            xi, tw = module.generator(name, i, tw)
            total = la.add(la.matmul(xi, total), term)
    return total


def check_relations(module: WeightModule, instance: str = "") -> Report:
    """Grading, commutation and quantum Serre identities on every retained block."""
    report = Report(instance=instance)
    check_grading(module, report)
    check_commutation(module, report)
    check_serre(module, report)
    return report
