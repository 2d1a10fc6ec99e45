
import pytest
from hypothesis import given, strategies as st

from qkm import linalg as la
from qkm.bar import (
    BarOperator,
    bar_from_summands,
    bar_irrep,
    bar_singular_image,
    bar_tensor,
    fixed_basis,
    naive_bar_tensor,
)
from qkm.cartan import Weight, new_cartan_datum, preset
from qkm.errors import NotSingular
from qkm.irrep import build_irrep
from qkm.qfield import from_terms, qpow
from qkm.report import Report
from qkm.tensor import tensor_rep
from qkm.verify import check_bar_operator, check_singular_images


def _a1():
    cd = preset("A1")
    V = build_irrep(cd, (1,))
    return cd, V, tensor_rep(V, V)


def test_irrep_bar_fixes_top_and_conjugates():
    cd = preset("A2")
    V = build_irrep(cd, (1, 1))
    B = bar_irrep(V)
    top = la.unit_column(1, 0)
    assert la.equal(B.apply(V.top, top), top)
    q = qpow(1, cd.k)
    mu = V.top - cd.simple_root(0)
    v = la.scale(la.unit_column(V.dim(mu), 0), q**2 + 3)
    assert la.equal(B.apply(mu, v), la.scale(la.unit_column(V.dim(mu), 0), q**-2 + 3))
    inv = la.scale(top, q + q.inverse())
    assert la.equal(B.apply(V.top, inv), inv)


def _solve_compatible(V):
    """Bar-semilinear operators commuting with the algebra bar and fixing the top: solved top-down."""
    cd = V.datum
    mats = {V.top: la.identity(1)}
    for nu in V.weights()[1:]:
        lhs, rhs = [], []
        for i in range(cd.rank):
            up = nu + cd.simple_root(i)
            if up in mats and V.dim(up):
                f = V.f(i, up)
                # M_nu conj(F) = F M_up, transposed into a system for M_nu^T
                lhs.append(la.conj(f).T.copy())
                rhs.append(la.matmul(f, mats[up]).T.copy())
        system = la.vstack(lhs, V.dim(nu))
        target = la.vstack(rhs, V.dim(nu))
        mats[nu] = la.solve(system, target).T.copy()
    return BarOperator(V, mats)


@pytest.mark.parametrize("name,lam", [("A1", (2,)), ("A2", (1, 1)), ("B2", (1, 1)), ("G2", (0, 1))])
def test_bar_irrep_is_the_unique_solution(name, lam):
    V = build_irrep(preset(name), lam)
    solved = _solve_compatible(V)
    B = bar_irrep(V)
    for mu in V.weights():
        assert la.equal(solved.matrix(mu), B.matrix(mu))
    r = Report()
    check_bar_operator(solved, r)
    assert r.ok


def test_scaled_bar_fixes_scaled_top():
    cd = preset("A1")
    V = build_irrep(cd, (2,))
    c = from_terms({0: 1, 2: 1}, cd.k)
    B = bar_irrep(V, c)
    top = la.scale(la.unit_column(1, 0), c)
    assert la.equal(B.apply(V.top, top), top)
    r = Report()
    check_bar_operator(B, r)
    assert r.ok


def test_singular_image_of_top_is_top():
    cd, V, T = _a1()
    b = bar_irrep(V)
    top = la.unit_column(1, 0)
    assert la.equal(bar_singular_image(T, top, Weight((2,)), b, b), top)


def test_singular_image_rejects_non_singular():
    cd, V, T = _a1()
    b = bar_irrep(V)
    with pytest.raises(NotSingular):
        bar_singular_image(T, la.unit_column(2, 0), Weight((0,)), b, b)


@pytest.mark.parametrize("name,lam,mu", [("A1", (1,), (1,)), ("A2", (1, 0), (0, 1)), ("B2", (0, 1), (1, 0)),
                                         ("A2", (1, 1), (1, 0))])
def test_tensor_bar_suite(name, lam, mu):
    cd = preset(name)
    V, W = build_irrep(cd, lam), build_irrep(cd, mu)
    T = tensor_rep(V, W)
    bv, bw = bar_irrep(V), bar_irrep(W)
    bt = bar_tensor(T, bv, bw)
    r = Report()
    check_bar_operator(bt, r, "bar_tensor")
    check_singular_images(T, bv, bw, bt, r)
    assert r.ok, r.failures[:3]


def test_naive_bar_is_not_compatible():
    cd, V, T = _a1()
    b = bar_irrep(V)
    naive = naive_bar_tensor(b, b, T)
    q = qpow(1, cd.k)
    v = la.scale(la.unit_column(1, 0), q)
    assert la.equal(naive.apply(Weight((2,)), v), la.scale(v, q**-2))
    r = Report()
    check_bar_operator(naive, r, "naive")
    assert not r.passed("naive_compatible")
    assert r.passed("naive_involutive")


def test_bar_from_summands_fixes_chosen_singulars():
    cd = preset("A2")
    V = build_irrep(cd, (1, 0))
    VV = tensor_rep(V, V)
    images = {nu: VV.singular_basis(nu).matrix for nu in VV.weights()}
    B = bar_from_summands(VV, images)
    r = Report()
    check_bar_operator(B, r)
    assert r.ok
    for nu, s in images.items():
        if s.shape[1]:
            assert la.equal(B.apply(nu, s), s)


def test_truncated_bar_records_skips():
    cd = new_cartan_datum([[2, -3], [-3, 2]])
    V = build_irrep(cd, (1, 0), depth=3)
    T = tensor_rep(V, V)
    b = bar_irrep(V)
    r = Report()
    check_bar_operator(bar_tensor(T, b, b), r)
    assert r.ok and r.skipped


_B2 = None


def _b2_bar():
    global _B2
    if _B2 is None:
        cd = preset("B2")
        V = build_irrep(cd, (1, 0))
        T = tensor_rep(V, V)
        b = bar_irrep(V)
        _B2 = (cd, T, bar_tensor(T, b, b))
    return _B2


coef = st.dictionaries(st.integers(-3, 3), st.integers(-4, 4), max_size=3)


@given(st.lists(coef, min_size=1, max_size=25), st.integers(0, 100))
def test_tensor_bar_involutive_on_random_vectors(cs, pick):
    cd, T, B = _b2_bar()
    nu = T.weights()[pick % len(T.weights())]
    n = T.dim(nu)
    v = la.column([from_terms(cs[t % len(cs)], cd.k) for t in range(n)])
    assert la.equal(B.apply(nu, B.apply(nu, v)), v)
    w = la.add(v, B.apply(nu, v))
    assert la.equal(B.apply(nu, w), w)


def test_fixed_basis_spans():
    cd, T, B = _b2_bar()
    for nu in T.weights():
        assert fixed_basis(B, nu).shape[1] == T.dim(nu)
