import pytest

from qkm import linalg as la
from qkm.cartan import Weight, new_cartan_datum, preset
from qkm.irrep import build_irrep
from qkm.module import VectorInRep
from qkm.qfield import qpow
from qkm.relations import check_relations
from qkm.tensor import (
    generate_blocks,
    p1_matrix,
    p2_matrix,
    project_p1,
    project_p2,
    relabel_matrix,
    singular_basis,
    stacked_e,
    tensor_rep,
)

from oracles import weyl_dimension


@pytest.fixture(scope="module")
def a1():
    cd = preset("A1")
    V = build_irrep(cd, (1,))
    return cd, V, tensor_rep(V, V)


def w(*c):
    return Weight(c)


def test_a1_blocks(a1):
    cd, V, T = a1
    assert [(nu.coords, T.dim(nu)) for nu in T.weights()] == [((2,), 1), ((0,), 2), ((-2,), 1)]


def test_a1_e_block(a1):
    cd, V, T = a1
    q = qpow(1, cd.k)
    assert la.equal(T.e(0, w(0)), la.matrix([[q, 1]]))


def test_a1_singular_vectors(a1):
    cd, V, T = a1
    q = qpow(1, cd.k)
    top = singular_basis(T, w(2))
    assert top.size == 1 and top.matrix[0, 0] == 1
    mid = singular_basis(T, w(0))
    # basis order: (v- (x) v+, v+ (x) v-)
    assert la.equal(mid.matrix, la.matrix([[-q.inverse()], [1]]))
    assert singular_basis(T, w(-2)).size == 0


def test_a1_projections(a1):
    cd, V, T = a1
    q = qpow(1, cd.k)
    u = VectorInRep(T, w(0), la.matrix([[1], [-q]]))
    assert la.equal(project_p2(T, u).coords, la.matrix([[-q]]))
    assert la.equal(project_p1(T, u).coords, la.matrix([[1]]))
    top = VectorInRep(T, w(2), la.matrix([[1]]))
    assert la.equal(project_p2(T, top).coords, la.matrix([[1]]))
    assert la.equal(project_p1(T, top).coords, la.matrix([[1]]))
    no_top = VectorInRep(T, w(0), la.matrix([[1], [0]]))
    assert la.is_zero(project_p2(T, no_top).coords)


def test_a2_dual_pair():
    cd = preset("A2")
    T = tensor_rep(build_irrep(cd, (1, 0)), build_irrep(cd, (0, 1)))
    assert T.total_dimension() == 9 == weyl_dimension([[2, -1], [-1, 2]], (1, 1)) + 1
    assert T.dim(w(0, 0)) == 3
    assert singular_basis(T, w(1, 1)).size == 1
    assert singular_basis(T, w(0, 0)).size == 1


@pytest.mark.parametrize("name,lam,mu", [("A1", (1,), (2,)), ("A2", (1, 0), (1, 1)), ("B2", (1, 0), (0, 1))])
def test_coproduct_respects_commutation(name, lam, mu):
    cd = preset(name)
    # grading, [E_i, F_j] and both Serre relations for the coproduct action
    assert check_relations(tensor_rep(build_irrep(cd, lam), build_irrep(cd, mu))).ok


def test_coassociativity():
    cd = preset("A2")
    U, V, W = (build_irrep(cd, x) for x in [(1, 0), (0, 1), (1, 0)])
    left = tensor_rep(tensor_rep(U, V), W)
    right = tensor_rep(U, tensor_rep(V, W))
    assert [left.dim(nu) for nu in left.weights()] == [right.dim(nu) for nu in right.weights()]
    for nu in left.weights():
        p = relabel_matrix(left, right, nu)
        for i in range(cd.rank):
            up = nu + cd.simple_root(i)
            if not left.dim(up):
                continue
            pu = relabel_matrix(left, right, up)
            assert la.equal(la.matmul(pu, left.e(i, nu)), la.matmul(right.e(i, nu), p))


@pytest.mark.parametrize("name,lam,mu", [("A2", (1, 1), (1, 0)), ("B2", (1, 0), (1, 0)), ("G2", (0, 1), (0, 1))])
def test_singular_columns_are_the_kernel(name, lam, mu):
    cd = preset(name)
    T = tensor_rep(build_irrep(cd, lam), build_irrep(cd, mu))
    for nu in T.weights():
        s = singular_basis(T, nu)
        e = stacked_e(T, nu)
        assert la.is_zero(la.matmul(e, s.matrix))
        # rank certificate: the span is the whole kernel
        assert la.rank(e) + s.size == T.dim(nu)
        if s.size:
            assert la.rank(la.matmul(p1_matrix(T, nu), s.matrix)) == s.size
            assert la.rank(la.matmul(p2_matrix(T, nu), s.matrix)) == s.size


def test_generated_blocks_span():
    cd = preset("B2")
    T = tensor_rep(build_irrep(cd, (1, 0)), build_irrep(cd, (0, 1)))
    for nu, blk in generate_blocks(T).items():
        assert blk.basis.shape == (T.dim(nu), T.dim(nu))
        assert la.rank(blk.basis) == T.dim(nu)


def test_truncated_tensor_depth():
    cd = new_cartan_datum([[2, -3], [-3, 2]])
    V = build_irrep(cd, (1, 0), depth=3)
    T = tensor_rep(V, V)
    assert T.depth == 3
    assert all(T.height(nu) <= 3 for nu in T.weights())


def test_isotypic_projectors_resolve_identity():
    cd = preset("A2")
    V = build_irrep(cd, (1, 0))
    T = tensor_rep(V, V)
    for nu in T.weights():
        projs = T.isotypic_projectors(nu)
        total = la.zeros(T.dim(nu), T.dim(nu))
        for p in projs.values():
            assert la.equal(la.matmul(p, p), p)
            total = la.add(total, p)
        assert la.equal(total, la.identity(T.dim(nu)))
