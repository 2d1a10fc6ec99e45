import itertools

import pytest

from qkm import linalg as la
from qkm.cartan import PRESETS, Weight, new_cartan_datum, preset
from qkm.errors import NotDominant, OutOfDepth
from qkm.irrep import build_irrep, dimension_at
from qkm.module import act
from qkm.qfield import from_terms, qpow
from qkm.relations import check_relations

from oracles import contravariant_rank, freudenthal, rank1_ef, weyl_dimension

HYPERBOLIC = [[2, -3], [-3, 2]]
q = qpow(1, 4)


def test_rank_one_fundamental():
    cd = preset("A1")
    V = build_irrep(cd, (1,), depth=1)
    assert [mu.coords for mu in V.weights()] == [(1,), (-1,)]
    v = V.highest_vector
    fv = act(V, [("F", 0)], v)
    assert fv.weight == Weight((-1,)) and la.equal(fv.coords, la.unit_column(1, 0))
    assert act(V, [("E", 0), ("F", 0)], v) == v
    assert act(V, [("E", 0)], v).is_zero()
    assert act(V, [], v) == v


def test_rank_one_verma_law():
    cd = preset("A1")
    V = build_irrep(cd, (2,))
    assert [V.dim(mu) for mu in V.weights()] == [1, 1, 1]
    v = V.highest_vector
    lhs = act(V, [("E", 0), ("F", 0), ("F", 0)], v)
    rhs = act(V, [from_terms(rank1_ef(2, 2), 4), ("F", 0)], v)
    assert lhs == rhs


def test_a2_fundamental():
    V = build_irrep(preset("A2"), (1, 0))
    assert V.total_dimension() == 3
    assert [V.dim(mu) for mu in V.weights()] == [1, 1, 1]


def test_dimension_at():
    cd = preset("A2")
    adj = build_irrep(cd, (1, 1))
    assert adj.total_dimension() == 8
    assert dimension_at(adj, (0, 0)) == 2
    assert dimension_at(adj, (1, 1)) == 1
    a1 = preset("A1")
    assert dimension_at(build_irrep(a1, (1,)), (-3,)) == 0


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_weight_multiplicities_match_freudenthal(name):
    cd = preset(name)
    a = [list(r) for r in cd.matrix]
    for lam in [(1, 0), (0, 1), (1, 1)]:
        V = build_irrep(cd, lam)
        got = {mu.coords: V.dim(mu) for mu in V.weights() if V.dim(mu)}
        assert got == freudenthal(a, lam)


def test_singular_highest_vector():
    V = build_irrep(preset("B2"), (1, 1))
    for i in range(2):
        assert la.is_zero(V.e(i, V.top))


def test_truncation_raises_out_of_depth():
    V = build_irrep(new_cartan_datum(HYPERBOLIC), (1, 0), depth=2)
    deepest = [mu for mu in V.weights() if V.height(mu) == 2][0]
    with pytest.raises(OutOfDepth):
        V.f(0, deepest)


def test_hyperbolic_dimensions_match_contravariant_form():
    cd = new_cartan_datum(HYPERBOLIC)
    V = build_irrep(cd, (1, 0), depth=4)
    a = [list(r) for r in cd.matrix]
    for n1, n2 in itertools.product(range(5), repeat=2):
        if n1 + n2 > 4:
            continue
        mu = Weight((1, 0)) - cd.simple_root(0) * n1 - cd.simple_root(1) * n2
        assert dimension_at(V, mu) == contravariant_rank(a, (1, 0), (n1, n2)), (n1, n2)


def test_hyperbolic_relations_on_retained_blocks():
    V = build_irrep(new_cartan_datum(HYPERBOLIC), (1, 0), depth=4)
    report = check_relations(V)
    assert report.ok and report.skipped


def test_rejects_non_dominant():
    with pytest.raises(NotDominant):
        build_irrep(preset("A2"), (1, -1))


def test_to_json_lists_words():
    V = build_irrep(preset("A1"), (1,))
    data = V.to_json()
    assert data["blocks"][1]["words"] == [[0]]


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_small_modules_satisfy_relations(name):
    cd = preset(name)
    for lam in itertools.product(range(2), repeat=cd.rank):
        V = build_irrep(cd, lam)
        assert V.total_dimension() == weyl_dimension([list(r) for r in cd.matrix], lam)
        assert check_relations(V).ok


def test_broken_module_fails_relations():
    V = build_irrep(preset("A2"), (1, 1))
    mu = V.weights()[1]
    V._e_cache[(0, mu)] = la.scale(V.e(0, mu), qpow(1, V.datum.k))
    assert not check_relations(V).ok
