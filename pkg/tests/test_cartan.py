import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qkm.cartan import PRESETS, Weight, new_cartan_datum, parse_datum, preset
from qkm.errors import NotGCM, NotSymmetrizable, RankMismatch, SingularCartanMatrix
from qkm.qfield import qpow

from oracles import symmetrizers, weight_form

HYPERBOLIC = [[2, -3], [-3, 2]]


def det(a):
    import sympy
    return abs(int(sympy.Matrix(a).det()))


def test_rank_one():
    cd = preset("A1")
    w = cd.fundamental_weight(0)
    assert cd.symmetrizers == (1,)
    assert cd.bilinear(cd.simple_root(0), cd.simple_root(0)) == 2
    assert cd.bilinear(w, w) == Fraction(1, 2)
    assert cd.k == 4


def test_a2_gram():
    cd = preset("A2")
    w1, w2 = cd.fundamental_weight(0), cd.fundamental_weight(1)
    assert cd.symmetrizers == (1, 1)
    assert cd.bilinear(w1, w1) == Fraction(2, 3)
    assert cd.bilinear(w1, w2) == Fraction(1, 3)
    assert cd.k == 6


def test_g2_symmetrizers_match_search():
    cd = preset("G2")
    assert cd.symmetrizers == symmetrizers(PRESETS["G2"]) == (3, 1)


def test_hyperbolic_accepted():
    cd = new_cartan_datum(HYPERBOLIC)
    assert cd.symmetrizers == (1, 1)
    assert not cd.finite_type


def test_rho_pairs_to_symmetrizers():
    for name in ("A1", "A2", "G2", "B2"):
        cd = preset(name)
        assert cd.rho() == Weight((1,) * cd.rank)
        for i in range(cd.rank):
            assert cd.bilinear(cd.simple_root(i), cd.rho()) == cd.symmetrizers[i]


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_root_and_weight_pairings(name):
    cd = preset(name)
    a, d = cd.matrix, cd.symmetrizers
    for i in range(cd.rank):
        for j in range(cd.rank):
            assert cd.bilinear(cd.simple_root(i), cd.simple_root(j)) == d[i] * a[i][j]
            assert cd.bilinear(cd.fundamental_weight(i), cd.simple_root(j)) == (d[j] if i == j else 0)
            assert (cd.k * cd.form_gram[i][j]).denominator == 1


@pytest.mark.parametrize("name", sorted(PRESETS) + ["hyperbolic"])
def test_bilinear_symmetric_and_matches_oracle(name):
    cd = new_cartan_datum(HYPERBOLIC) if name == "hyperbolic" else preset(name)
    a = [list(r) for r in cd.matrix]
    rng = random.Random(name)
    for _ in range(100):
        x = Weight(tuple(rng.randint(-5, 5) for _ in range(cd.rank)))
        y = Weight(tuple(rng.randint(-5, 5) for _ in range(cd.rank)))
        assert cd.bilinear(x, y) == cd.bilinear(y, x)
    for _ in range(10):
        x = [rng.randint(-4, 4) for _ in range(cd.rank)]
        y = [rng.randint(-4, 4) for _ in range(cd.rank)]
        assert cd.bilinear(Weight(tuple(x)), Weight(tuple(y))) == weight_form(a, cd.symmetrizers, x, y)
    assert cd.bilinear(Weight(tuple(x)), cd.zero_weight()) == 0


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_theta_exponents_in_lattice(name):
    cd = preset(name)
    rng = random.Random(1)
    for _ in range(50):
        lam = Weight(tuple(rng.randint(0, 6) for _ in range(cd.rank)))
        qpow(cd.theta_exponent(lam), cd.k)


def test_k_against_lattice_index():
    # the lcm definition divides twice the index of the root lattice; they differ on B2 and C2
    for name in PRESETS:
        cd = preset(name)
        index_k = 2 * det([list(r) for r in cd.matrix])
        assert index_k % cd.k == 0
        if name in ("A1", "A2", "A3", "G2"):
            assert cd.k == index_k
    assert preset("B2").k == 2 and preset("C2").k == 2


@pytest.mark.parametrize("bad,err", [
    ([[2, 1], [-1, 2]], NotGCM),
    ([[2, -1], [0, 2]], NotGCM),
    ([[3]], NotGCM),
    ([[2, -2], [-2, 2]], SingularCartanMatrix),
    ([[2, -1, -1], [-1, 2, -1], [-2, -1, 2]], NotSymmetrizable),
    ([[2, -1]], NotGCM),
])
def test_rejections(bad, err):
    with pytest.raises(err):
        new_cartan_datum(bad)


def test_rank_mismatch():
    cd = preset("A2")
    with pytest.raises(RankMismatch):
        cd.weight((1,))


def test_parse_datum():
    assert parse_datum("A2") == preset("A2")
    assert parse_datum("[[2,-3],[-3,2]]").matrix == ((2, -3), (-3, 2))
    assert parse_datum(HYPERBOLIC).symmetrizers == (1, 1)
    with pytest.raises(NotGCM):
        parse_datum("E9")


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_weight_arithmetic(x, y):
    a, b = Weight(tuple(x)), Weight(tuple(y))
    assert (a + b) - b == a
    assert -(-a) == a
    assert a * 2 == a + a
