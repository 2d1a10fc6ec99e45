import pytest

from qkm.cartan import new_cartan_datum, preset
from qkm.irrep import build_irrep
from qkm.qfield import QScalar, from_terms, qpow
from qkm.verify import ALL_CHECKS, choice_scalars, verify_suite


def test_choice_pool():
    assert choice_scalars(4) == [qpow(1, 4), qpow(3, 4), QScalar(2, 4), from_terms({0: 1, 2: 1}, 4)]


def test_a1_triple_all_checks():
    cd = preset("A1")
    V = build_irrep(cd, (1,))
    report = verify_suite(V, V, V)
    assert report.ok
    for check in ALL_CHECKS:
        assert report.passed(check), check


def test_hyperbolic_checks_on_retained_blocks():
    cd = new_cartan_datum([[2, -3], [-3, 2]])
    V = build_irrep(cd, (1, 0), depth=4)
    report = verify_suite(V, V, checks=("intertwining", "oracle", "find_highest"))
    assert report.ok
    assert report.passed("intertwining") and report.passed("oracle")
    assert any(r.check == "oracle" for r in report.skipped)


def test_report_json_fields():
    cd = preset("A1")
    V = build_irrep(cd, (1,))
    report = verify_suite(V, V, checks=("oracle",), instance="a1")
    rows = report.to_json()
    assert rows and set(rows[0]) == {"check", "instance", "block", "status", "witness"}
    assert rows[0]["instance"] == "a1"


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_choice_independence_seeds(seed):
    cd = preset("A2")
    V, W = build_irrep(cd, (1, 0)), build_irrep(cd, (1, 0))
    report = verify_suite(V, W, checks=("choice_independence",), seed=seed)
    assert report.passed("choice_independence")
