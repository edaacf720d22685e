import pytest

from selfclose import oracle
from selfclose import spaces as sp
from selfclose.errors import SuiteRefused


def test_cyclics_arithmetic():
    C = oracle.Cyclics((1, 4, 2))
    assert C.moduli == (4, 2) and C.order == 8
    x = (3, 1)
    assert C.add(x, x) == (2, 0) and C.scale(4, x) == C.zero
    C, free = oracle.as_cyclics("Z/2+Z/3+Z")
    assert C.moduli == (2, 3) and free == 1


def test_hom_counts():
    Z2, Z4 = oracle.Cyclics((2,)), oracle.Cyclics((4,))
    assert len(list(oracle.maps(Z2, Z4))) == 2 and oracle.candidate_count(Z2, Z4) == 4
    assert len(list(oracle.maps(Z4, Z2))) == 2
    assert len(list(oracle.maps(Z2 + Z4, Z2 + Z4))) == 32


def test_maps_compose_and_invert():
    C = oracle.Cyclics((2, 4))
    for f in oracle.maps(C, C):
        if f.is_bijective:
            assert f.then(f.inverse()) == oracle.identity_map(C)


def test_hom_census():
    rep = oracle.verify_hom_census(12)
    assert rep.passed and rep.instances == 121
    empty = oracle.verify_hom_census(1)
    assert empty.passed and empty.instances == 0


def test_hom_vanishing_census():
    rep = oracle.verify_hom_vanishing(sp.moore("Z/4", 3), sp.moore("Z/9", 3), 3)
    assert rep.passed and rep.instances == 36 and rep.details["automorphisms"] == 12
    with pytest.raises(SuiteRefused):
        oracle.verify_hom_vanishing(sp.moore("Z/2", 3), sp.moore("Z/2", 3), 3)


def test_no_common_factor_census():
    rep = oracle.verify_no_common_factor("Z/2", "Z/4")
    assert rep.passed and rep.instances == 32
    assert rep.details == {"candidates": 64, "automorphisms": 8}
    rep = oracle.verify_no_common_factor("Z/4", "Z/9")
    assert rep.passed and rep.instances == 36 and rep.details["candidates"] == 1296
    with pytest.raises(SuiteRefused):
        oracle.verify_no_common_factor("Z/2", "Z/2")


def test_coprime_nilpotent():
    rep = oracle.verify_coprime_nilpotent("Z/2+Z/3", "Z/4+Z/9")
    assert rep.passed and rep.instances == 36
    control = oracle.verify_coprime_nilpotent("Z/2", "Z/2")
    assert control.outcome == oracle.COUNTEREXAMPLE and control.replay()
    assert oracle.verify_coprime_nilpotent("Z/5", "Z").instances == 1


def test_schur_small():
    rep = oracle.verify_schur("Z/4", "Z/4")
    assert rep.passed and rep.instances == 256 and rep.details["checked"] == 64


def test_end_commutative():
    assert oracle.verify_end_commutative(16).passed


def test_quasi_regular():
    rep = oracle.verify_quasi_regular_of_nilpotent(16)
    assert rep.passed and rep.instances == 4423


def test_nilpotent_decider_small():
    assert oracle.verify_nilpotent_decider(16).passed


def test_reports_are_stable():
    a = oracle.verify_no_common_factor("Z/2", "Z/4").as_dict()
    b = oracle.verify_no_common_factor("Z/2", "Z/4").as_dict()
    assert a == b and "runtime" not in a
