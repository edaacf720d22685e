import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfclose import abelian as ab
from selfclose import closeness as cl
from selfclose import spaces as sp
from selfclose.errors import InconsistentEvidence, UndefinedDimension

G = ab.parse_group


def exact(X):
    return cl.nsc(X).exact


@pytest.mark.parametrize(
    "X,v",
    [
        (sp.sphere(5), 5),
        (sp.moore("Z/4", 3), 3),
        (sp.eilenberg_maclane(G("Z/9"), 4), 4),
        (sp.complex_projective(5), 2),
        (sp.quaternionic_projective(3), 4),
    ],
)
def test_catalog_values(X, v):
    r = cl.nsc(X)
    assert r.exact == v and r.equality_rule.startswith("catalog-")


def test_suspended_real_projective_interval():
    r = cl.nsc(sp.suspended_real_projective(4))
    assert (r.lower, r.upper, r.exact) == (2, 4, None)


def test_bounds():
    r = cl.nsc_bounds(sp.wedge(sp.sphere(2), sp.sphere(5)))
    assert (r.lower, r.upper) == (2, 5)
    r = cl.nsc_bounds(sp.eilenberg_maclane(G("Z/2"), 3))
    assert r.upper is None
    with pytest.raises(UndefinedDimension):
        cl.nsc_bounds(sp.point())


def test_wedge_of_projective_spaces():
    r = cl.nsc(sp.wedge(sp.complex_projective(3), sp.quaternionic_projective(2)))
    assert r.exact == 4 and "wedge-reducible-equality" in r.rules


def test_wedge_of_equal_projective_spaces_by_rings():
    r = cl.nsc(sp.wedge(sp.complex_projective(3), sp.complex_projective(3)))
    assert r.exact == 2 and "equal-projective-wedge-ring" in r.rules
    r = cl.nsc(sp.product(sp.quaternionic_projective(2), sp.quaternionic_projective(2)))
    assert r.exact == 4 and "equal-projective-product-ring" in r.rules


@pytest.mark.parametrize("g", ["Z/4", "Z/3", "Z"])
@pytest.mark.parametrize("n", [2, 3])
def test_eilenberg_maclane_wedge_real_projective(g, n):
    X = sp.eilenberg_maclane(G(g), 2 * n)
    r = cl.nsc(sp.wedge(X, sp.suspended_real_projective(2 * n)))
    assert r.exact == 2 * n


def test_eilenberg_maclane_wedge_with_shared_two_torsion_is_open():
    r = cl.nsc(sp.wedge(sp.eilenberg_maclane(G("Z/6"), 4), sp.suspended_real_projective(4)))
    assert r.exact is None and r.lower == 4


def test_equal_moore_wedge_has_no_equality_rule():
    X = sp.moore("Z/2", 3)
    r = cl.nsc(sp.wedge(X, X))
    assert (r.lower, r.upper) == (3, 3)
    assert r.equality_rule is None


def test_atomic_wedge_distinct_values():
    X, Y = sp.moore("Z/2", 3), sp.moore("Z/3", 5)
    r = cl.nsc(sp.wedge(X, Y))
    assert r.exact == 5
    assert cl.nsc_atomic_wedge([X, Y]).exact == 5
    assert cl.nsc_atomic_wedge([X, X]) is None
    assert cl.nsc_atomic_wedge([X, sp.moore("Z/6", 4)]) is None


def test_atomic_rule_refuses_low_certificate():
    # certificate level n on a wedge whose closeness number is forced to 2n
    n = 3
    W = sp.wedge(sp.moore("Z/2", n), sp.moore("Z/9", 2 * n))
    W = dataclasses.replace(W, atomic=sp.AtomicCertificate(n, "user"))
    r = cl.nsc(W)
    assert r.exact == 2 * n
    assert "atomic-min-degree" not in r.rules
    assert cl.nsc_atomic(W, r) is None


def user_space(atomic, nsc=None, dimension=5):
    doc = {
        "name": "U",
        "dimension": dimension,
        "cutoff": None,
        "homology": {"3": {"rank": 0, "torsion": [2]}, "5": {"rank": 1, "torsion": []}},
        "atomic": atomic,
        "nsc": nsc,
    }
    return sp.space_from_dict(doc)


def test_atomic_rule_checked_and_assumed():
    checked = cl.nsc(user_space(5))
    assert checked.exact == 3
    ev = [e for e in checked.evidence if e.rule == "atomic-min-degree"][0]
    assert "assumed" not in ev.inputs
    assumed = cl.nsc(user_space(4))
    ev = [e for e in assumed.evidence if e.rule == "atomic-min-degree"][0]
    assert assumed.exact == 3 and "user-asserted certificate" in ev.inputs


def test_user_asserted_value_is_flagged():
    r = cl.nsc(user_space(None, nsc=4))
    assert r.exact == 4 and r.equality_rule == "user-asserted-value"


def test_inconsistent_evidence_raises():
    with pytest.raises(InconsistentEvidence):
        cl.nsc(user_space(None, nsc=7))
    with pytest.raises(InconsistentEvidence):
        cl.NscResult(2, 3).meet(cl.NscResult(4, 5))


def test_product_examples():
    assert exact(sp.product(sp.sphere(2), sp.sphere(3))) == 3
    assert exact(sp.product(sp.complex_projective(3), sp.complex_projective(3))) == 2


def test_smash_examples():
    assert exact(sp.smash(sp.sphere(2), sp.sphere(3))) == 5
    r = cl.nsc_smash_bounds(sp.sphere(2), sp.sphere(3))
    assert r.lower >= 4 and r.upper == 5
    assert cl.nsc_smash_bounds(sp.eilenberg_maclane(G("Z/2"), 3), sp.sphere(3)) is None


def test_suspension_examples():
    assert cl.nsc_suspension(sp.moore("Z/2", 3), 3).exact == 6
    assert cl.nsc_suspension(sp.sphere(2), 2).exact == 4
    # CP^2 is only 1-connected, so a triple suspension is outside the stable range
    r = cl.nsc_suspension(sp.complex_projective(2), 3)
    assert (r.lower, r.upper) == (5, 7) and "stable-suspension-shift" not in r.rules


def test_recorded_value():
    assert cl.recorded_value(sp.sphere(4)) == 4
    assert cl.recorded_value(sp.suspended_real_projective(4)) is None


def test_evidence_citations_are_descriptive():
    r = cl.nsc(sp.wedge(sp.complex_projective(2), sp.quaternionic_projective(1)))
    for e in r.evidence:
        assert e.citation == cl.RULES[e.rule]
        assert set(e.as_dict()) == {"rule", "citation", "inputs"}


CATALOG = [sp.sphere(n) for n in (2, 3, 4)] + [sp.moore(g, n) for g in ("Z/2", "Z/3") for n in (2, 3)] + [
    sp.complex_projective(2),
    sp.quaternionic_projective(1),
    sp.suspended_real_projective(2),
]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CATALOG), st.sampled_from(CATALOG))
def test_rules_only_narrow_the_bounds(X, Y):
    for S in (sp.wedge(X, Y), sp.product(X, Y)):
        b, r = cl.nsc_bounds(S), cl.nsc(S)
        assert b.lower <= r.lower
        assert r.upper is not None and r.upper <= b.upper
        assert r.lower >= max(cl.nsc(X).lower, cl.nsc(Y).lower)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CATALOG), st.sampled_from(CATALOG))
def test_wedge_is_symmetric(X, Y):
    a, b = cl.nsc(sp.wedge(X, Y)), cl.nsc(sp.wedge(Y, X))
    assert (a.lower, a.upper) == (b.lower, b.upper)
