import json

import pytest

from selfclose import rings as rg
from selfclose import spaces as sp
from selfclose.errors import InfiniteSolutionSet, InvalidPresentation, UnsupportedModel

EIGHT = {
    ((1, 0), (0, 1)), ((-1, 0), (0, 1)), ((1, 0), (0, -1)), ((-1, 0), (0, -1)),
    ((0, 1), (1, 0)), ((0, -1), (1, 0)), ((0, 1), (-1, 0)), ((0, -1), (-1, 0)),
}


def images(model):
    return {s.images for s in rg.enumerate_degree_d_invertible_endos(model)}


@pytest.mark.parametrize("tag", ["CP", "HP"])
@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("join", ["+", "*"])
def test_eight_solutions(tag, n, join):
    model = rg.resolve_ring(f"{tag}:{n}{join}{tag}:{n}")
    assert images(model) == EIGHT
    assert rg.all_invertible_endos_are_ring_autos(model)


def test_solutions_are_closed_under_relations():
    model = rg.resolve_ring("CP:3+CP:3")
    for s in rg.enumerate_degree_d_invertible_endos(model):
        assert rg.is_ring_endo(model, s) and rg.is_ring_automorphism(model, s)


def test_enumeration_is_order_stable():
    model = rg.resolve_ring("HP:2+HP:2")
    a = [s.images for s in rg.enumerate_degree_d_invertible_endos(model)]
    b = [s.images for s in rg.enumerate_degree_d_invertible_endos(model)]
    assert a == b


def test_unequal_truncations_block_diagonal():
    sols = images(rg.resolve_ring("CP:2+CP:3"))
    assert sols == {((a, 0), (0, d)) for a in (1, -1) for d in (1, -1)}


def test_bottom_cell_family_is_infinite():
    with pytest.raises(InfiniteSolutionSet):
        rg.enumerate_degree_d_invertible_endos(rg.resolve_ring("CP:1+CP:1"))
    with pytest.raises(InfiniteSolutionSet):
        rg.enumerate_degree_d_invertible_endos(rg.resolve_ring("CP:1+CP:3"))
    # with cup product between the summands the n = 1 product is finite
    assert images(rg.resolve_ring("CP:1*CP:1")) == EIGHT


def test_single_ring():
    model = rg.RingModel((rg.TruncatedRing("a", 2, 4),))
    assert images(model) == {((1,),), ((-1,),)}
    assert rg.all_invertible_endos_are_ring_autos(model)


def test_prime_field_ring():
    F3 = rg.TruncatedRing("a", 2, 2, 3)
    model = rg.RingModel((F3, rg.TruncatedRing("b", 2, 2, 3)))
    sols = images(model)
    # brute force over F_3: f(a) = pa + qb, f(b) = ra + sb needs pr = qs = 0 and ps - qr a unit
    brute = {
        ((p, q), (r, s))
        for p in range(3) for q in range(3) for r in range(3) for s in range(3)
        if (p * r) % 3 == 0 and (q * s) % 3 == 0 and (p * s - q * r) % 3
    }
    assert {tuple(tuple(x % 3 for x in row) for row in sol) for sol in sols} == brute
    assert len(brute) == 8
    assert all(rg.is_ring_automorphism(model, rg.RingEndoSolution(s)) for s in sols)


def test_forced_trivial_examples():
    cp2, cp3 = rg.TruncatedRing("a", 2, 2), rg.TruncatedRing("b", 2, 3)
    assert rg.ring_hom_forced_trivial(cp2, cp3)[:2] == (True, "truncation-kills")
    forced, reason, witness = rg.ring_hom_forced_trivial(cp3, cp3)
    assert not forced and witness is not None
    hp = rg.TruncatedRing("b", 4, 2)
    assert rg.ring_hom_forced_trivial(cp2, hp)[:2] == (True, "degree-mismatch")


def test_forced_trivial_fields():
    f2 = rg.TruncatedRing("a", 2, 2, 2)
    f3 = rg.TruncatedRing("b", 2, 2, 3)
    zring = rg.TruncatedRing("c", 2, 2)
    assert rg.ring_hom_forced_trivial(f2, f3)[:2] == (True, "coefficient-mismatch")
    assert rg.ring_hom_forced_trivial(f2, zring)[:2] == (True, "coefficient-mismatch")
    small, big = rg.TruncatedRing("a", 2, 1, 5), rg.TruncatedRing("b", 2, 3, 5)
    assert rg.ring_hom_forced_trivial(small, big)[:2] == (True, "characteristic-divides")


def test_catalog_rings():
    assert rg.catalog_ring(sp.complex_projective(3)) == rg.TruncatedRing("a", 2, 3)
    assert rg.catalog_ring(sp.quaternionic_projective(2)) == rg.TruncatedRing("a", 4, 2)
    assert rg.catalog_ring(sp.sphere(5)) == rg.TruncatedRing("a", 5, 1)
    assert rg.catalog_ring(sp.moore("Z/2", 3)) is None


def test_ring_file(tmp_path):
    doc = {"summands": [{"gen": "x", "degree": 4, "trunc": 3, "coeff": "Z"}, {"gen": "y", "degree": 4, "trunc": 3}]}
    p = tmp_path / "r.json"
    p.write_text(json.dumps(doc))
    model = rg.resolve_ring(str(p))
    assert [s.gen for s in model.summands] == ["x", "y"]
    assert images(model) == EIGHT


def test_invalid_rings():
    with pytest.raises(InvalidPresentation):
        rg.TruncatedRing("a", 3, 2)
    with pytest.raises(InvalidPresentation):
        rg.TruncatedRing("a", 2, 2, 4)
    with pytest.raises(UnsupportedModel):
        rg.resolve_ring("CP:2+CP:2+CP:2")
    with pytest.raises(UnsupportedModel):
        rg.enumerate_degree_d_invertible_endos(rg.resolve_ring("CP:2+HP:2"))
    with pytest.raises(InvalidPresentation):
        rg.ring_from_dict({"summands": [{"gen": "a", "degree": 2, "trunc": 2, "coeff": "Q"}]})


def test_render():
    s = rg.RingEndoSolution(((0, -1), (1, 0)))
    assert s.render(("a", "b")) == "a -> -b, b -> a"
