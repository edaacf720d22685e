import pytest

from selfclose import abelian as ab
from selfclose import blocks as bl
from selfclose import oracle
from selfclose import spaces as sp
from selfclose.errors import InsufficientData, InsufficientTable, PreconditionViolation

G = ab.parse_group
Z = ab.Z


def hom(a, b, m):
    return ab.GroupHom(G(a) if isinstance(a, str) else a, G(b) if isinstance(b, str) else b, m)


def swap_blocks(A):
    return bl.Blocks(ab.zero(A, A), ab.identity(A), ab.identity(A), ab.zero(A, A))


# --- assembly and predicates ---------------------------------------------

def test_assemble_identity_and_swap():
    X = sp.moore("Z/2", 3)
    ident = bl.BlockEndo.identity(X, X, 3)
    W = sp.wedge(X, X)
    assert bl.assemble(ident) == bl.GradedEndo.identity(W, 3)
    A = G("Z/2")
    diag = bl.Blocks.diagonal(ab.identity(A), ab.identity(A))
    assert bl.assemble_blocks(diag) == ab.identity(G("Z/2+Z/2"))
    swap = bl.assemble_blocks(swap_blocks(A))
    assert swap == ab.endo(G("Z/2+Z/2"), [[0, 1], [1, 0]])
    assert ab.is_isomorphism(swap)


def test_split_inverts_assemble():
    A, B = G("Z/2"), G("Z/4")
    for f in ab.enumerate_endos(ab.direct_sum(A, B).group):
        assert bl.assemble_blocks(bl.split_blocks(f, A, B)) == f


def test_k_equivalence_examples():
    M4 = sp.moore("Z/4", 3)
    assert bl.is_k_equivalence(bl.GradedEndo.identity(M4, 5), 5)
    two = bl.GradedEndo.of(M4, 3, {3: ab.scalar(G("Z/4"), 2)})
    assert not bl.is_k_equivalence(two, 3)
    X = sp.moore("Z/2", 3)
    swap = bl.BlockEndo.of(X, X, 3, {3: swap_blocks(G("Z/2"))})
    assert bl.is_k_equivalence(bl.assemble(swap), 3)
    with pytest.raises(InsufficientData):
        bl.is_k_equivalence(two, 4)


def test_k_reducible_examples():
    X = sp.moore("Z/2", 3)
    assert bl.is_k_reducible(bl.BlockEndo.identity(X, X, 3), 3)
    swap = bl.BlockEndo.of(X, X, 3, {3: swap_blocks(G("Z/2"))})
    assert not bl.is_k_reducible(swap, 3)
    A = G("Z/2")
    half = bl.BlockEndo.of(X, X, 3, {3: bl.Blocks.diagonal(ab.identity(A), ab.zero(A, A))})
    assert not bl.is_k_reducible(half, 3)


def test_block_shape_validation():
    with pytest.raises(PreconditionViolation):
        bl.Blocks(ab.identity(G("Z/2")), ab.zero(G("Z/3"), G("Z/2")), ab.zero(G("Z/2"), G("Z/4")), ab.identity(G("Z/4")))
    X = sp.moore("Z/2", 3)
    with pytest.raises(PreconditionViolation):
        bl.BlockEndo.of(X, X, 3, {3: bl.Blocks.diagonal(ab.identity(G("Z/4")), ab.identity(G("Z/4")))})


# --- Schur complement ----------------------------------------------------

def test_schur_examples():
    b = bl.Blocks(hom(Z, Z, [[1]]), hom(Z, Z, [[1]]), hom(Z, Z, [[0]]), hom(Z, Z, [[1]]))
    assert bl.schur_complement(b) == ab.identity(Z)
    A = G("Z/4")
    b = bl.Blocks(ab.identity(A), ab.zero(A, A), ab.identity(A), ab.identity(A))
    assert bl.schur_complement(b) == ab.identity(A)
    b = bl.Blocks(hom(Z, Z, [[1]]), hom(Z, Z, [[2]]), hom(Z, Z, [[1]]), hom(Z, Z, [[3]]))
    s = bl.schur_complement(b)
    # 3 - 1*1*2 = 1, matching det [[1,2],[1,3]] = 1
    assert s == ab.identity(Z) and ab.determinant([[1, 2], [1, 3]]) == 1
    with pytest.raises(PreconditionViolation):
        bl.schur_complement(bl.Blocks.diagonal(ab.scalar(A, 2), ab.identity(A)))


SCHUR_PAIRS = [("Z/2", "Z/2"), ("Z/2", "Z/4"), ("Z/4", "Z/4"), ("Z/3", "Z/3"), ("Z/2", "Z/8"), ("Z/2+Z/2", "Z/4"), ("Z/2", "Z/2+Z/2")]


@pytest.mark.parametrize("a,b", SCHUR_PAIRS)
def test_schur_property_exhaustive(a, b):
    A, B = G(a), G(b)
    for f in ab.enumerate_endos(ab.direct_sum(A, B).group):
        if not ab.is_isomorphism(f):
            continue
        blk = bl.split_blocks(f, A, B)
        if ab.is_isomorphism(blk.XX):
            assert ab.is_isomorphism(bl.schur_complement(blk))


# --- criteria ------------------------------------------------------------

def test_hom_vanishing_examples():
    assert bl.criterion_hom_vanishing(sp.moore("Z/2", 3), sp.moore("Z/2", 5), 5).fires
    assert not bl.criterion_hom_vanishing(sp.moore("Z/2", 4), sp.moore("Z/2", 4), 4).fires
    assert bl.criterion_hom_vanishing(sp.moore("Z/4", 3), sp.moore("Z/9", 3), 3).fires


def test_cohom_vanishing_examples():
    assert bl.criterion_cohom_vanishing(sp.complex_projective(3), sp.quaternionic_projective(2), 8).fires
    assert not bl.criterion_cohom_vanishing(sp.sphere(2), sp.sphere(2), 2).fires
    assert bl.criterion_cohom_vanishing(sp.moore("Z/2", 3), sp.sphere(4), 4).fires


def test_cohom_vanishing_sees_top_torsion():
    # all H^i with i <= 3 vanish, but the torsion of H_3 sits in H^4 on both sides
    rep = bl.criterion_cohom_vanishing(sp.moore("Z/2", 3), sp.moore("Z/2", 3), 3)
    assert not rep.fires
    assert rep.per_degree[-1][0] == 4


def test_no_common_factor_examples():
    assert bl.criterion_no_common_factor(sp.moore("Z/2", 3), sp.moore("Z/4", 3), 3).fires
    assert not bl.criterion_no_common_factor(sp.moore("Z/2", 3), sp.moore("Z/2", 3), 3).fires
    assert not bl.criterion_no_common_factor(sp.moore("Z/3+Z/4", 3), sp.moore("Z/5+Z/6", 3), 3).fires


def test_endos_through_all_nilpotent_examples():
    assert bl.endos_through_all_nilpotent(G("Z/2+Z/3"), G("Z/4+Z/9")) is True
    assert bl.endos_through_all_nilpotent(G("Z/2"), G("Z/2")) is False
    assert bl.endos_through_all_nilpotent(G("Z/2+Z/3"), Z) is True
    assert bl.endos_through_all_nilpotent(G("Z/4"), G("Z/4"), budget=1) is None


@pytest.mark.parametrize("h,g", [("Z/2+Z/3", "Z/4"), ("Z/2+Z/3", "Z/4+Z/9"), ("Z/5", "Z/25"), ("Z/4", "Z/2+Z/4"), ("Z/9", "Z/3+Z/3")])
def test_endos_through_all_nilpotent_matches_oracle(h, g):
    rep = oracle.verify_coprime_nilpotent(h, g)
    assert bl.endos_through_all_nilpotent(G(h), G(g)) is rep.passed


def test_homologically_distant_examples():
    K = sp.eilenberg_maclane(G("Z/4"), 3)
    Y = sp.moore("Z/2+Z/3", 3)
    assert bl.certify_homologically_distant(K, Y, 3).certified
    assert not bl.certify_homologically_distant(sp.moore("Z/2", 3), sp.moore("Z/2", 3), 3).certified
    assert bl.certify_homologically_distant(sp.moore("Z/2", 3), sp.moore("Z/3", 3), 3).certified


# --- the decider ---------------------------------------------------------

def fired(v):
    return {c.criterion for c in v.criteria_fired}


@pytest.mark.parametrize("m,n,k", [(2, 1, 4), (3, 2, 8), (1, 1, 6)])
def test_projective_wedges_reducible(m, n, k):
    v = bl.decide_k_reducibility(sp.complex_projective(m), sp.quaternionic_projective(n), k)
    assert v.outcome is bl.Outcome.REDUCIBLE


def test_cp_hp_uses_cohomology_where_needed():
    v = bl.decide_k_reducibility(sp.complex_projective(2), sp.quaternionic_projective(1), 4)
    assert "cohom-vanishing" in fired(v)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_swap_witness(q, n):
    X = sp.moore(f"Z/{q}", n)
    v = bl.decide_k_reducibility(X, X, n)
    assert v.outcome is bl.Outcome.ALGEBRAIC_COUNTEREXAMPLE
    blk = v.witness.at(v.witness_degree)
    assert ab.is_isomorphism(bl.assemble_blocks(blk))
    assert not (ab.is_isomorphism(blk.XX) and ab.is_isomorphism(blk.YY))
    assert "continuous" in v.note


def test_eilenberg_maclane_pairs_reducible():
    X = sp.eilenberg_maclane(G("Z/2"), 3)
    Y = sp.eilenberg_maclane(G("Z/4"), 5)
    v = bl.decide_k_reducibility(X, Y, 5)
    assert v.outcome is bl.Outcome.REDUCIBLE
    assert "atomic-distinct-closeness" in fired(v)


def test_missing_table_raises():
    X = sp.eilenberg_maclane(G("Z/6"), 3)
    with pytest.raises(InsufficientTable):
        bl.decide_k_reducibility(X, sp.sphere(5), 5)


def test_unknown_when_budget_exhausted():
    X = sp.moore("Z/8", 3)
    v = bl.decide_k_reducibility(X, X, 3, budget=10)
    assert v.outcome is bl.Outcome.UNKNOWN and v.undecided_degrees == (3,)


def test_census_certifies_when_no_cheap_rule():
    # Z/2+Z/4 vs Z/4: hom both ways, common summand Z/4, yet every automorphism
    # of the sum is tested directly
    v = bl.decide_k_reducibility(sp.moore("Z/2+Z/4", 3), sp.moore("Z/4", 3), 3)
    assert v.outcome in (bl.Outcome.REDUCIBLE, bl.Outcome.ALGEBRAIC_COUNTEREXAMPLE)
    if v.outcome is bl.Outcome.ALGEBRAIC_COUNTEREXAMPLE:
        blk = v.witness.at(3)
        assert ab.is_isomorphism(bl.assemble_blocks(blk))


def test_reducible_verdicts_match_oracle_census():
    X, Y = sp.moore("Z/4", 3), sp.moore("Z/9", 3)
    assert bl.decide_k_reducibility(X, Y, 3).outcome is bl.Outcome.REDUCIBLE
    assert oracle.verify_hom_vanishing(X, Y, 3).passed


def test_triangular_blocks_exhaustive():
    # Hom(Z/2, Z/3) = 0 both ways: invertibility is equivalent to both diagonals invertible
    A, B = G("Z/2"), G("Z/3")
    for f in ab.enumerate_endos(ab.direct_sum(A, B).group):
        blk = bl.split_blocks(f, A, B)
        assert ab.is_isomorphism(f) == (ab.is_isomorphism(blk.XX) and ab.is_isomorphism(blk.YY))


# --- dichotomy and per-map checks ----------------------------------------

def test_dichotomy_examples():
    X = sp.wedge(sp.moore("Z/2", 2), sp.moore("Z/4", 3))
    assert bl.check_graded_dichotomy(bl.GradedEndo.identity(X, 3), 3) is bl.Dichotomy.AUTO
    zero = bl.GradedEndo.of(X, 3, {2: ab.zero(G("Z/2"), G("Z/2")), 3: ab.zero(G("Z/4"), G("Z/4"))})
    assert bl.check_graded_dichotomy(zero, 3) is bl.Dichotomy.NILPOTENT
    mixed = bl.GradedEndo.of(X, 3, {2: ab.zero(G("Z/2"), G("Z/2")), 3: ab.identity(G("Z/4"))})
    assert bl.check_graded_dichotomy(mixed, 3) is bl.Dichotomy.NEITHER


def test_per_map_radical_check():
    X, Y = sp.moore("Z/2", 3), sp.moore("Z/4", 3)
    A, B = G("Z/2"), G("Z/4")
    blk = bl.Blocks(ab.identity(A), hom(B, A, [[1]]), hom(A, B, [[2]]), ab.identity(B))
    b = bl.BlockEndo.of(X, Y, 3, {3: blk})
    assert ab.is_isomorphism(bl.assemble_blocks(blk))
    assert bl.reducible_by_radical(b, 3, xx_is_automorphism=True) is True
    with pytest.raises(PreconditionViolation):
        bl.reducible_by_radical(b, 3, xx_is_automorphism=False)


def test_per_map_commutative_check():
    X, Y = sp.moore("Z/2", 3), sp.moore("Z/3", 3)
    b = bl.BlockEndo.identity(X, Y, 3)
    assert bl.reducible_by_commutative_end(b, 3, True, distant=True) is True
    assert bl.reducible_by_commutative_end(b, 3, True, distant=False) is None
    A = G("Z/2")
    bad = bl.BlockEndo.of(X, Y, 3, {3: bl.Blocks.diagonal(ab.zero(A, A), ab.identity(G("Z/3")))})
    with pytest.raises(PreconditionViolation):
        bl.reducible_by_commutative_end(bad, 3, True, distant=True)
