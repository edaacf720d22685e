"""Graded endomorphisms of wedges in 2x2 block form and reducibility deciders.

A self-map ``f`` of ``X v Y`` acts on ``H_i(X) + H_i(Y)`` by a block matrix

    [ XX  XY ]
    [ YX  YY ]

and is *k-reducible* when both diagonal blocks are isomorphisms in every degree
``<= k``.  The deciders below certify reducibility for *all* such maps at once,
or exhibit an algebraic block matrix that assembles to an isomorphism with a
singular diagonal block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product as cartesian
from math import prod
from typing import Mapping

from .abelian import (
    FgAbelianGroup,
    GroupHom,
    compose,
    count_homs,
    direct_sum,
    enumerate_endos,
    enumerate_homs,
    has_common_direct_factor,
    identity,
    inverse,
    is_end_commutative,
    is_hom_trivial,
    is_isomorphism,
    is_nilpotent,
    is_radical,
    primary_decomposition,
    zero,
)
from .errors import InsufficientData, InsufficientTable, PreconditionViolation
from .rings import catalog_ring, ring_hom_forced_trivial
from .spaces import SpaceModel, wedge

DEFAULT_BUDGET = 10**6


# ---------------------------------------------------------------------------
# Graded maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedEndo:
    """Per-degree endomorphisms of ``H_i(space)`` for ``2 <= i <= cutoff``."""

    space: SpaceModel
    cutoff: int
    maps: tuple[tuple[int, GroupHom], ...]

    def __post_init__(self):
        maps = dict(self.maps)
        for i in range(2, self.cutoff + 1):
            G = self.space.group(i)
            f = maps.get(i)
            if f is None:
                if not G.is_trivial:
                    raise InsufficientData(f"no map given in degree {i}")
                continue
            if f.source != G or f.target != G:
                raise PreconditionViolation(f"degree {i} map is not an endomorphism of {G}")
        object.__setattr__(self, "maps", tuple(sorted((d, f) for d, f in maps.items() if d <= self.cutoff)))

    def at(self, degree: int) -> GroupHom:
        if degree > self.cutoff:
            raise InsufficientData(f"graded map only defined through degree {self.cutoff}")
        return dict(self.maps).get(degree) or identity(self.space.group(degree))

    @classmethod
    def of(cls, space: SpaceModel, cutoff: int, maps: Mapping[int, GroupHom]) -> GradedEndo:
        return cls(space, cutoff, tuple(maps.items()))

    @classmethod
    def identity(cls, space: SpaceModel, cutoff: int) -> GradedEndo:
        return cls.of(space, cutoff, {i: identity(space.group(i)) for i in range(2, cutoff + 1)})


@dataclass(frozen=True)
class Blocks:
    XX: GroupHom
    XY: GroupHom
    YX: GroupHom
    YY: GroupHom

    def __post_init__(self):
        A, B = self.XX.source, self.YY.source
        shapes = ((self.XX, A, A), (self.XY, B, A), (self.YX, A, B), (self.YY, B, B))
        if any(f.source != s or f.target != t for f, s, t in shapes):
            raise PreconditionViolation("block shapes do not match the summand groups")

    @classmethod
    def diagonal(cls, xx: GroupHom, yy: GroupHom) -> Blocks:
        A, B = xx.source, yy.source
        return cls(xx, zero(B, A), zero(A, B), yy)

    def as_lists(self) -> dict:
        return {k: [list(r) for r in getattr(self, k).matrix] for k in ("XX", "XY", "YX", "YY")}


@dataclass(frozen=True)
class BlockEndo:
    X: SpaceModel
    Y: SpaceModel
    cutoff: int
    blocks: tuple[tuple[int, Blocks], ...]

    def __post_init__(self):
        for i, b in self.blocks:
            if b.XX.source != self.X.group(i) or b.YY.source != self.Y.group(i):
                raise PreconditionViolation(f"degree {i} blocks do not match the homology of the summands")
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, key=lambda t: t[0])))

    def at(self, degree: int) -> Blocks:
        if degree > self.cutoff:
            raise InsufficientData(f"block map only defined through degree {self.cutoff}")
        found = dict(self.blocks).get(degree)
        if found is None:
            return Blocks.diagonal(identity(self.X.group(degree)), identity(self.Y.group(degree)))
        return found

    @classmethod
    def of(cls, X, Y, cutoff: int, blocks: Mapping[int, Blocks]) -> BlockEndo:
        return cls(X, Y, cutoff, tuple(blocks.items()))

    @classmethod
    def identity(cls, X, Y, cutoff: int) -> BlockEndo:
        return cls(X, Y, cutoff, ())


def assemble_blocks(b: Blocks) -> GroupHom:
    """The endomorphism of the canonical ``A + B`` with the given blocks."""
    ds = direct_sum(b.XX.source, b.YY.source)
    iA, iB, pA, pB = ds.inject_first, ds.inject_second, ds.project_first, ds.project_second
    parts = (
        compose(iA, compose(b.XX, pA)),
        compose(iA, compose(b.XY, pB)),
        compose(iB, compose(b.YX, pA)),
        compose(iB, compose(b.YY, pB)),
    )
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def split_blocks(f: GroupHom, A: FgAbelianGroup, B: FgAbelianGroup) -> Blocks:
    ds = direct_sum(A, B)
    if f.source != ds.group:
        raise PreconditionViolation("map does not act on the direct sum")
    pA, pB, iA, iB = ds.project_first, ds.project_second, ds.inject_first, ds.inject_second
    return Blocks(pA @ f @ iA, pA @ f @ iB, pB @ f @ iA, pB @ f @ iB)


def assemble(b: BlockEndo) -> GradedEndo:
    W = wedge(b.X, b.Y)
    maps = {}
    for i in range(2, b.cutoff + 1):
        maps[i] = assemble_blocks(b.at(i))
        if maps[i].source != W.group(i):
            raise PreconditionViolation(f"degree {i}: assembled map does not act on H_{i} of the wedge")
    return GradedEndo.of(W, b.cutoff, maps)


def is_k_equivalence(g: GradedEndo, k: int) -> bool:
    if g.cutoff < k:
        raise InsufficientData(f"graded map defined through degree {g.cutoff} < {k}")
    return all(is_isomorphism(g.at(i)) for i in range(2, k + 1))


def is_k_reducible(b: BlockEndo, k: int) -> bool:
    if b.cutoff < k:
        raise InsufficientData(f"block map defined through degree {b.cutoff} < {k}")
    return all(is_isomorphism(b.at(i).XX) and is_isomorphism(b.at(i).YY) for i in range(2, k + 1))


def schur_complement(b: BlockEndo | Blocks, degree: int | None = None) -> GroupHom:
    """``YY - YX o XX^{-1} o XY``; needs an invertible ``XX`` block."""
    blk = b.at(degree) if isinstance(b, BlockEndo) else b
    if not is_isomorphism(blk.XX):
        raise PreconditionViolation("XX block is not an isomorphism")
    return blk.YY - blk.YX @ inverse(blk.XX) @ blk.XY


class Dichotomy(str, Enum):
    AUTO = "AUTO"
    NILPOTENT = "NILPOTENT"
    NEITHER = "NEITHER"


def check_graded_dichotomy(g: GradedEndo, n: int) -> Dichotomy:
    if g.cutoff < n:
        raise InsufficientData(f"graded map defined through degree {g.cutoff} < {n}")
    degs = range(2, n + 1)
    if all(is_isomorphism(g.at(i)) for i in degs):
        return Dichotomy.AUTO
    if all(is_nilpotent(g.at(i)) for i in degs):
        return Dichotomy.NILPOTENT
    return Dichotomy.NEITHER


# ---------------------------------------------------------------------------
# Degreewise criteria
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeReport:
    criterion: str
    fires: bool
    per_degree: tuple[tuple[int, bool, str], ...]


def _groups(X: SpaceModel, Y: SpaceModel, i: int):
    return X.group(i), Y.group(i)


def criterion_hom_vanishing(X: SpaceModel, Y: SpaceModel, k: int) -> DegreeReport:
    rows = []
    for i in range(2, k + 1):
        A, B = _groups(X, Y, i)
        if is_hom_trivial(A, B):
            rows.append((i, True, "Hom(X,Y) = 0"))
        elif is_hom_trivial(B, A):
            rows.append((i, True, "Hom(Y,X) = 0"))
        else:
            rows.append((i, False, "both Hom groups nonzero"))
    return DegreeReport("hom-vanishing", all(r[1] for r in rows), tuple(rows))


def _cohomology_pair(X, Y, i):
    return X.cohomology(i), Y.cohomology(i)


def ring_direction_trivial(X: SpaceModel, Y: SpaceModel) -> tuple[str, str] | None:
    """A direction in which every cohomology ring map between catalog rings is zero."""
    rx, ry = catalog_ring(X), catalog_ring(Y)
    if rx is None or ry is None:
        return None
    forced, reason, _ = ring_hom_forced_trivial(rx, ry)
    if forced:
        return "H*(X) -> H*(Y)", reason
    forced, reason, _ = ring_hom_forced_trivial(ry, rx)
    if forced:
        return "H*(Y) -> H*(X)", reason
    return None


def criterion_cohom_vanishing(X: SpaceModel, Y: SpaceModel, k: int) -> DegreeReport:
    """Hom vanishing on cohomology, computed from homology by universal coefficients.

    When both summands carry catalog truncated polynomial rings, a direction in
    which every ring map is zero settles all degrees at once.
    """
    ring = ring_direction_trivial(X, Y)
    rows = []
    for i in range(2, k + 1):
        if ring is not None:
            rows.append((i, True, f"ring maps {ring[0]} vanish ({ring[1]})"))
            continue
        A, B = _cohomology_pair(X, Y, i)
        if is_hom_trivial(A, B):
            rows.append((i, True, "Hom(H^i X, H^i Y) = 0"))
        elif is_hom_trivial(B, A):
            rows.append((i, True, "Hom(H^i Y, H^i X) = 0"))
        else:
            rows.append((i, False, "both cohomology Hom groups nonzero"))
    # torsion of H_k reappears in H^{k+1}; without this row the test misses it
    if ring is None:
        A, B = X.group(k).torsion, Y.group(k).torsion
        if is_hom_trivial(A, B) or is_hom_trivial(B, A):
            rows.append((k + 1, True, "torsion of H_k: one Hom direction is zero"))
        else:
            rows.append((k + 1, False, "torsion of H_k maps both ways"))
    # finite generation of H_k of the wedge holds for every model here
    return DegreeReport("cohom-vanishing", all(r[1] for r in rows), tuple(rows))


def criterion_no_common_factor(X: SpaceModel, Y: SpaceModel, k: int) -> DegreeReport:
    rows = []
    for i in range(2, k + 1):
        A, B = _groups(X, Y, i)
        if not (A.is_finite and B.is_finite):
            rows.append((i, False, "infinite group"))
        elif has_common_direct_factor(A, B):
            rows.append((i, False, "common primary summand"))
        else:
            rows.append((i, True, "finite, no common primary summand"))
    return DegreeReport("no-common-factor", all(r[1] for r in rows), tuple(rows))


def _distinct_prime_cyclics(H: FgAbelianGroup) -> bool:
    rank, pairs = primary_decomposition(H)
    primes = [p for p, _ in pairs]
    return rank == 0 and len(primes) == len(set(primes))


def endos_through_all_nilpotent(H: FgAbelianGroup, G: FgAbelianGroup, budget: int = DEFAULT_BUDGET) -> bool | None:
    """Is every composite ``H -> G -> H`` nilpotent?

    Fast path: ``H`` a sum of cyclic groups of distinct prime-power orders
    ``p^r`` none of which is a primary summand of ``G``.  Free summands of
    ``G`` cannot help: the composite through them factors via ``Hom(Z/p^r, Z) = 0``.
    Otherwise exhaustive over ``Hom(H, G) x Hom(G, H)`` within ``budget``.
    """
    if H.is_trivial or G.is_trivial:
        return True
    if _distinct_prime_cyclics(H):
        _, pg = primary_decomposition(G)
        if not set(primary_decomposition(H)[1]) & set(pg):
            return True
    n1, n2 = count_homs(H, G), count_homs(G, H)
    if n1 is None or n2 is None or n1 * n2 > budget:
        return None
    there = list(enumerate_homs(H, G))
    back = list(enumerate_homs(G, H))
    seen = set()
    for g in back:
        for f in there:
            c = g @ f
            if c in seen:
                continue
            seen.add(c)
            if not is_nilpotent(c):
                return False
    return True


@dataclass(frozen=True)
class DistanceCertificate:
    certified: bool
    degrees: tuple[tuple[int, bool | None], ...]


def certify_homologically_distant(X: SpaceModel, Y: SpaceModel, n: int, budget: int = DEFAULT_BUDGET) -> DistanceCertificate:
    """Degreewise sufficient test: composites through the other summand are
    nilpotent in every degree ``<= n``, in both directions."""
    rows = []
    for i in range(2, n + 1):
        A, B = _groups(X, Y, i)
        one = endos_through_all_nilpotent(A, B, budget)
        two = endos_through_all_nilpotent(B, A, budget)
        verdict = True if (one and two) else (False if (one is False or two is False) else None)
        rows.append((i, verdict))
    return DistanceCertificate(all(v is True for _, v in rows), tuple(rows))


# ---------------------------------------------------------------------------
# Per-map checks
# ---------------------------------------------------------------------------

def _checked_block(b: BlockEndo, i: int) -> Blocks:
    blk = b.at(i)
    if not is_isomorphism(assemble_blocks(blk)):
        raise PreconditionViolation(f"the block matrix in degree {i} is not an isomorphism")
    if not is_isomorphism(blk.XX):
        raise PreconditionViolation(f"XX is not invertible in degree {i}")
    return blk


def reducible_by_radical(b: BlockEndo, k: int, xx_is_automorphism: bool, budget: int = 256) -> bool | None:
    """Per-map test: with ``XX`` invertible (asserted by the caller for the
    underlying self-map), ``YY`` is invertible wherever the composite
    ``YX o XX^{-1} o XY`` lies in the Jacobson radical of ``End(H_i Y)``.

    Returns ``True`` when every degree is settled this way, ``None`` otherwise.
    """
    if not xx_is_automorphism:
        raise PreconditionViolation("the radical argument needs XX to be an automorphism")
    for i in range(2, k + 1):
        blk = _checked_block(b, i)
        if blk.YY.source.is_trivial:
            continue
        c = blk.YX @ inverse(blk.XX) @ blk.XY
        if is_radical(c, budget) is not True:
            return None
    return True


def reducible_by_commutative_end(b: BlockEndo, k: int, xx_is_automorphism: bool, distant: bool) -> bool | None:
    """Per-map test: commutative ``End(H_i Y)`` plus homological distance makes
    the composite nilpotent after twisting by the inverse block, so ``YY`` is
    invertible."""
    if not xx_is_automorphism:
        raise PreconditionViolation("the commutative-ring argument needs XX to be an automorphism")
    if not distant:
        return None
    for i in range(2, k + 1):
        blk = _checked_block(b, i)
        if not is_end_commutative(blk.YY.source):
            return None
    return True


# ---------------------------------------------------------------------------
# Space-level decider
# ---------------------------------------------------------------------------

class Outcome(str, Enum):
    REDUCIBLE = "REDUCIBLE"
    UNKNOWN = "UNKNOWN"
    ALGEBRAIC_COUNTEREXAMPLE = "ALGEBRAIC_COUNTEREXAMPLE"


CITATIONS = {
    "trivial-summand": "a summand with zero homology makes the block matrix triangular",
    "hom-vanishing": "one off-diagonal Hom group vanishes, so block matrices are triangular",
    "no-common-factor": "finite groups without a common primary summand: automorphisms of the sum are diagonal-invertible",
    "homologically-distant": "composites through the other summand are nilpotent, so Id minus them is invertible",
    "exhaustive-census": "every invertible block matrix in this degree was enumerated",
    "cohom-vanishing": "one direction of cohomology maps vanishes (ring or universal-coefficient argument)",
    "atomic-nilpotent-factorization": "atomic summands with nilpotent factorizations in a shared nonzero degree",
    "atomic-distinct-closeness": "atomic summands with distinct self-closeness numbers",
}


@dataclass(frozen=True)
class FiredCriterion:
    criterion: str
    degrees: tuple[int, ...]
    citation: str


@dataclass(frozen=True)
class ReducibilityVerdict:
    outcome: Outcome
    k: int
    criteria_fired: tuple[FiredCriterion, ...] = ()
    witness: BlockEndo | None = None
    witness_degree: int | None = None
    note: str = ""
    undecided_degrees: tuple[int, ...] = field(default=())

    @property
    def is_reducible(self) -> bool:
        return self.outcome is Outcome.REDUCIBLE


_NON_TOPOLOGICAL = (
    "witness is an algebraic block matrix; whether a continuous self-map realizes it is not decided"
)


def _degree_cheap(A: FgAbelianGroup, B: FgAbelianGroup, budget: int) -> str | None:
    if A.is_trivial or B.is_trivial:
        return "trivial-summand"
    if is_hom_trivial(A, B) or is_hom_trivial(B, A):
        return "hom-vanishing"
    if A.is_finite and B.is_finite and not has_common_direct_factor(A, B):
        return "no-common-factor"
    one = endos_through_all_nilpotent(A, B, budget)
    if one is None:
        one = endos_through_all_nilpotent(B, A, budget)
    if one:
        return "homologically-distant"
    return None


def _known_group(S: SpaceModel, i: int) -> FgAbelianGroup | None:
    try:
        return S.group(i)
    except InsufficientTable:
        return None


def census_degree(A: FgAbelianGroup, B: FgAbelianGroup, budget: int = DEFAULT_BUDGET):
    """Search every block matrix on ``A + B`` for an invertible one with a
    singular diagonal block.

    Returns ``("certified", None)``, ``("counterexample", Blocks)`` or
    ``("undecided", reason)``.  Block order is lexicographic in
    ``(XX, XY, YX, YY)``, each enumerated row-major.
    """
    sizes = [count_homs(A, A), count_homs(B, A), count_homs(A, B), count_homs(B, B)]
    if any(s is None for s in sizes):
        return "undecided", "infinite Hom group"
    if prod(sizes) > budget:
        return "undecided", f"{prod(sizes)} block matrices exceed the budget {budget}"
    xx_all = list(enumerate_endos(A))
    xy_all = list(enumerate_homs(B, A))
    yx_all = list(enumerate_homs(A, B))
    yy_all = list(enumerate_endos(B))
    yy_iso = [is_isomorphism(f) for f in yy_all]
    for xx in xx_all:
        xx_ok = is_isomorphism(xx)
        for xy, yx in cartesian(xy_all, yx_all):
            for yy, yy_ok in zip(yy_all, yy_iso):
                if xx_ok and yy_ok:
                    continue
                blk = Blocks(xx, xy, yx, yy)
                if is_isomorphism(assemble_blocks(blk)):
                    return "counterexample", blk
    return "certified", None


def _atomic_value(S: SpaceModel) -> int | None:
    """Self-closeness number recorded for an atomic summand, if any."""
    from .closeness import recorded_value

    return recorded_value(S)


def _atomic_rules(X: SpaceModel, Y: SpaceModel, k: int, budget: int) -> FiredCriterion | None:
    cx, cy = X.atomic, Y.atomic
    if cx is None or cy is None:
        return None
    vx, vy = _atomic_value(X), _atomic_value(Y)
    if vx is not None and vy is not None and vx != vy and cx.covers(vx) and cy.covers(vy):
        m = max(vx, vy)
        # reducibility at m makes the diagonal blocks equivalences, hence for every k >= m
        if k >= m:
            return FiredCriterion("atomic-distinct-closeness", tuple(range(2, k + 1)), CITATIONS["atomic-distinct-closeness"])
    top = min(l for l in (cx.level, cy.level, k) if l is not None)
    if k > top:
        return None
    for i0 in range(2, k + 1):
        A, B = _known_group(X, i0), _known_group(Y, i0)
        if A is None or B is None or A.is_trivial or B.is_trivial:
            continue
        if endos_through_all_nilpotent(A, B, budget):
            return FiredCriterion("atomic-nilpotent-factorization", tuple(range(2, k + 1)), CITATIONS["atomic-nilpotent-factorization"])
    return None


def decide_k_reducibility(
    X: SpaceModel,
    Y: SpaceModel,
    k: int,
    budget: int = DEFAULT_BUDGET,
    *,
    use_census: bool = True,
) -> ReducibilityVerdict:
    """Decide whether every self-map of ``X v Y`` inducing isomorphisms through
    degree ``k`` is k-reducible.

    Order of work: degreewise criteria, then whole-space rules (cohomology
    rings, atomicity), then an exhaustive census of each remaining degree in
    ascending order.  A census counterexample is algebraic only.
    """
    fired: dict[str, list[int]] = {}
    open_degrees: list[int] = []
    missing: list[int] = []
    for i in range(2, k + 1):
        A, B = _known_group(X, i), _known_group(Y, i)
        if (A is not None and A.is_trivial) or (B is not None and B.is_trivial):
            fired.setdefault("trivial-summand", []).append(i)
            continue
        if A is None or B is None:
            missing.append(i)
            continue
        crit = _degree_cheap(A, B, budget)
        if crit:
            fired.setdefault(crit, []).append(i)
        else:
            open_degrees.append(i)

    def verdict(outcome, extra=(), **kw):
        crits = tuple(FiredCriterion(c, tuple(d), CITATIONS[c]) for c, d in fired.items()) + tuple(extra)
        return ReducibilityVerdict(outcome, k, crits, **kw)

    if not open_degrees and not missing:
        return verdict(Outcome.REDUCIBLE)

    whole: list[FiredCriterion] = []
    try:
        if not missing and criterion_cohom_vanishing(X, Y, k).fires:
            whole.append(FiredCriterion("cohom-vanishing", tuple(range(2, k + 1)), CITATIONS["cohom-vanishing"]))
    except InsufficientTable:
        pass
    if not whole:
        atomic = _atomic_rules(X, Y, k, budget)
        if atomic:
            whole.append(atomic)
    if whole:
        return verdict(Outcome.REDUCIBLE, whole)

    undecided = []
    if use_census:
        for i in open_degrees:
            A, B = X.group(i), Y.group(i)
            status, info = census_degree(A, B, budget)
            if status == "certified":
                fired.setdefault("exhaustive-census", []).append(i)
            elif status == "counterexample":
                witness = BlockEndo.of(X, Y, k, {i: info})
                return verdict(
                    Outcome.ALGEBRAIC_COUNTEREXAMPLE, witness=witness, witness_degree=i, note=_NON_TOPOLOGICAL
                )
            else:
                undecided.append(i)
    else:
        undecided = list(open_degrees)
    if not undecided and not missing:
        return verdict(Outcome.REDUCIBLE)
    if missing:
        raise InsufficientTable(
            f"homology of {X} v {Y} is not tabulated in degrees {missing} and no table-free rule applies"
        )
    return verdict(Outcome.UNKNOWN, undecided_degrees=tuple(undecided), note="no criterion settles these degrees")
