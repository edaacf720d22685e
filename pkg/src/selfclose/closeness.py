"""Homology self-closeness numbers: exact values or honest intervals.

Every rule returns an :class:`NscResult` carrying an evidence trail; results
for the same space are intersected, and an empty intersection is an error
rather than something to smooth over.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .blocks import DEFAULT_BUDGET, Outcome, ReducibilityVerdict, decide_k_reducibility
from .errors import AlgebraError, InconsistentEvidence, InfiniteSolutionSet, UndefinedDimension
from .rings import all_invertible_endos_are_ring_autos, wedge_ring
from .spaces import (
    SpaceModel,
    connectivity,
    homology_dimension,
    pair_connectivity_product_wedge,
    smash,
    suspension,
    wedge,
)

RULES = {
    "connectivity-dimension-bounds": "conn(X) + 1 <= N(X) <= top nonzero homology degree",
    "catalog-sphere": "spheres: N(S^n) = n",
    "catalog-moore": "Moore spaces: N(M(G,n)) = n",
    "catalog-eilenberg-maclane": "Eilenberg-MacLane spaces: N(K(G,n)) = n",
    "catalog-complex-projective": "complex projective spaces: N = 2",
    "catalog-quaternionic-projective": "quaternionic projective spaces: N = 4",
    "catalog-suspended-real-projective": "suspended RP^2n has no homology above 2n, so N <= 2n",
    "wedge-lower-max": "N(X v Y) >= max(N(X), N(Y))",
    "wedge-reducible-equality": "k-reducibility at m = max(N(X), N(Y)) gives N(X v Y) = m",
    "equal-projective-wedge-ring": "every degree-d invertible ring endomorphism of FP^n v FP^n is a ring automorphism",
    "product-lower-max": "N(X x Y) >= max(N(X), N(Y))",
    "product-reducible-equality": "reducibility of the wedge transfers to the product when conn(X x Y, X v Y) >= dim(X v Y)",
    "equal-projective-product-ring": "every degree-d invertible ring endomorphism of FP^n x FP^n is a ring automorphism",
    "smash-shift": "N(X v Y) + 1 <= N(X ^ Y) <= dim X + dim Y when conn(X x Y, X v Y) >= dim(X v Y)",
    "stable-suspension-shift": "N(S^n X) = N(X) + n for (n-1)-connected X with dim X <= 2(n-1)",
    "atomic-min-degree": "an n-atomic X with N(X) <= n has N(X) = lowest nonzero homology degree",
    "atomic-wedge-distinct": "a wedge of atomic summands with distinct closeness numbers has N = max",
    "user-asserted-value": "value supplied with the space definition",
}

BOUND_RULES = frozenset(
    {"connectivity-dimension-bounds", "catalog-suspended-real-projective", "wedge-lower-max", "product-lower-max", "smash-shift"}
)


@dataclass(frozen=True)
class Evidence:
    rule: str
    citation: str
    inputs: str

    def as_dict(self) -> dict:
        return {"rule": self.rule, "citation": self.citation, "inputs": self.inputs}


def _ev(rule: str, inputs: str) -> Evidence:
    return Evidence(rule, RULES[rule], inputs)


@dataclass(frozen=True)
class NscResult:
    lower: int
    upper: int | None
    evidence: tuple[Evidence, ...] = ()

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise InconsistentEvidence(f"empty interval [{self.lower}, {self.upper}]")

    @property
    def exact(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    def meet(self, other: NscResult | None) -> NscResult:
        """Intersect two intervals, concatenating evidence."""
        if other is None:
            return self
        lo = max(self.lower, other.lower)
        ups = [u for u in (self.upper, other.upper) if u is not None]
        up = min(ups) if ups else None
        if up is not None and lo > up:
            raise InconsistentEvidence(
                f"rules disagree: [{self.lower}, {self.upper}] vs [{other.lower}, {other.upper}]"
            )
        ev = self.evidence + tuple(e for e in other.evidence if e not in self.evidence)
        return NscResult(lo, up, ev)

    def shifted(self, n: int, evidence: Evidence) -> NscResult:
        return NscResult(self.lower + n, None if self.upper is None else self.upper + n, (evidence,))

    @property
    def equality_rule(self) -> str | None:
        """First rule asserting a single value, as opposed to bounds that happen to meet."""
        for e in self.evidence:
            if e.rule not in BOUND_RULES:
                return e.rule
        return None

    @property
    def rules(self) -> tuple[str, ...]:
        return tuple(e.rule for e in self.evidence)

    def __str__(self):
        if self.exact is not None:
            return f"{self.exact}"
        return f"[{self.lower}, {'inf' if self.upper is None else self.upper}]"


def _exactly(v: int, rule: str, inputs: str) -> NscResult:
    return NscResult(v, v, (_ev(rule, inputs),))


# ---------------------------------------------------------------------------
# Single spaces
# ---------------------------------------------------------------------------

def nsc_bounds(X: SpaceModel) -> NscResult:
    if not len(X.homology) and X.cutoff is None:
        raise UndefinedDimension(f"{X.name} has no homology; its closeness number is undefined here")
    lo = connectivity(X) + 1
    up = homology_dimension(X) if X.cutoff is None else None
    return NscResult(lo, up, (_ev("connectivity-dimension-bounds", f"{X.name}: conn+1={lo}, H-dim={up}"),))


def nsc_catalog(X: SpaceModel) -> NscResult:
    base = nsc_bounds(X)
    kind = X.kind[0] if X.kind else None
    if kind == "S":
        return base.meet(_exactly(X.kind[1], "catalog-sphere", X.name))
    if kind == "M":
        return base.meet(_exactly(X.kind[2], "catalog-moore", X.name))
    if kind == "K":
        return base.meet(_exactly(X.kind[2], "catalog-eilenberg-maclane", X.name))
    if kind == "CP":
        return base.meet(_exactly(2, "catalog-complex-projective", X.name))
    if kind == "HP":
        return base.meet(_exactly(4, "catalog-quaternionic-projective", X.name))
    if kind == "SRP":
        ev = _ev("catalog-suspended-real-projective", X.name)
        return base.meet(NscResult(2, X.kind[1], (ev,)))
    return base


def recorded_value(X: SpaceModel) -> int | None:
    """The exact closeness number the engine can justify for ``X``, if any."""
    try:
        return nsc(X).exact
    except AlgebraError:
        return None


def nsc_atomic(X: SpaceModel, known: NscResult | None = None) -> NscResult | None:
    """Lowest nonzero homology degree, for an atomic space whose closeness
    number does not exceed its certificate level.

    The level inequality is checked against ``known`` when possible; for
    user-asserted certificates it is otherwise assumed and the evidence says so.
    Returns ``None`` when the rule does not apply.
    """
    cert = X.atomic
    if cert is None or not len(X.homology):
        return None
    level = cert.level
    status = "level unbounded"
    if level is not None:
        if known is not None and known.lower > level:
            return None  # hypothesis refuted by a lower bound
        if known is not None and known.upper is not None and known.upper <= level:
            status = f"N <= {known.upper} <= level {level}"
        elif cert.provenance == "user":
            status = f"assumed N <= {level} (user-asserted certificate)"
        else:
            return None
    v = X.homology.degrees[0]
    return _exactly(v, "atomic-min-degree", f"{X.name}: certificate {cert.provenance}, {status}, lowest degree {v}")


# ---------------------------------------------------------------------------
# Wedges and products
# ---------------------------------------------------------------------------

def _determined_max(rx: NscResult, ry: NscResult) -> int | None:
    """``max(N(X), N(Y))`` when the two intervals pin it down."""
    lo = max(rx.lower, ry.lower)
    if rx.upper is None or ry.upper is None:
        return None
    return lo if lo == max(rx.upper, ry.upper) else None


def _same_projective(X: SpaceModel, Y: SpaceModel) -> int | None:
    if X.kind and Y.kind and X.kind[0] in ("CP", "HP") and X.kind[:2] == Y.kind[:2]:
        return 2 if X.kind[0] == "CP" else 4
    return None


def _ring_rule(X: SpaceModel, Y: SpaceModel, relation: str, rule: str) -> NscResult | None:
    d = _same_projective(X, Y)
    if d is None:
        return None
    model = wedge_ring(X, Y, relation)
    try:
        if not all_invertible_endos_are_ring_autos(model):
            return None
    except InfiniteSolutionSet:
        return None
    return _exactly(d, rule, f"{X.name}, {Y.name}: ring endomorphisms enumerated, all automorphisms")


def nsc_wedge(
    X: SpaceModel,
    Y: SpaceModel,
    verdict: ReducibilityVerdict | None = None,
    budget: int = DEFAULT_BUDGET,
) -> NscResult:
    rx, ry = nsc(X), nsc(Y)
    W = wedge(X, Y)
    lo = max(rx.lower, ry.lower)
    out = nsc_bounds(W).meet(NscResult(lo, None, (_ev("wedge-lower-max", f"max({rx}, {ry})"),)))
    out = out.meet(_ring_rule(X, Y, "wedge", "equal-projective-wedge-ring"))
    m = _determined_max(rx, ry)
    if m is not None:
        if verdict is None:
            try:
                verdict = decide_k_reducibility(X, Y, m, budget)
            except AlgebraError:
                verdict = None
        if verdict is not None and verdict.k == m and verdict.outcome is Outcome.REDUCIBLE:
            crits = ", ".join(c.criterion for c in verdict.criteria_fired)
            out = out.meet(_exactly(m, "wedge-reducible-equality", f"m={m}; reducible via {crits}"))
    return out


def nsc_product(
    X: SpaceModel,
    Y: SpaceModel,
    verdict: ReducibilityVerdict | None = None,
    budget: int = DEFAULT_BUDGET,
) -> NscResult:
    from .spaces import product

    rx, ry = nsc(X), nsc(Y)
    P = product(X, Y)
    lo = max(rx.lower, ry.lower)
    out = nsc_bounds(P).meet(NscResult(lo, None, (_ev("product-lower-max", f"max({rx}, {ry})"),)))
    out = out.meet(_ring_rule(X, Y, "product", "equal-projective-product-ring"))
    m = _determined_max(rx, ry)
    W = wedge(X, Y)
    if m is None or W.dimension is None:
        return out
    pair = pair_connectivity_product_wedge(X, Y)
    if pair < W.dimension:
        return out
    if verdict is None:
        try:
            verdict = decide_k_reducibility(X, Y, m, budget)
        except AlgebraError:
            verdict = None
    if verdict is not None and verdict.k == m and verdict.outcome is Outcome.REDUCIBLE:
        inputs = f"m={m}; conn(XxY, XvY)={pair} >= dim(XvY)={W.dimension}"
        out = out.meet(_exactly(m, "product-reducible-equality", inputs))
    return out


def nsc_smash_bounds(X: SpaceModel, Y: SpaceModel, budget: int = DEFAULT_BUDGET) -> NscResult | None:
    """Interval for ``X ^ Y``; ``None`` when the pair-connectivity hypothesis fails."""
    W = wedge(X, Y)
    if X.dimension is None or Y.dimension is None:
        return None
    pair = pair_connectivity_product_wedge(X, Y)
    if pair < W.dimension:
        return None
    rw = nsc_wedge(X, Y, budget=budget)
    rx, ry = nsc(X), nsc(Y)
    lo = max(rw.lower + 1, max(rx.lower, ry.lower) + 1)
    up = X.dimension + Y.dimension
    rule = NscResult(lo, up, (_ev("smash-shift", f"wedge lower {rw.lower} + 1; dims {X.dimension}+{Y.dimension}"),))
    return rule.meet(nsc_bounds(smash(X, Y)))


def nsc_suspension(X: SpaceModel, n: int) -> NscResult:
    S = suspension(X, n)
    base = nsc_bounds(S)
    if X.dimension is None or connectivity(X) < n - 1 or X.dimension > 2 * (n - 1):
        return base
    rx = nsc(X)
    ev = _ev("stable-suspension-shift", f"{X.name}: conn {connectivity(X)} >= {n - 1}, dim {X.dimension} <= {2 * (n - 1)}")
    return rx.shifted(n, ev).meet(base)


def nsc_atomic_wedge(spaces: Sequence[SpaceModel]) -> NscResult | None:
    """Wedge of atomic summands with pairwise distinct recorded values."""
    if len(spaces) < 2:
        return None
    values = []
    for S in spaces:
        if S.atomic is None:
            return None
        v = recorded_value(S)
        if v is None or not S.atomic.covers(v):
            return None
        values.append(v)
    if len(set(values)) != len(values):
        return None
    names = ", ".join(f"{S.name}={v}" for S, v in zip(spaces, values))
    return _exactly(max(values), "atomic-wedge-distinct", names)


def wedge_summands(X: SpaceModel) -> list[SpaceModel]:
    if X.kind and X.kind[0] == "wedge":
        return wedge_summands(X.kind[1]) + wedge_summands(X.kind[2])
    return [X]


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------

def nsc(X: SpaceModel) -> NscResult:
    """Combine every applicable rule for ``X``.

    Catalog facts come first, then atomicity, then the wedge/product/smash/
    suspension theorems, then generic bounds; each later rule can only narrow
    the interval, and a contradiction raises :class:`InconsistentEvidence`.
    """
    return _nsc_cached(X, X.kind)


@lru_cache(maxsize=512)
def _nsc_cached(X: SpaceModel, kind: tuple) -> NscResult:
    tag = kind[0] if kind else None
    if tag in ("S", "M", "K", "CP", "HP", "SRP", "point"):
        out = nsc_catalog(X) if tag != "point" else None
        if out is None:
            raise UndefinedDimension("a point has no homology")
    elif tag == "wedge":
        out = nsc_wedge(kind[1], kind[2])
        out = out.meet(nsc_atomic_wedge(wedge_summands(X)))
    elif tag == "product":
        out = nsc_product(kind[1], kind[2])
    elif tag == "smash":
        out = nsc_bounds(X).meet(nsc_smash_bounds(kind[1], kind[2]))
    elif tag == "susp":
        out = nsc_suspension(kind[1], kind[2])
    else:
        out = nsc_bounds(X)
    out = out.meet(nsc_atomic(X, out))
    if X.nsc_hint is not None:
        v, tag_ = X.nsc_hint
        out = out.meet(_exactly(v, "user-asserted-value", f"{X.name}: {tag_}"))
    return out
