"""Truncated polynomial cohomology rings and their graded endomorphisms.

Scope is deliberately narrow: one or two single-generator summands of the form
``R[x]/(x^{n+1})`` with ``R`` the integers or a prime field, glued either as a
wedge (cross products vanish) or as a product (no cross relation).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as cartesian
from math import comb
from pathlib import Path
from typing import Any, Iterator, Mapping

from sympy import isprime

from .abelian import determinant
from .errors import InfiniteSolutionSet, InvalidPresentation, UnsupportedModel


@dataclass(frozen=True)
class TruncatedRing:
    """``R[gen]/(gen^{trunc+1})`` with ``|gen| = degree``; ``coeff`` 0 means Z."""

    gen: str
    degree: int
    trunc: int
    coeff: int = 0

    def __post_init__(self):
        if self.trunc < 1:
            raise InvalidPresentation("truncation exponent must be >= 1")
        if self.degree < 2:
            raise InvalidPresentation("generator degree must be >= 2")
        if self.degree % 2 and self.trunc > 1:
            # an odd class squares to zero (or 2x^2 = 0) by graded commutativity
            raise InvalidPresentation("odd-degree generators only occur as exterior classes")
        if self.coeff and not isprime(self.coeff):
            raise InvalidPresentation(f"coefficient characteristic {self.coeff} is not prime")

    @property
    def top_degree(self) -> int:
        return self.degree * self.trunc

    def __str__(self):
        base = "Z" if not self.coeff else f"F{self.coeff}"
        return f"{base}[{self.gen}]/({self.gen}^{self.trunc + 1}), |{self.gen}|={self.degree}"


@dataclass(frozen=True)
class RingModel:
    summands: tuple[TruncatedRing, ...]
    relation: str = "wedge"

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        if not 1 <= len(self.summands) <= 2:
            raise UnsupportedModel("ring models carry one or two generators")
        if self.relation not in ("wedge", "product"):
            raise InvalidPresentation(f"unknown relation {self.relation!r}")
        if len({s.gen for s in self.summands}) != len(self.summands):
            raise InvalidPresentation("generator names must be distinct")


@dataclass(frozen=True, order=True)
class RingEndoSolution:
    """Images of the generators: row ``i`` holds the coefficients of ``f(gen_i)``
    on the degree-``d`` generators."""

    images: tuple[tuple[int, ...], ...]

    def render(self, names: tuple[str, ...]) -> str:
        parts = []
        for src, row in zip(names, self.images):
            terms = [f"{c}{g}" if c not in (1, -1) else ("-" if c < 0 else "") + g
                     for c, g in zip(row, names) if c]
            parts.append(f"{src} -> " + (" + ".join(terms).replace("+ -", "- ") or "0"))
        return ", ".join(parts)


# ---------------------------------------------------------------------------
# Catalog and files
# ---------------------------------------------------------------------------

def catalog_ring(space) -> TruncatedRing | None:
    """Integral cohomology ring of a catalog space, when it is a truncated polynomial ring."""
    kind = getattr(space, "kind", ())
    if not kind:
        return None
    if kind[0] == "CP":
        return TruncatedRing("a", 2, kind[1])
    if kind[0] == "HP":
        return TruncatedRing("a", 4, kind[1])
    if kind[0] == "S":
        return TruncatedRing("a", kind[1], 1)
    return None


def wedge_ring(X, Y, relation: str = "wedge") -> RingModel:
    rx, ry = catalog_ring(X), catalog_ring(Y)
    if rx is None or ry is None:
        raise UnsupportedModel(f"no catalog ring for {X} and {Y}")
    return RingModel((TruncatedRing("a", rx.degree, rx.trunc), TruncatedRing("b", ry.degree, ry.trunc)), relation)


def _parse_coeff(text: str) -> int:
    if text == "Z":
        return 0
    if text.startswith("Fp:"):
        return int(text[3:])
    raise InvalidPresentation(f"coefficient must be 'Z' or 'Fp:<p>', got {text!r}")


def ring_from_dict(doc: Mapping[str, Any]) -> RingModel:
    try:
        summands = tuple(
            TruncatedRing(str(s["gen"]), int(s["degree"]), int(s["trunc"]), _parse_coeff(str(s.get("coeff", "Z"))))
            for s in doc["summands"]
        )
        relation = str(doc.get("relation", "wedge"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidPresentation(f"malformed ring document: {exc}") from exc
    return RingModel(summands, relation)


def load_ring(path: str | Path) -> RingModel:
    with open(path) as fh:
        return ring_from_dict(json.load(fh))


_RING_IDENT = {"CP": 2, "HP": 4}


def resolve_ring(arg: str) -> RingModel:
    """A JSON ring file, or catalog rings joined by ``+`` (wedge) or ``*`` (product),
    e.g. ``CP:3+CP:3`` or ``HP:2*HP:2``."""
    if arg.endswith(".json") or Path(arg).is_file():
        return load_ring(arg)
    relation = "product" if "*" in arg else "wedge"
    pieces = arg.split("*" if relation == "product" else "+")
    if len(pieces) > 2:
        raise UnsupportedModel("ring models carry one or two generators")
    out = []
    for g, piece in zip("ab", pieces):
        tag, _, num = piece.strip().partition(":")
        if not num.isdigit() or tag not in ("CP", "HP", "S"):
            raise InvalidPresentation(f"bad ring identifier {piece!r}")
        n = int(num)
        out.append(TruncatedRing(g, n, 1) if tag == "S" else TruncatedRing(g, _RING_IDENT[tag], n))
    return RingModel(tuple(out), relation)


# ---------------------------------------------------------------------------
# Ring homomorphisms between single-generator rings
# ---------------------------------------------------------------------------

def ring_hom_forced_trivial(source: TruncatedRing, target: TruncatedRing):
    """Is every graded ring map ``source -> target`` zero in positive degrees?

    Returns ``(True, reason, None)`` or ``(False, None, witness)`` where the
    witness ``(l, j)`` describes the nonzero map ``x -> l*y^j``.
    """
    d, e = source.degree, target.degree
    p, q = source.coeff, target.coeff
    if p and (q == 0 or q != p):
        # p-torsion has no nonzero image in torsion-free or q-torsion groups
        return True, "coefficient-mismatch", None
    if d % e or d // e > target.trunc:
        return True, "degree-mismatch", None
    j = d // e
    if j * (source.trunc + 1) <= target.trunc:
        # x^{a+1} = 0 forces l^{a+1} y^{j(a+1)} = 0 with y^{j(a+1)} != 0
        return True, ("characteristic-divides" if q else "truncation-kills"), None
    return False, None, (1, j)


# ---------------------------------------------------------------------------
# Polynomial arithmetic in the model
# ---------------------------------------------------------------------------

Poly = dict  # (i, j) exponent pair -> int coefficient


class _Arith:
    def __init__(self, model: RingModel):
        self.model = model
        self.tr = tuple(s.trunc for s in model.summands) + (0,) * (2 - len(model.summands))
        self.p = model.summands[0].coeff

    def clean(self, f: Poly) -> Poly:
        out = {}
        for (i, j), c in f.items():
            if i > self.tr[0] or j > self.tr[1]:
                continue
            if self.model.relation == "wedge" and i and j:
                continue
            if self.p:
                c %= self.p
            if c:
                out[(i, j)] = c
        return out

    def mul(self, f: Poly, g: Poly) -> Poly:
        out: dict = {}
        for (i, j), c in f.items():
            for (k, l), e in g.items():
                out[(i + k, j + l)] = out.get((i + k, j + l), 0) + c * e
        return self.clean(out)

    def power(self, f: Poly, n: int) -> Poly:
        out = {(0, 0): 1}
        for _ in range(n):
            out = self.mul(out, f)
        return out

    def image(self, images, mono) -> Poly:
        """Image of ``a^u b^v`` under the map with the given generator images."""
        u, v = mono
        gens = [{(1, 0): r[0], (0, 1): r[1]} if len(r) == 2 else {(1, 0): r[0]} for r in images]
        out = self.power(gens[0], u)
        if v:
            out = self.mul(out, self.power(gens[1], v))
        return out

    def relations(self) -> list[tuple[int, int]]:
        rels = [(self.tr[0] + 1, 0)]
        if len(self.model.summands) == 2:
            rels.append((0, self.tr[1] + 1))
            if self.model.relation == "wedge":
                rels.append((1, 1))
        return rels


def _constraints(model: RingModel, ar: _Arith) -> list[frozenset[str]]:
    """Each returned set lists variables at least one of which must vanish."""
    two = len(model.summands) == 2
    rows = (("a", "b"), ("c", "d")) if two else (("a",),)
    out = []

    def monomial(coef: int, powers: dict[str, int]):
        if ar.p:
            coef %= ar.p
        if coef == 0:
            return
        out.append(frozenset(v for v, e in powers.items() if e))

    for u, v in ar.relations():
        # expand f(a)^u f(b)^v = (x1 a + y1 b)^u (x2 a + y2 b)^v monomial by monomial
        terms: dict[tuple[int, int], dict[tuple, int]] = {}
        for s in range(u + 1):
            for t in range(v + 1 if two else 1):
                i, j = s + t, (u - s) + (v - t)
                if not two and j:
                    continue
                if ar.clean({(i, j): 1}) == {}:
                    continue
                key = ((rows[0][0], s), (rows[0][-1], u - s)) + (((rows[1][0], t), (rows[1][1], v - t)) if two else ())
                terms.setdefault((i, j), {})
                terms[(i, j)][key] = terms[(i, j)].get(key, 0) + comb(u, s) * (comb(v, t) if two else 1)
        for (i, j), poly in terms.items():
            live = {k: c for k, c in poly.items() if (c % ar.p if ar.p else c)}
            if len(live) > 1:
                raise UnsupportedModel("constraint is not a single monomial; outside the solver's scope")
            for key, c in live.items():
                powers: dict[str, int] = {}
                for var, e in key:
                    powers[var] = powers.get(var, 0) + e
                monomial(c, powers)
    return out


def _hitting_sets(constraints: list[frozenset[str]], forced: frozenset[str] = frozenset()) -> Iterator[frozenset[str]]:
    pending = [c for c in constraints if not c & forced]
    if not pending:
        yield forced
        return
    if any(not c for c in pending):
        return  # a nonzero constant must vanish: no solutions
    for var in sorted(pending[0]):
        yield from _hitting_sets(constraints, forced | {var})


def _det2(images) -> int:
    return determinant([list(r) for r in images])


def enumerate_degree_d_invertible_endos(model: RingModel) -> list[RingEndoSolution]:
    """All graded ring endomorphisms invertible in the generator degree.

    Relations are expanded into monomial constraints ``x^i y^j = 0`` which are
    case-split on which variables vanish; the unit condition on the degree-d
    matrix then pins the rest (over Z) or is enumerated (over a prime field).
    """
    S = model.summands
    if len({s.degree for s in S}) != 1:
        raise UnsupportedModel("generators of different degrees are outside the solver's scope")
    if len({s.coeff for s in S}) != 1:
        raise UnsupportedModel("mixed coefficient domains are outside the solver's scope")
    if model.relation == "product" and S[0].coeff:
        raise UnsupportedModel("product models are supported over the integers only")
    ar = _Arith(model)
    two = len(S) == 2
    names = ("a", "b", "c", "d") if two else ("a",)
    cons = _constraints(model, ar)
    sols: set[tuple[tuple[int, ...], ...]] = set()
    for zeros in _hitting_sets(cons):
        free = [v for v in names if v not in zeros]
        if ar.p:
            for vals in cartesian(range(ar.p), repeat=len(free)):
                sols.update(_finish(dict(zip(free, vals)), zeros, two, ar.p))
            continue
        if not two:
            if free:
                sols.update({((1,),), ((-1,),)})
            continue
        main_alive = "a" in free and "d" in free
        anti_alive = "b" in free and "c" in free
        if main_alive and anti_alive:
            raise InfiniteSolutionSet(f"{model}: ad - bc = +-1 with no vanishing forced has infinitely many solutions")
        if not (main_alive or anti_alive):
            continue
        units = ("a", "d") if main_alive else ("b", "c")
        loose = [v for v in free if v not in units]
        if loose:
            raise InfiniteSolutionSet(
                f"{model}: variables {loose} are unconstrained once {units} are units"
            )
        for s, t in cartesian((1, -1), repeat=2):
            sols.update(_finish({units[0]: s, units[1]: t}, zeros, two, 0))
    out = sorted(RingEndoSolution(s) for s in sols)
    for sol in out:
        if not is_ring_endo(model, sol) or not _unit(_det2(sol.images), ar.p):
            raise AssertionError(f"solver produced an invalid solution {sol}")
    return out


def _unit(x: int, p: int) -> bool:
    return x % p != 0 if p else abs(x) == 1


def _finish(values: dict, zeros, two: bool, p: int) -> set:
    full = {v: 0 for v in zeros} | values
    if two:
        images = ((full.get("a", 0), full.get("b", 0)), (full.get("c", 0), full.get("d", 0)))
    else:
        images = ((full.get("a", 0),),)
    return {images} if _unit(_det2(images), p) else set()


def is_ring_endo(model: RingModel, sol: RingEndoSolution) -> bool:
    """Substitute generator images into every relation and check they vanish."""
    ar = _Arith(model)
    return all(ar.image(sol.images, rel) == {} for rel in ar.relations())


def _basis(model: RingModel, level: int) -> list[tuple[int, int]]:
    ar = _Arith(model)
    cand = [(i, level - i) for i in range(level + 1)]
    return [m for m in cand if ar.clean({m: 1})]


def is_ring_automorphism(model: RingModel, sol: RingEndoSolution) -> bool:
    """Invertibility of the induced map on every graded piece."""
    ar = _Arith(model)
    top = max(s.trunc for s in model.summands) * (2 if model.relation == "product" else 1)
    for level in range(1, top + 1):
        basis = _basis(model, level)
        if not basis:
            continue
        M = [[ar.image(sol.images, mono).get(b, 0) for mono in basis] for b in basis]
        if not _unit(determinant(M), ar.p):
            return False
    return True


def all_invertible_endos_are_ring_autos(model: RingModel) -> bool:
    return all(is_ring_automorphism(model, s) for s in enumerate_degree_d_invertible_endos(model))
