"""Graded homology models of simply connected spaces.

A :class:`SpaceModel` records reduced integral homology in degrees >= 2 as an
explicit finite table.  Tables are trusted only up to ``cutoff``; asking for a
degree above it raises :class:`InsufficientTable` instead of answering zero.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Mapping

from .abelian import (
    TRIVIAL,
    Z,
    DirectSum,
    FgAbelianGroup,
    canonicalize,
    cyclic,
    direct_sum,
    direct_sum_group,
    parse_group,
    primary_decomposition,
    tensor,
    tor,
)
from .errors import InsufficientTable, InvalidPresentation, UndefinedDimension

# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedGroup:
    """Degree -> nonzero group, degrees >= 2 only."""

    entries: tuple[tuple[int, FgAbelianGroup], ...] = ()

    def __post_init__(self):
        cleaned = tuple(sorted((int(d), g) for d, g in self.entries if not g.is_trivial))
        degrees = [d for d, _ in cleaned]
        if len(set(degrees)) != len(degrees):
            raise InvalidPresentation(f"repeated degree in {degrees}")
        if degrees and degrees[0] < 2:
            raise InvalidPresentation("degrees below 2 are excluded (reduced, simply connected)")
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def of(cls, mapping: Mapping[int, FgAbelianGroup]) -> GradedGroup:
        return cls(tuple(mapping.items()))

    def __getitem__(self, degree: int) -> FgAbelianGroup:
        return dict(self.entries).get(degree, TRIVIAL)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def degrees(self) -> list[int]:
        return [d for d, _ in self.entries]

    def shift(self, m: int) -> GradedGroup:
        return GradedGroup(tuple((d + m, g) for d, g in self.entries))

    def truncate(self, top: int | None) -> GradedGroup:
        if top is None:
            return self
        return GradedGroup(tuple((d, g) for d, g in self.entries if d <= top))

    def __add__(self, other: GradedGroup) -> GradedGroup:
        out: dict[int, FgAbelianGroup] = dict(self.entries)
        for d, g in other.entries:
            out[d] = direct_sum_group(out.get(d, TRIVIAL), g)
        return GradedGroup.of(out)

    def __str__(self):
        if not self.entries:
            return "0"
        return ", ".join(f"H_{d} = {g}" for d, g in self.entries)


@dataclass(frozen=True)
class AtomicCertificate:
    """Claim that every self-map acts on ``H_i``, ``i <= level``, either as an
    automorphism throughout or nilpotently throughout.  ``level=None`` means all
    degrees."""

    level: int | None
    provenance: str = "catalog"

    def covers(self, degree: int) -> bool:
        return self.level is None or degree <= self.level


@dataclass(frozen=True)
class SpaceModel:
    name: str
    homology: GradedGroup
    dimension: int | None
    cutoff: int | None = None
    atomic: AtomicCertificate | None = None
    nsc_hint: tuple[int, str] | None = None
    kind: tuple = field(default=(), compare=False)

    def __post_init__(self):
        dim, cut = self.dimension, self.cutoff
        if dim is None and cut is None:
            raise InvalidPresentation(f"{self.name}: unbounded dimension needs a table cutoff")
        if dim is not None and cut is not None and cut >= dim:
            object.__setattr__(self, "cutoff", None)
            cut = None
        top = self.homology.degrees[-1] if len(self.homology) else None
        if top is not None:
            if dim is not None and top > dim:
                raise InvalidPresentation(f"{self.name}: homology in degree {top} > dimension {dim}")
            if cut is not None and top > cut:
                raise InvalidPresentation(f"{self.name}: homology in degree {top} above cutoff {cut}")

    @property
    def known_through(self) -> int | None:
        """Largest degree the table answers for; ``None`` means every degree."""
        return self.cutoff

    @property
    def is_contractible(self) -> bool:
        return not len(self.homology) and self.cutoff is None

    def group(self, degree: int) -> FgAbelianGroup:
        if self.cutoff is not None and degree > self.cutoff:
            raise InsufficientTable(
                f"{self.name}: H_{degree} requested but the table stops at degree {self.cutoff}"
            )
        if degree < 2:
            return TRIVIAL
        return self.homology[degree]

    def cohomology(self, degree: int) -> FgAbelianGroup:
        """Universal coefficients: free part of ``H_i`` plus torsion of ``H_{i-1}``."""
        free = self.group(degree).free_rank
        tors = self.group(degree - 1).invariant_factors if degree >= 3 else ()
        return FgAbelianGroup(free, tors)

    def __str__(self):
        return self.name


def _min_known(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# Numerical invariants
# ---------------------------------------------------------------------------

def connectivity(X: SpaceModel) -> int:
    """(lowest nonzero homology degree) - 1, read off the table."""
    if len(X.homology):
        return X.homology.degrees[0] - 1
    if X.cutoff is not None:
        return X.cutoff
    raise UndefinedDimension(f"{X.name} has no homology at all; its connectivity is infinite")


def homology_dimension(X: SpaceModel) -> int:
    if not len(X.homology):
        raise UndefinedDimension(f"{X.name} has an empty homology table")
    return X.homology.degrees[-1]


def pair_connectivity_product_wedge(X: SpaceModel, Y: SpaceModel) -> int:
    """Connectivity of the pair (X x Y, X v Y), i.e. of the smash product."""
    return connectivity(X) + connectivity(Y) + 1


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def _check_degree(n: int, what: str):
    if n < 2:
        raise InvalidPresentation(f"{what} needs degree >= 2 (simply connected), got {n}")


def _is_prime_power_cyclic(G: FgAbelianGroup) -> bool:
    rank, pairs = primary_decomposition(G)
    return rank == 0 and len(pairs) == 1


def point() -> SpaceModel:
    return SpaceModel("*", GradedGroup(), 0, kind=("point",))


def sphere(n: int) -> SpaceModel:
    _check_degree(n, "sphere")
    return SpaceModel(f"S^{n}", GradedGroup(((n, Z),)), n, kind=("S", n))


def moore(G: FgAbelianGroup | str, n: int) -> SpaceModel:
    """M(G, n): reduced homology ``G`` in degree ``n`` only."""
    if isinstance(G, str):
        G = parse_group(G)
    _check_degree(n, "Moore space")
    if G.is_trivial:
        raise InvalidPresentation("Moore space of the trivial group is a point")
    dim = n + 1 if G.invariant_factors else n
    cert = AtomicCertificate(None, "catalog") if _is_prime_power_cyclic(G) else None
    return SpaceModel(f"M({G},{n})", GradedGroup(((n, G),)), dim, atomic=cert, kind=("M", G, n))


def complex_projective(n: int) -> SpaceModel:
    if n < 1:
        raise InvalidPresentation("CP^n needs n >= 1")
    table = tuple((2 * i, Z) for i in range(1, n + 1))
    return SpaceModel(f"CP^{n}", GradedGroup(table), 2 * n, kind=("CP", n))


def quaternionic_projective(n: int) -> SpaceModel:
    if n < 1:
        raise InvalidPresentation("HP^n needs n >= 1")
    table = tuple((4 * i, Z) for i in range(1, n + 1))
    return SpaceModel(f"HP^{n}", GradedGroup(table), 4 * n, kind=("HP", n))


def eilenberg_maclane(
    G: FgAbelianGroup | str,
    n: int,
    table: Mapping[int, FgAbelianGroup] | None = None,
    cutoff: int | None = None,
) -> SpaceModel:
    """K(G, n) with homology known up to ``cutoff``.

    Only ``H_n = G`` is known a priori (Hurewicz); higher groups must be
    supplied in ``table``.  The default cutoff is ``n``, or the top degree of
    ``table`` when one is given.
    """
    if isinstance(G, str):
        G = parse_group(G)
    _check_degree(n, "Eilenberg-MacLane space")
    if G.is_trivial:
        raise InvalidPresentation("K(0, n) is contractible")
    extra = dict(table or {})
    if any(d <= n for d in extra):
        raise InvalidPresentation("table entries must lie above the Hurewicz degree")
    if cutoff is None:
        cutoff = max(extra, default=n)
    if cutoff < n:
        raise InvalidPresentation("cutoff below the Hurewicz degree")
    entries = ((n, G),) + tuple(extra.items())
    cert = AtomicCertificate(None, "catalog") if _is_prime_power_cyclic(G) else None
    return SpaceModel(
        f"K({G},{n})", GradedGroup(entries), None, cutoff=cutoff, atomic=cert, kind=("K", G, n)
    )


def suspended_real_projective(k: int) -> SpaceModel:
    """Suspension of RP^k for even k: ``H_{2i} = Z/2`` for ``1 <= i <= k/2``."""
    if k < 2 or k % 2:
        raise InvalidPresentation("suspended_real_projective needs an even dimension >= 2")
    table = tuple((2 * i, cyclic(2)) for i in range(1, k // 2 + 1))
    return SpaceModel(f"SigmaRP^{k}", GradedGroup(table), k + 1, kind=("SRP", k))


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def _max_dim(a: int | None, b: int | None) -> int | None:
    return None if a is None or b is None else max(a, b)


def wedge(X: SpaceModel, Y: SpaceModel) -> SpaceModel:
    """Wedge sum; homology is the degreewise direct sum."""
    if X.is_contractible:
        return Y
    if Y.is_contractible:
        return X
    cut = _min_known(X.cutoff, Y.cutoff)
    table = (X.homology + Y.homology).truncate(cut)
    return SpaceModel(
        f"{X.name} v {Y.name}",
        table,
        _max_dim(X.dimension, Y.dimension),
        cutoff=cut,
        kind=("wedge", X, Y),
    )


def wedge_all(spaces: Iterable[SpaceModel]) -> SpaceModel:
    spaces = list(spaces)
    out = spaces[0]
    for Y in spaces[1:]:
        out = wedge(out, Y)
    return out


def wedge_summand_maps(X: SpaceModel, Y: SpaceModel, degree: int) -> DirectSum:
    """Injections and projections of ``H_i(X v Y) = H_i(X) + H_i(Y)``."""
    return direct_sum(X.group(degree), Y.group(degree))


def _smash_cutoff(X: SpaceModel, Y: SpaceModel) -> int | None:
    # degree n of the smash needs H_p(X) for p <= n - (conn(Y) + 1), and symmetrically
    cx = None if X.cutoff is None else X.cutoff + connectivity(Y) + 1
    cy = None if Y.cutoff is None else Y.cutoff + connectivity(X) + 1
    return _min_known(cx, cy)


def _smash_table(X: SpaceModel, Y: SpaceModel, top: int | None) -> GradedGroup:
    out: dict[int, list[FgAbelianGroup]] = {}
    for p, G in X.homology:
        for q, H in Y.homology:
            for deg, piece in ((p + q, tensor(G, H)), (p + q + 1, tor(G, H))):
                if (top is None or deg <= top) and not piece.is_trivial:
                    out.setdefault(deg, []).append(piece)
    return GradedGroup.of({d: direct_sum_group(*gs) for d, gs in out.items()})


def smash(X: SpaceModel, Y: SpaceModel) -> SpaceModel:
    """Smash product via the reduced Kunneth formula."""
    if X.is_contractible or Y.is_contractible:
        return point()
    cut = _smash_cutoff(X, Y)
    dim = None if X.dimension is None or Y.dimension is None else X.dimension + Y.dimension
    return SpaceModel(
        f"{X.name} ^ {Y.name}", _smash_table(X, Y, cut), dim, cutoff=cut, kind=("smash", X, Y)
    )


def product(X: SpaceModel, Y: SpaceModel) -> SpaceModel:
    """Cartesian product; reduced homology is wedge plus smash."""
    if X.is_contractible:
        return Y
    if Y.is_contractible:
        return X
    w, s = wedge(X, Y), smash(X, Y)
    cut = _min_known(w.cutoff, s.cutoff)
    dim = None if X.dimension is None or Y.dimension is None else X.dimension + Y.dimension
    return SpaceModel(
        f"{X.name} x {Y.name}",
        (w.homology + s.homology).truncate(cut),
        dim,
        cutoff=cut,
        kind=("product", X, Y),
    )


def suspension(X: SpaceModel, m: int = 1) -> SpaceModel:
    """m-fold suspension: shift the table, dimension and cutoff up by ``m``."""
    if m < 1:
        raise InvalidPresentation("suspension order must be positive")
    if X.is_contractible:
        return X
    kind: tuple = ("susp", X, m)
    name = f"Sigma^{m}({X.name})"
    if X.kind and X.kind[0] == "S":
        return sphere(X.kind[1] + m)
    if X.kind and X.kind[0] == "M":
        return moore(X.kind[1], X.kind[2] + m)
    cert = None
    if X.atomic is not None and X.dimension is not None:
        r = connectivity(X)
        # suspension is surjective on homotopy classes of self-maps in this range
        if X.dimension <= 2 * r + 1:
            lvl = None if X.atomic.level is None else X.atomic.level + m
            cert = AtomicCertificate(lvl, "suspension")
    return SpaceModel(
        name,
        X.homology.shift(m),
        None if X.dimension is None else X.dimension + m,
        cutoff=None if X.cutoff is None else X.cutoff + m,
        atomic=cert,
        kind=kind,
    )


def same_homology(A: SpaceModel, B: SpaceModel) -> bool:
    """Degreewise equality of canonical groups over the range both tables know."""
    top = _min_known(A.cutoff, B.cutoff)
    return A.homology.truncate(top) == B.homology.truncate(top)


def suspension_splitting_check(X: SpaceModel, Y: SpaceModel) -> bool:
    """Compare ``S(X x Y)`` with ``SX v SY v S(X ^ Y)`` degreewise."""
    lhs = suspension(product(X, Y), 1)
    rhs = wedge(suspension(X, 1), wedge(suspension(Y, 1), suspension(smash(X, Y), 1)))
    return same_homology(lhs, rhs)


# ---------------------------------------------------------------------------
# Identifiers and files
# ---------------------------------------------------------------------------

_IDENT = re.compile(r"^(S|CP|HP|SRP):(\d+)$|^(M|K):([^:]+):(\d+)$")


def from_identifier(text: str) -> SpaceModel:
    """Catalog identifiers: ``S:5``, ``CP:3``, ``HP:2``, ``SRP:4``, ``M:Z/4:3``, ``K:Z/8:4``."""
    m = _IDENT.match(text.strip())
    if not m:
        raise InvalidPresentation(f"unknown catalog identifier {text!r}")
    tag, num, gtag, grp, deg = m.groups()
    if tag == "S":
        return sphere(int(num))
    if tag == "CP":
        return complex_projective(int(num))
    if tag == "HP":
        return quaternionic_projective(int(num))
    if tag == "SRP":
        return suspended_real_projective(int(num))
    G = parse_group(grp)
    return moore(G, int(deg)) if gtag == "M" else eilenberg_maclane(G, int(deg))


def space_from_dict(doc: Mapping[str, Any]) -> SpaceModel:
    """Build a model from the JSON schema

    ``{"name", "dimension", "cutoff", "homology": {"<deg>": {"rank", "torsion"}},
    "atomic": n, "nsc": v}``; ``dimension`` may be null for unbounded spaces.
    """
    try:
        name = str(doc["name"])
        raw = doc.get("homology", {})
        table = {}
        for deg, entry in raw.items():
            table[int(deg)] = canonicalize(int(entry.get("rank", 0)), [int(t) for t in entry.get("torsion", [])])
        dim = doc.get("dimension")
        cutoff = doc.get("cutoff")
        atomic = doc.get("atomic")
        nsc = doc.get("nsc")
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InvalidPresentation(f"malformed space document: {exc}") from exc
    cert = None
    if atomic is not None:
        cert = AtomicCertificate(None if atomic == "all" else int(atomic), "user")
    return SpaceModel(
        name,
        GradedGroup.of(table),
        None if dim is None else int(dim),
        cutoff=None if cutoff is None else int(cutoff),
        atomic=cert,
        nsc_hint=None if nsc is None else (int(nsc), "user-asserted"),
        kind=("file", name),
    )


def space_to_dict(X: SpaceModel) -> dict:
    doc: dict[str, Any] = {
        "name": X.name,
        "dimension": X.dimension,
        "cutoff": X.cutoff,
        "homology": {
            str(d): {"rank": g.free_rank, "torsion": list(g.invariant_factors)} for d, g in X.homology
        },
    }
    if X.atomic is not None:
        doc["atomic"] = "all" if X.atomic.level is None else X.atomic.level
    if X.nsc_hint is not None:
        doc["nsc"] = X.nsc_hint[0]
    return doc


def load_space(path: str | Path) -> SpaceModel:
    with open(path) as fh:
        return space_from_dict(json.load(fh))


def resolve_space(arg: str) -> SpaceModel:
    """A catalog identifier or the path of a JSON space file."""
    if arg.endswith(".json") or Path(arg).is_file():
        return load_space(arg)
    return from_identifier(arg)
