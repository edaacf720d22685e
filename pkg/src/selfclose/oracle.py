"""Brute-force verifiers working on explicit elements.

Groups here are tuples of cyclic moduli, elements are residue tuples, and
homomorphisms are lists of generator images.  Nothing in this module calls the
Smith-form machinery it is used to check; the library is only consulted on the
"implementation" side of a comparison, and to replay counterexamples.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd
from typing import Any, Iterator, Sequence

from . import abelian
from .errors import InvalidPresentation, NotEnumerable, SuiteRefused
from .spaces import SpaceModel

PASS = "PASS"
COUNTEREXAMPLE = "COUNTEREXAMPLE"


# ---------------------------------------------------------------------------
# Elementwise groups
# ---------------------------------------------------------------------------

class Cyclics:
    """``Z/m_1 + ... + Z/m_r`` with its elements listed lexicographically."""

    def __init__(self, moduli: Sequence[int]):
        self.moduli = tuple(int(m) for m in moduli if int(m) != 1)
        if any(m < 1 for m in self.moduli):
            raise InvalidPresentation(f"moduli must be positive: {moduli}")

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        return tuple(product(*(range(m) for m in self.moduli)))

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def addition(self) -> tuple[tuple[int, ...], ...]:
        """Addition table on element indices."""
        els, idx = self.elements, self.index
        return tuple(tuple(idx[self.add(a, b)] for b in els) for a in els)

    @property
    def order(self) -> int:
        n = 1
        for m in self.moduli:
            n *= m
        return n

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def scale(self, k: int, a):
        return tuple((k * x) % m for x, m in zip(a, self.moduli))

    def killed_by(self, k: int) -> list[tuple[int, ...]]:
        return [e for e in self.elements if not any(x for x in self.scale(k, e))]

    def __add__(self, other: Cyclics) -> Cyclics:
        return Cyclics(self.moduli + other.moduli)

    def __repr__(self):
        return "+".join(f"Z/{m}" for m in self.moduli) or "0"


@dataclass(frozen=True)
class Map:
    """A homomorphism given by the images of the source generators."""

    source: Cyclics = field(compare=False)
    target: Cyclics = field(compare=False)
    images: tuple[tuple[int, ...], ...]

    def __call__(self, x):
        out = self.target.zero
        for c, img in zip(x, self.images):
            if c:
                out = self.target.add(out, self.target.scale(c, img))
        return out

    @cached_property
    def table(self) -> tuple[int, ...]:
        """Index of the image of each source element, built generator by generator."""
        T = self.target
        add = T.addition
        idx = T.index
        vals = [idx[T.zero]]
        for m, img in zip(self.source.moduli, self.images):
            mult = [idx[T.scale(c, img)] for c in range(m)]
            vals = [add[v][w] for v in vals for w in mult]
        return tuple(vals)

    def then(self, other: Map) -> Map:
        """``other`` after ``self``."""
        return Map(self.source, other.target, tuple(other(img) for img in self.images))

    def __add__(self, other: Map) -> Map:
        t = self.target
        return Map(self.source, t, tuple(t.add(a, b) for a, b in zip(self.images, other.images)))

    def __neg__(self) -> Map:
        t = self.target
        return Map(self.source, t, tuple(t.scale(-1, a) for a in self.images))

    def __sub__(self, other: Map) -> Map:
        return self + (-other)

    @property
    def is_zero(self) -> bool:
        return not any(any(img) for img in self.images)

    @property
    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(set(self.table)) == self.source.order

    def inverse(self) -> Map:
        if not self.is_bijective:
            raise ValueError("not invertible")
        src, tgt = self.source, self.target
        back = {}
        for x, y in zip(src.elements, self.table):
            back[y] = x
        gens = []
        for j in range(len(tgt.moduli)):
            e = tuple(1 if i == j else 0 for i in range(len(tgt.moduli)))
            gens.append(back[tgt.index[e]])
        return Map(tgt, src, tuple(gens))

    def columns(self) -> list[list[int]]:
        """Integer matrix, rows indexed by target generators."""
        return [[img[i] for img in self.images] for i in range(len(self.target.moduli))]


def identity_map(G: Cyclics) -> Map:
    n = len(G.moduli)
    return Map(G, G, tuple(tuple(int(i == j) for i in range(n)) for j in range(n)))


def zero_map(G: Cyclics, H: Cyclics) -> Map:
    return Map(G, H, (H.zero,) * len(G.moduli))


def candidate_count(G: Cyclics, H: Cyclics) -> int:
    """Residue matrices ``G -> H`` before the order condition is imposed."""
    return H.order ** len(G.moduli)


def maps(G: Cyclics, H: Cyclics) -> Iterator[Map]:
    """Every homomorphism: each generator of order m goes to an element killed by m."""
    choices = [H.killed_by(m) for m in G.moduli]
    for imgs in product(*choices):
        yield Map(G, H, imgs)


def is_nilpotent_naive(f: Map) -> bool:
    """Iterate the map on its image until the image stops shrinking."""
    table = f.table
    current = set(table)
    while True:
        nxt = {table[i] for i in current}
        if nxt == current:
            return current == {f.source.index[f.source.zero]}
        current = nxt


def split(f: Map, A: Cyclics, B: Cyclics):
    """Blocks of an endomorphism of ``A + B``: (XX, XY, YX, YY) with XY: B -> A."""
    a = len(A.moduli)
    imgs = f.images
    xx = Map(A, A, tuple(img[:a] for img in imgs[:a]))
    yx = Map(A, B, tuple(img[a:] for img in imgs[:a]))
    xy = Map(B, A, tuple(img[:a] for img in imgs[a:]))
    yy = Map(B, B, tuple(img[a:] for img in imgs[a:]))
    return xx, xy, yx, yy


def groups_up_to(bound: int, max_factors: int | None = None) -> list[tuple[int, ...]]:
    """Invariant-factor chains ``d_1 | d_2 | ...`` with product at most ``bound``."""
    out: list[tuple[int, ...]] = [()]

    def grow(chain: tuple[int, ...], order: int):
        if max_factors is not None and len(chain) >= max_factors:
            return
        last = chain[-1] if chain else 1
        d = last if chain else 2
        while order * d <= bound:
            if d % last == 0 and d > 1:
                out.append(chain + (d,))
                grow(chain + (d,), order * d)
            d += 1

    grow((), 1)
    return sorted(out, key=lambda c: (_prod(c), c))


def _prod(xs) -> int:
    n = 1
    for x in xs:
        n *= x
    return n


_CYCLIC = re.compile(r"^Z/(\d+)$")


def as_cyclics(G: Any) -> tuple[Cyclics, int]:
    """Convert an input to ``(torsion part, free rank)``.

    Strings are split on ``+`` or ``⊕`` and read summand by summand, so
    ``"Z/2+Z/3"`` stays a two-generator group here.
    """
    if isinstance(G, Cyclics):
        return G, 0
    if isinstance(G, abelian.FgAbelianGroup):
        return Cyclics(G.invariant_factors), G.free_rank
    if isinstance(G, (tuple, list)):
        return Cyclics(G), 0
    text = str(G).replace(" ", "")
    if text in ("0", ""):
        return Cyclics(()), 0
    mods, free = [], 0
    for part in re.split(r"[+⊕]", text):
        if part == "Z":
            free += 1
            continue
        m = _CYCLIC.match(part)
        if not m or int(m.group(1)) < 1:
            raise InvalidPresentation(f"cannot read summand {part!r}")
        mods.append(int(m.group(1)))
    return Cyclics(mods), free


def _finite(G: Any, what: str) -> Cyclics:
    T, free = as_cyclics(G)
    if free:
        raise NotEnumerable(f"{what} has a free summand; the census needs finite groups")
    return T


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    suite: str
    instances: int
    outcome: str
    witness: dict | None = None
    runtime: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.outcome == PASS

    def replay(self) -> bool:
        """Re-derive the failure recorded in ``witness``; ``True`` if it reproduces."""
        if self.witness is None:
            return False
        return _REPLAY[self.witness["check"]](self.witness)

    def as_dict(self) -> dict:
        # runtime is left out so that repeated runs serialize identically
        return {
            "suite": self.suite,
            "instances": self.instances,
            "outcome": self.outcome,
            "witness": self.witness,
            "details": self.details,
        }


def _report(suite, t0, instances, witness=None, **details) -> VerificationReport:
    return VerificationReport(
        suite,
        instances,
        PASS if witness is None else COUNTEREXAMPLE,
        witness,
        time.perf_counter() - t0,
        details,
    )


def _lib_group(C: Cyclics) -> abelian.FgAbelianGroup | None:
    """The library group with the same generators, when ``C`` is already a divisor chain."""
    m = C.moduli
    if all(b % a == 0 for a, b in zip(m, m[1:])):
        return abelian.FgAbelianGroup(0, m)
    return None


def _lib_map(f: Map) -> abelian.GroupHom | None:
    S, T = _lib_group(f.source), _lib_group(f.target)
    if S is None or T is None:
        return None
    return abelian.GroupHom(S, T, f.columns())


def _map_from(doc: dict) -> Map:
    S, T = Cyclics(doc["source"]), Cyclics(doc["target"])
    cols = doc["matrix"]
    imgs = tuple(tuple(row[j] % T.moduli[i] for i, row in enumerate(cols)) for j in range(len(S.moduli)))
    return Map(S, T, imgs)


def _map_doc(f: Map) -> dict:
    return {"source": list(f.source.moduli), "target": list(f.target.moduli), "matrix": f.columns()}


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def verify_hom_census(bound: int) -> VerificationReport:
    """``|Hom(Z/m, Z/n)| = gcd(m, n)`` for all ``2 <= m, n <= bound``."""
    t0 = time.perf_counter()
    count = 0
    for m in range(2, bound + 1):
        for n in range(2, bound + 1):
            count += 1
            G, H = Cyclics((m,)), Cyclics((n,))
            brute = sum(1 for _ in maps(G, H))
            lib = abelian.count_homs(abelian.cyclic(m), abelian.cyclic(n))
            if not (brute == gcd(m, n) == lib):
                w = {"check": "hom-count", "m": m, "n": n, "brute": brute, "library": lib}
                return _report("hom-census", t0, count, w)
    return _report("hom-census", t0, count, bound=bound)


def _diagonal_census(suite: str, A: Cyclics, B: Cyclics, t0: float, extra: dict):
    """Every automorphism of ``A + B`` must have automorphism diagonal blocks."""
    S = A + B
    n = 0
    autos = 0
    for f in maps(S, S):
        n += 1
        if not f.is_bijective:
            continue
        autos += 1
        xx, _, _, yy = split(f, A, B)
        if not (xx.is_bijective and yy.is_bijective):
            w = {"check": "diagonal", "split": [list(A.moduli), list(B.moduli)], "map": _map_doc(f)}
            return n, autos, w
    return n, autos, None


def _hom_trivial_brute(G: Cyclics, H: Cyclics) -> bool:
    return all(f.is_zero for f in maps(G, H))


def verify_hom_vanishing(X: SpaceModel, Y: SpaceModel, k: int) -> VerificationReport:
    """Hom vanishing in one direction in every degree forces iso diagonals."""
    t0 = time.perf_counter()
    total = autos = 0
    per_degree = {}
    for i in range(2, k + 1):
        A = _finite(X.group(i), f"H_{i}({X})")
        B = _finite(Y.group(i), f"H_{i}({Y})")
        if A.order == 1 or B.order == 1:
            continue
        if not (_hom_trivial_brute(A, B) or _hom_trivial_brute(B, A)):
            raise SuiteRefused(f"degree {i}: Hom is nonzero in both directions, the criterion does not fire")
        n, a, w = _diagonal_census("hom-vanishing", A, B, t0, {})
        total += n
        autos += a
        per_degree[str(i)] = n
        if w:
            w["degree"] = i
            return _report("hom-vanishing", t0, total, w)
    return _report("hom-vanishing", t0, total, automorphisms=autos, per_degree=per_degree)


def _common_factor_brute(G: Cyclics, H: Cyclics) -> bool:
    """A common direct summand exists iff some composite ``G -> H -> G`` is a nonzero idempotent."""
    back = list(maps(H, G))
    for f in maps(G, H):
        for g in back:
            e = f.then(g)
            if not e.is_zero and e.then(e) == e:
                return True
    return False


def verify_no_common_factor(G: Any, H: Any) -> VerificationReport:
    """Finite groups without a common direct factor: automorphisms of the sum are diagonal-iso."""
    t0 = time.perf_counter()
    A, B = _finite(G, "G"), _finite(H, "H")
    if _common_factor_brute(A, B):
        raise SuiteRefused(f"{A} and {B} share a direct factor; the criterion does not fire")
    n, autos, w = _diagonal_census("no-common-factor", A, B, t0, {})
    S = A + B
    return _report("no-common-factor", t0, n, w, candidates=candidate_count(S, S), automorphisms=autos)


def verify_coprime_nilpotent(H: Any, G: Any) -> VerificationReport:
    """Every composite ``H -> G -> H`` is nilpotent.

    A free part of ``G`` is dropped: maps out of the finite group ``H`` land in
    the torsion subgroup, and maps from torsion back to ``H`` extend over the
    free summand.
    """
    t0 = time.perf_counter()
    A = _finite(H, "H")
    B, _ = as_cyclics(G)
    back = list(maps(B, A))
    n = 0
    for f in maps(A, B):
        for g in back:
            n += 1
            c = f.then(g)
            if not is_nilpotent_naive(c):
                w = {"check": "nilpotent", "composite": _map_doc(c), "there": _map_doc(f), "back": _map_doc(g)}
                return _report("coprime-nilpotent", t0, n, w)
    return _report("coprime-nilpotent", t0, n)


def verify_schur(G: Any, H: Any) -> VerificationReport:
    """Invertible sum with invertible XX: the Schur complement is invertible and
    ``YY = (phi_22)^-1 + YX XX^-1 XY`` where ``phi_22`` is the YY block of the inverse."""
    t0 = time.perf_counter()
    A, B = _finite(G, "G"), _finite(H, "H")
    S = A + B
    n = checked = 0
    for f in maps(S, S):
        n += 1
        if not f.is_bijective:
            continue
        xx, xy, yx, yy = split(f, A, B)
        if not xx.is_bijective:
            continue
        checked += 1
        through = xy.then(xx.inverse()).then(yx)  # YX XX^-1 XY as a map B -> B
        schur = yy - through
        phi22 = split(f.inverse(), A, B)[3]
        ok = schur.is_bijective and phi22.is_bijective and phi22.inverse() + through == yy
        if not ok:
            w = {"check": "schur", "split": [list(A.moduli), list(B.moduli)], "map": _map_doc(f)}
            return _report("schur", t0, n, w, checked=checked)
    return _report("schur", t0, n, checked=checked)


def verify_nilpotent_decider(bound: int) -> VerificationReport:
    """Library nilpotency test against naive iteration, groups with at most two invariant factors."""
    t0 = time.perf_counter()
    n = 0
    groups = groups_up_to(bound, max_factors=2)
    for chain in groups:
        C = Cyclics(chain)
        L = abelian.FgAbelianGroup(0, chain)
        for f in maps(C, C):
            n += 1
            lib = abelian.is_nilpotent(abelian.GroupHom._trusted(L, L, tuple(map(tuple, f.columns()))))
            if lib != is_nilpotent_naive(f):
                w = {"check": "nilpotent-agree", "map": _map_doc(f), "library": lib}
                return _report("nilpotent-decider", t0, n, w)
    return _report("nilpotent-decider", t0, n, groups=len(groups))


def _additive_generators(C: Cyclics) -> list[Map]:
    """Maps sending one generator to the smallest multiple of another that is allowed."""
    gens = []
    k = len(C.moduli)
    for j, mj in enumerate(C.moduli):
        for i, ni in enumerate(C.moduli):
            c = ni // gcd(mj, ni)
            imgs = tuple(
                tuple(c % ni if (jj == j and ii == i) else 0 for ii in range(k)) for jj in range(k)
            )
            gens.append(Map(C, C, imgs))
    return gens


def verify_end_commutative(bound: int, pairwise_limit: int = 256) -> VerificationReport:
    """Library commutativity test of ``End(G)`` against a direct check.

    Small endomorphism rings are checked on every pair; larger ones on pairs
    of additive generators, which suffices by bilinearity of composition.
    """
    t0 = time.perf_counter()
    groups = groups_up_to(bound)
    n = 0
    literal = 0
    for chain in groups:
        C = Cyclics(chain)
        end = list(maps(C, C)) if candidate_count(C, C) <= pairwise_limit else None
        pool = end if end is not None and len(end) <= pairwise_limit else _additive_generators(C)
        literal += pool is end
        brute = all(f.then(g) == g.then(f) for f in pool for g in pool)
        n += 1
        lib = abelian.is_end_commutative(abelian.FgAbelianGroup(0, chain))
        if brute != lib:
            w = {"check": "commutative-agree", "moduli": list(chain), "library": lib}
            return _report("end-commutative", t0, n, w)
    return _report("end-commutative", t0, n, pairwise_checked=literal)


def verify_quasi_regular_of_nilpotent(bound: int, end_cap: int = 70000) -> VerificationReport:
    """For nilpotent ``phi`` both ``Id - phi`` and ``Id + phi`` are bijections,
    and the library agrees that ``phi`` is quasi-regular."""
    t0 = time.perf_counter()
    n = 0
    skipped = []
    for chain in groups_up_to(bound):
        C = Cyclics(chain)
        if candidate_count(C, C) > end_cap:
            skipped.append(list(chain))
            continue
        L = abelian.FgAbelianGroup(0, chain)
        one = identity_map(C)
        for f in maps(C, C):
            if not is_nilpotent_naive(f):
                continue
            n += 1
            ok = (one - f).is_bijective and (one + f).is_bijective
            ok = ok and abelian.is_quasi_regular(abelian.GroupHom._trusted(L, L, tuple(map(tuple, f.columns()))))
            if not ok:
                w = {"check": "quasi-regular", "map": _map_doc(f)}
                return _report("quasi-regular", t0, n, w, skipped=skipped)
    return _report("quasi-regular", t0, n, skipped=skipped)


# ---------------------------------------------------------------------------
# Replay through the library
# ---------------------------------------------------------------------------

def _replay_nilpotent(w: dict) -> bool:
    c = _map_from(w["composite"])
    lib = _lib_map(c)
    naive = not is_nilpotent_naive(c)
    return naive and (lib is None or not abelian.is_nilpotent(lib))


def _replay_diagonal(w: dict) -> bool:
    A, B = (Cyclics(m) for m in w["split"])
    f = _map_from(w["map"])
    xx, _, _, yy = split(f, A, B)
    return f.is_bijective and not (xx.is_bijective and yy.is_bijective)


def _replay_schur(w: dict) -> bool:
    A, B = (Cyclics(m) for m in w["split"])
    f = _map_from(w["map"])
    xx, xy, yx, yy = split(f, A, B)
    through = xy.then(xx.inverse()).then(yx)
    phi22 = split(f.inverse(), A, B)[3]
    return not ((yy - through).is_bijective and phi22.is_bijective and phi22.inverse() + through == yy)


def _replay_agree(w: dict) -> bool:
    f = _map_from(w["map"])
    lib = _lib_map(f)
    return lib is not None and abelian.is_nilpotent(lib) != is_nilpotent_naive(f)


def _replay_hom_count(w: dict) -> bool:
    m, n = w["m"], w["n"]
    return abelian.count_homs(abelian.cyclic(m), abelian.cyclic(n)) != gcd(m, n)


def _replay_commutative(w: dict) -> bool:
    C = Cyclics(w["moduli"])
    pool = _additive_generators(C)
    brute = all(f.then(g) == g.then(f) for f in pool for g in pool)
    return abelian.is_end_commutative(abelian.FgAbelianGroup(0, tuple(w["moduli"]))) != brute


def _replay_quasi(w: dict) -> bool:
    f = _map_from(w["map"])
    one = identity_map(f.source)
    lib = _lib_map(f)
    return not ((one - f).is_bijective and (one + f).is_bijective and (lib is None or abelian.is_quasi_regular(lib)))


_REPLAY = {
    "nilpotent": _replay_nilpotent,
    "diagonal": _replay_diagonal,
    "schur": _replay_schur,
    "nilpotent-agree": _replay_agree,
    "hom-count": _replay_hom_count,
    "commutative-agree": _replay_commutative,
    "quasi-regular": _replay_quasi,
}

SUITES = {
    "hom-census": verify_hom_census,
    "nilpotent-decider": verify_nilpotent_decider,
    "end-commutative": verify_end_commutative,
    "quasi-regular": verify_quasi_regular_of_nilpotent,
}
