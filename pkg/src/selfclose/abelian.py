"""Finitely generated abelian groups and the homomorphisms between them.

Groups are stored in invariant-factor form ``Z^r + Z/d_1 + ... + Z/d_t`` with
``d_1 | d_2 | ... | d_t``.  A homomorphism is an integer matrix whose rows are
indexed by the target generators and whose columns are indexed by the source
generators; free generators always come first, torsion generators follow in
ascending order of their moduli.

Everything is exact: entries are Python ints and nothing is ever rounded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, prod
from typing import Iterator, NamedTuple, Sequence

from sympy import factorint

from .errors import (
    IncompatibleHomomorphisms,
    InvalidPresentation,
    NotEnumerable,
    PreconditionViolation,
)

Matrix = tuple[tuple[int, ...], ...]


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------

def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


class _SNF:
    """In-place Smith reduction that also records the transforms and inverses."""

    def __init__(self, A: Sequence[Sequence[int]], nrows: int, ncols: int):
        self.m, self.n = nrows, ncols
        self.D = [[int(x) for x in row] for row in A]
        self.U = _identity(nrows)
        self.Uinv = _identity(nrows)
        self.V = _identity(ncols)
        self.Vinv = _identity(ncols)

    # row i <- row i - q * row t
    def row_sub(self, i, t, q):
        if not q:
            return
        for M in (self.D, self.U):
            ri, rt = M[i], M[t]
            for c in range(len(ri)):
                ri[c] -= q * rt[c]
        for row in self.Uinv:
            row[t] += q * row[i]

    # col j <- col j - q * col t
    def col_sub(self, j, t, q):
        if not q:
            return
        for M in (self.D, self.V):
            for row in M:
                row[j] -= q * row[t]
        rj, rt = self.Vinv[j], self.Vinv[t]
        for c in range(len(rt)):
            rt[c] += q * rj[c]

    def row_swap(self, i, t):
        if i == t:
            return
        for M in (self.D, self.U):
            M[i], M[t] = M[t], M[i]
        for row in self.Uinv:
            row[i], row[t] = row[t], row[i]

    def col_swap(self, j, t):
        if j == t:
            return
        for M in (self.D, self.V):
            for row in M:
                row[j], row[t] = row[t], row[j]
        self.Vinv[j], self.Vinv[t] = self.Vinv[t], self.Vinv[j]

    def row_neg(self, t):
        for M in (self.D, self.U):
            M[t] = [-x for x in M[t]]
        for row in self.Uinv:
            row[t] = -row[t]

    def run(self):
        D, m, n = self.D, self.m, self.n
        for t in range(min(m, n)):
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = D[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            self.row_swap(best[1], t)
            self.col_swap(best[2], t)
            while True:
                p = D[t][t]
                for i in range(t + 1, m):
                    self.row_sub(i, t, D[i][t] // p)
                for j in range(t + 1, n):
                    self.col_sub(j, t, D[t][j] // p)
                rest = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
                rest += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                if rest:
                    _, i, j = min(rest)
                    self.row_swap(i, t)
                    self.col_swap(j, t)
                    continue
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                self.row_sub(t, bad, -1)
            if D[t][t] < 0:
                self.row_neg(t)
        return self


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(U, D, V)`` with ``U*A*V == D`` and ``U``, ``V`` unimodular.

    ``D`` is diagonal with non-negative entries forming a divisibility chain
    (zeros last).  ``ncols`` is only needed when ``A`` has no rows.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    s = _SNF(A, m, n).run()
    return s.U, s.D, s.V


def _snf_diagonal(A: Sequence[Sequence[int]], nrows: int, ncols: int) -> list[int]:
    s = _SNF(A, nrows, ncols).run()
    return [s.D[i][i] for i in range(min(nrows, ncols))]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None) -> list[list[int]]:
    if not A:
        return []
    k = len(B) if inner is None else inner
    ncols = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(ncols)] for i in range(len(A))]


# --------------------------------------------------------------------------
# Groups
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^free_rank`` plus cyclic factors in canonical divisibility order."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise InvalidPresentation(f"negative free rank {self.free_rank}")
        ds = self.invariant_factors
        if any(d < 2 for d in ds):
            raise InvalidPresentation(f"invariant factors must be >= 2: {ds}")
        if any(b % a for a, b in zip(ds, ds[1:])):
            raise InvalidPresentation(f"not a divisibility chain: {ds}")

    @classmethod
    def parse(cls, text: str) -> FgAbelianGroup:
        return parse_group(text)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Order of each generator, 0 standing for an infinite cyclic one."""
        return (0,) * self.free_rank + self.invariant_factors

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        return prod(self.invariant_factors) if self.is_finite else None

    @property
    def torsion(self) -> FgAbelianGroup:
        return FgAbelianGroup(0, self.invariant_factors)

    def __str__(self):
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts)


TRIVIAL = FgAbelianGroup()
Z = FgAbelianGroup(1)


def cyclic(n: int) -> FgAbelianGroup:
    """``Z/n``; ``cyclic(0)`` is ``Z`` and ``cyclic(1)`` the trivial group."""
    if n == 0:
        return Z
    return canonicalize(0, [n])


def canonicalize(free_rank: int, raw_factors: Sequence[int]) -> FgAbelianGroup:
    """Bring ``Z^free_rank + sum Z/raw_factors`` into invariant-factor form."""
    if free_rank < 0:
        raise InvalidPresentation(f"negative free rank {free_rank}")
    powers: dict[int, list[int]] = {}
    for d in raw_factors:
        d = int(d)
        if d <= 0:
            raise InvalidPresentation(f"cyclic factor must be positive, got {d}")
        for p, e in factorint(d).items():
            powers.setdefault(p, []).append(p**e)
    length = max((len(v) for v in powers.values()), default=0)
    chain = [1] * length
    for qs in powers.values():
        qs.sort()
        for k, q in enumerate(qs):
            chain[length - len(qs) + k] *= q
    return FgAbelianGroup(free_rank, tuple(chain))


_TOKEN = re.compile(r"^(?:(0)|Z(?:\^(\d+))?|Z/(\d+)|\(Z/(\d+)\)\^(\d+))$")


def parse_group(text: str) -> FgAbelianGroup:
    """Parse strings like ``"Z^2 + Z/4 + (Z/2)^3"``.

    ``Z/2^3`` is rejected as ambiguous; write ``Z/8`` or ``(Z/2)^3``.
    """
    rank, factors = 0, []
    cleaned = text.replace(" ", "")
    if not cleaned:
        raise InvalidPresentation("empty group string")
    for tok in cleaned.split("+"):
        m = _TOKEN.match(tok)
        if not m:
            raise InvalidPresentation(f"cannot parse group summand {tok!r}")
        zero, zpow, mod, pmod, pexp = m.groups()
        if zero:
            continue
        if mod is not None:
            factors.append(int(mod))
        elif pmod is not None:
            factors += [int(pmod)] * int(pexp)
        else:
            rank += int(zpow) if zpow else 1
    return canonicalize(rank, factors)


def _factors_of(moduli: Sequence[int]) -> tuple[int, list[int]]:
    return sum(1 for d in moduli if d == 0), [d for d in moduli if d != 0]


@lru_cache(maxsize=4096)
def _canonical_iso(moduli: tuple[int, ...]):
    """Isomorphism between ``sum Z/moduli`` and its canonical form.

    Returns ``(group, to_canon, from_canon)`` where ``to_canon`` maps raw
    coordinates to canonical ones and ``from_canon`` goes back.
    """
    n = len(moduli)
    rel = [[moduli[i] if i == j else 0 for j in range(n)] for i in range(n)]
    s = _SNF(rel, n, n).run()
    diag = [s.D[i][i] for i in range(n)]
    keep = [i for i in range(n) if diag[i] == 0] + [i for i in range(n) if diag[i] > 1]
    group = FgAbelianGroup(sum(1 for d in diag if d == 0), tuple(diag[i] for i in keep if diag[i]))
    to_canon = tuple(tuple(s.U[i]) for i in keep)
    from_canon = tuple(tuple(s.Uinv[r][i] for i in keep) for r in range(n))
    return group, to_canon, from_canon


# --------------------------------------------------------------------------
# Homomorphisms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupHom:
    """A homomorphism ``source -> target`` given by an integer matrix."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: Matrix

    def __post_init__(self):
        rows = self.target.moduli
        cols = self.source.moduli
        mat = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(mat) != len(rows) or any(len(r) != len(cols) for r in mat):
            raise IncompatibleHomomorphisms(
                f"matrix shape does not match {self.source} -> {self.target}"
            )
        mat = tuple(
            tuple(x % n for x in row) if n else row for row, n in zip(mat, rows)
        )
        for i, n in enumerate(rows):
            for j, m in enumerate(cols):
                if m == 0:
                    continue
                x = mat[i][j]
                if (n == 0 and x) or (n and (x * m) % n):
                    raise InvalidPresentation(
                        f"entry ({i},{j})={x} does not define a map Z/{m} -> "
                        + ("Z" if n == 0 else f"Z/{n}")
                    )
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def _trusted(cls, source, target, matrix) -> GroupHom:
        """Skip validation for matrices that are well-defined by construction."""
        f = object.__new__(cls)
        object.__setattr__(f, "source", source)
        object.__setattr__(f, "target", target)
        object.__setattr__(f, "matrix", matrix)
        return f

    @property
    def is_endo(self) -> bool:
        return self.source == self.target

    def __matmul__(self, other: GroupHom) -> GroupHom:
        return compose(self, other)

    def __add__(self, other: GroupHom) -> GroupHom:
        return add(self, other)

    def __neg__(self) -> GroupHom:
        return GroupHom(self.source, self.target, tuple(tuple(-x for x in r) for r in self.matrix))

    def __sub__(self, other: GroupHom) -> GroupHom:
        return add(self, -other)

    def __pow__(self, k: int) -> GroupHom:
        if not self.is_endo:
            raise IncompatibleHomomorphisms("only endomorphisms have powers")
        result = identity(self.source)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __str__(self):
        return f"{self.source} -> {self.target} {[list(r) for r in self.matrix]}"


Endo = GroupHom


def endo(G: FgAbelianGroup, matrix: Sequence[Sequence[int]]) -> GroupHom:
    return GroupHom(G, G, tuple(tuple(r) for r in matrix))


def identity(G: FgAbelianGroup) -> GroupHom:
    return GroupHom(G, G, tuple(tuple(_identity(G.ngens)[i]) for i in range(G.ngens)))


def zero(G: FgAbelianGroup, H: FgAbelianGroup) -> GroupHom:
    return GroupHom(G, H, tuple((0,) * G.ngens for _ in range(H.ngens)))


def scalar(G: FgAbelianGroup, k: int) -> GroupHom:
    """Multiplication by ``k`` on ``G``."""
    n = G.ngens
    return GroupHom(G, G, tuple(tuple(k if i == j else 0 for j in range(n)) for i in range(n)))


def compose(f: GroupHom, g: GroupHom) -> GroupHom:
    """``f o g`` (apply ``g`` first)."""
    if g.target != f.source:
        raise IncompatibleHomomorphisms(f"cannot compose: {g.target} != {f.source}")
    if f.target.ngens == 0 or g.source.ngens == 0:
        return zero(g.source, f.target)
    prod_ = matmul(f.matrix, g.matrix, inner=f.source.ngens)
    mat = tuple(
        tuple(x % n for x in row) if n else tuple(row)
        for row, n in zip(prod_, f.target.moduli)
    )
    return GroupHom._trusted(g.source, f.target, mat)


def add(f: GroupHom, g: GroupHom) -> GroupHom:
    if f.source != g.source or f.target != g.target:
        raise IncompatibleHomomorphisms("cannot add maps with different source/target")
    return GroupHom(
        f.source, f.target, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(f.matrix, g.matrix))
    )


def _relation_columns(G: FgAbelianGroup) -> list[list[int]]:
    """Matrix whose columns are the torsion relations of ``G``."""
    n = G.ngens
    cols = [i for i, d in enumerate(G.moduli) if d]
    return [[G.moduli[i] if i == c else 0 for c in cols] for i in range(n)]


def cokernel(f: GroupHom) -> FgAbelianGroup:
    H = f.target
    n = H.ngens
    rel = _relation_columns(H)
    aug = [list(f.matrix[i]) + rel[i] for i in range(n)]
    ncols = f.source.ngens + len(rel[0] if rel else [])
    diag = _snf_diagonal(aug, n, ncols)
    rank = sum(1 for d in diag if d)
    return canonicalize(n - rank, [d for d in diag if d > 1])


def image_order(f: GroupHom) -> int:
    """Order of the image of ``f``; the target must be finite."""
    if not f.target.is_finite:
        raise PreconditionViolation("image_order needs a finite target")
    return f.target.order // cokernel(f).order


def is_surjective(f: GroupHom) -> bool:
    return cokernel(f).is_trivial


@lru_cache(maxsize=1024)
def _primes(n: int) -> tuple[int, ...]:
    return tuple(sorted(factorint(n)))


def _det(M: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


determinant = _det


def _full_rank_mod_p(M: list[list[int]], p: int) -> bool:
    n = len(M)
    A = [[x % p for x in row] for row in M]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return False
        A[c], A[piv] = A[piv], A[c]
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            if A[r][c]:
                q = A[r][c] * inv % p
                A[r] = [(x - q * y) % p for x, y in zip(A[r], A[c])]
    return True


def is_isomorphism(f: GroupHom) -> bool:
    """Decide bijectivity of ``f``.

    Torsion is a characteristic subgroup, so an endomorphism is invertible iff
    its free block is unimodular and its torsion block is surjective; the latter
    is tested prime by prime on ``T/pT``.  Finitely generated abelian groups
    are Hopfian, so surjectivity between isomorphic groups suffices.
    """
    if f.source != f.target:
        return False
    G = f.source
    r = G.free_rank
    if r and abs(_det(_block(f, range(r), range(r)))) != 1:
        return False
    if G.invariant_factors:
        mods = G.moduli
        for p in _primes(G.invariant_factors[-1]):
            idx = [i for i in range(r, G.ngens) if mods[i] % p == 0]
            if not _full_rank_mod_p(_block(f, idx, idx), p):
                return False
    return True


def inverse(f: GroupHom) -> GroupHom:
    if f.source != f.target:
        raise PreconditionViolation("inverse only implemented for endomorphisms")
    G = f.source
    n = G.ngens
    if n == 0:
        return f
    rel = _relation_columns(G)
    aug = [list(f.matrix[i]) + rel[i] for i in range(n)]
    ncols = n + len(rel[0])
    s = _SNF(aug, n, ncols).run()
    if any(s.D[i][i] != 1 for i in range(n)):
        raise PreconditionViolation(f"{f} is not an isomorphism")
    # aug * (V[:, :n] * U) == I, so the top block is a right inverse mod relations
    W = matmul([row[:n] for row in s.V[:n]], s.U)
    g = GroupHom(G, G, tuple(tuple(r) for r in W))
    if not (f @ g == identity(G) and g @ f == identity(G)):
        raise PreconditionViolation(f"{f} is not an isomorphism")
    return g


# --------------------------------------------------------------------------
# Group constructions
# --------------------------------------------------------------------------

class DirectSum(NamedTuple):
    group: FgAbelianGroup
    inject_first: GroupHom
    inject_second: GroupHom
    project_first: GroupHom
    project_second: GroupHom


def direct_sum(G: FgAbelianGroup, H: FgAbelianGroup) -> DirectSum:
    S, to_canon, from_canon = _canonical_iso(G.moduli + H.moduli)
    a = G.ngens
    iG = GroupHom(G, S, tuple(row[:a] for row in to_canon))
    iH = GroupHom(H, S, tuple(row[a:] for row in to_canon))
    pG = GroupHom(S, G, from_canon[:a])
    pH = GroupHom(S, H, from_canon[a:])
    return DirectSum(S, iG, iH, pG, pH)


def direct_sum_group(*groups: FgAbelianGroup) -> FgAbelianGroup:
    rank = sum(g.free_rank for g in groups)
    return canonicalize(rank, [d for g in groups for d in g.invariant_factors])


def _pairwise(G: FgAbelianGroup, H: FgAbelianGroup, rule) -> FgAbelianGroup:
    rank, factors = 0, []
    for m in G.moduli:
        for n in H.moduli:
            d = rule(m, n)
            if d == 0:
                rank += 1
            elif d is not None and d > 1:
                factors.append(d)
    return canonicalize(rank, factors)


def hom_group(G: FgAbelianGroup, H: FgAbelianGroup) -> FgAbelianGroup:
    """``Hom(G, H)``: Hom(Z,A)=A, Hom(Z/m,Z)=0, Hom(Z/m,Z/n)=Z/gcd(m,n)."""
    def rule(m, n):
        if m == 0:
            return n
        if n == 0:
            return None
        return gcd(m, n)
    return _pairwise(G, H, rule)


def is_hom_trivial(G: FgAbelianGroup, H: FgAbelianGroup) -> bool:
    return hom_group(G, H).is_trivial


def tensor(G: FgAbelianGroup, H: FgAbelianGroup) -> FgAbelianGroup:
    return _pairwise(G, H, lambda m, n: gcd(m, n))


def tor(G: FgAbelianGroup, H: FgAbelianGroup) -> FgAbelianGroup:
    return _pairwise(G, H, lambda m, n: gcd(m, n) if m and n else None)


def primary_decomposition(G: FgAbelianGroup) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Free rank and the sorted multiset of prime powers ``(p, r)``."""
    pairs = [(p, e) for d in G.invariant_factors for p, e in factorint(d).items()]
    return G.free_rank, tuple(sorted(pairs))


def has_common_direct_factor(G: FgAbelianGroup, H: FgAbelianGroup) -> bool:
    rg, pg = primary_decomposition(G)
    rh, ph = primary_decomposition(H)
    return (rg > 0 and rh > 0) or bool(set(pg) & set(ph))


# --------------------------------------------------------------------------
# Enumeration
# --------------------------------------------------------------------------

def _entry_choices(n: int, m: int) -> range:
    """Admissible entries for a Z/m column (m=0: Z) in a Z/n row (n=0: Z)."""
    if n == 0:
        if m == 0:
            raise NotEnumerable("Hom(Z, Z) is infinite")
        return range(1)
    if m == 0:
        return range(n)
    return range(0, n, n // gcd(n, m))


def count_homs(G: FgAbelianGroup, H: FgAbelianGroup) -> int | None:
    """``|Hom(G, H)|``, or ``None`` when it is infinite."""
    if G.free_rank and H.free_rank:
        return None
    return prod(len(_entry_choices(n, m)) for n in H.moduli for m in G.moduli)


def enumerate_homs(G: FgAbelianGroup, H: FgAbelianGroup) -> Iterator[GroupHom]:
    """Every homomorphism ``G -> H`` exactly once, in row-major lexicographic order."""
    if G.free_rank and H.free_rank:
        raise NotEnumerable(f"Hom({G}, {H}) is infinite")
    choices = [_entry_choices(n, m) for n in H.moduli for m in G.moduli]
    k = G.ngens
    for entries in product(*choices):
        rows = tuple(tuple(entries[i * k:(i + 1) * k]) for i in range(H.ngens))
        yield GroupHom._trusted(G, H, rows)


def enumerate_endos(G: FgAbelianGroup) -> Iterator[GroupHom]:
    return enumerate_homs(G, G)


# --------------------------------------------------------------------------
# Endomorphism-ring predicates
# --------------------------------------------------------------------------

def _block(f: GroupHom, rows: range, cols: range) -> list[list[int]]:
    return [[f.matrix[i][j] for j in cols] for i in rows]


def is_nilpotent(phi: GroupHom) -> bool:
    """Decide whether some power of ``phi`` vanishes.

    The free quotient block must be a nilpotent integer matrix; after ``r``
    steps the image lies in the torsion subgroup, where the descending chain of
    images is followed until it stabilises.
    """
    if not phi.is_endo:
        raise PreconditionViolation("is_nilpotent expects an endomorphism")
    G = phi.source
    r = G.free_rank
    if r:
        A = _block(phi, range(r), range(r))
        P = A
        for _ in range(r - 1):
            P = matmul(P, A)
        if any(any(row) for row in P):
            return False
    T = G.torsion
    if T.is_trivial:
        return True
    idx = range(r, G.ngens)
    c = GroupHom(T, T, tuple(tuple(row) for row in _block(phi, idx, idx)))
    size = T.order
    power = c
    while True:
        nxt = image_order(power)
        if nxt == 1:
            return True
        if nxt == size:
            return False
        size = nxt
        power = power @ c


def is_quasi_regular(phi: GroupHom) -> bool:
    return is_isomorphism(identity(phi.source) - phi)


def is_end_commutative(G: FgAbelianGroup) -> bool:
    return G.ngens <= 1


def end_order(G: FgAbelianGroup) -> int | None:
    return count_homs(G, G)


def _radical_brute_force(phi: GroupHom) -> bool:
    G = phi.source
    ring = list(enumerate_endos(G))
    left = {psi @ phi for psi in ring}
    products = {x @ rho for x in left for rho in ring}
    one = identity(G)
    return all(is_isomorphism(one + x) for x in products)


def is_radical(phi: GroupHom, budget: int = 256) -> bool | None:
    """Membership of ``phi`` in the Jacobson radical of ``End(G)``.

    Returns ``None`` when neither the fast paths nor a brute force over
    ``End(G)`` (allowed when ``|End(G)| <= budget``) can settle it.
    """
    if not phi.is_endo:
        raise PreconditionViolation("is_radical expects an endomorphism")
    G = phi.source
    if is_end_commutative(G):
        # End(G) is Z or Z/n; there the radical is exactly the nilradical
        return is_nilpotent(phi)
    if not is_isomorphism(identity(G) + phi):
        return False
    size = end_order(G)
    if size is not None and size <= budget:
        return _radical_brute_force(phi)
    return None
