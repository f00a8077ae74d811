"""Base and independence polytopes as combinatorial objects.

No numeric geometry happens here: a polytope is its vertex set of base
indicator masks, faces are tight subsets, and facet containment replaces
linear programming.  This keeps everything exact and deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Matroid, labels_of, mask_of
from .errors import HasLoops, MatroidError, NotARidge
from .expressions import (
    EMPTY,
    EmptyMatroid,
    Expr,
    Minor,
    face_matroid,
    minimal_nondegenerate_rep,
    phi,
    representative,
)


def vertices(M: Matroid) -> tuple[tuple[int, ...], ...]:
    """Indicator vectors of the bases, in canonical order."""
    return tuple(tuple(1 if b >> x & 1 else 0 for x in M.ground)
                 for b in M.bases_sorted)


def dim_bp(M: Matroid) -> int:
    return M.size - M.kappa()


def dim_ip(M: Matroid) -> int:
    return M.size - M.loops().bit_count()


def subset_distance(a: int, b: int) -> Fraction:
    return Fraction((a ^ b).bit_count(), 2)


def partition_distance(parts_a: Sequence[int], parts_b: Sequence[int]) -> Fraction:
    """Min-matching distance between two partitions into equally many blocks."""
    if len(parts_a) != len(parts_b):
        raise MatroidError("partitions must have the same number of blocks")
    best = None
    for perm in itertools.permutations(range(len(parts_b))):
        tot = sum((subset_distance(parts_a[i], parts_b[perm[i]])
                   for i in range(len(parts_a))), Fraction(0))
        if best is None or tot < best:
            best = tot
    return best


@dataclass(frozen=True)
class Facet:
    """A facet of a base polytope: minimal tight subset and its vertex set."""

    rep: int                 # inclusionwise minimal non-degenerate subset
    rank: int                # r_M(rep)
    bases: frozenset[int]
    is_flat: bool

    def sort_key(self):
        return (self.rep.bit_count(), self.rep)


def facets(M: Matroid) -> tuple[Facet, ...]:
    """All facets of BP_M, one entry per facet, minimal representatives.

    For an inseparable matroid the candidates are the proper flats with
    inseparable restriction and contraction, plus the deletion subsets
    E - {i} with inseparable M\\i (these give the loopy coordinate facets).
    Separable matroids lift facets componentwise.
    """
    if "facets" in M._cache:
        return M._cache["facets"]
    comps = M.components()
    out: dict[frozenset[int], Facet] = {}

    def consider(mask: int):
        rk = M.r(mask)
        tight = frozenset(b for b in M.bases if (b & mask).bit_count() == rk)
        if not tight or tight == M.bases:
            return
        key = tight
        if key in out:
            return
        rep = minimal_nondegenerate_rep(M, mask)
        out[key] = Facet(rep, M.r(rep), tight, M.is_flat(rep))

    for comp in comps:
        sub = M.restrict(comp)
        if sub.size <= 1:
            continue
        for f in sub.flats():
            if f == 0 or f == comp:
                continue
            if sub.restrict(f).is_inseparable() and sub.contract(f).is_inseparable():
                consider(f)
        for x in labels_of(comp):
            rest = comp & ~(1 << x)
            if sub.restrict(rest).is_inseparable():
                consider((M.ground_mask & ~comp) | rest)
    result = tuple(sorted(out.values(), key=Facet.sort_key))
    M._cache["facets"] = result
    return result


def loopless_facets(M: Matroid) -> tuple[Facet, ...]:
    return tuple(f for f in facets(M)
                 if _union(f.bases) == M.ground_mask)


def _union(sets: Iterable[int]) -> int:
    u = 0
    for s in sets:
        u |= s
    return u


@dataclass(frozen=True)
class InequalitySystem:
    """Describing system of IP_M or BP_M over the nonnegative orthant."""

    kind: str  # "IP" or "BP"
    equalities: tuple[tuple[int, int], ...]
    upper_bounds: tuple[tuple[int, int], ...]   # relevant: 0 < r(F) < |F|
    unit_bounds: tuple[int, ...]                # singleton flats, x_i <= 1

    def all_bounds(self) -> tuple[tuple[int, int], ...]:
        return self.upper_bounds + tuple((f, f.bit_count()) for f in self.unit_bounds)

    def admits_mask(self, mask: int) -> bool:
        for f, c in self.equalities:
            if (mask & f).bit_count() != c:
                return False
        return all((mask & f).bit_count() <= c for f, c in self.all_bounds())


def inequality_system(M: Matroid, which: str = "BP") -> InequalitySystem:
    """Minimal describing system; `which` selects the polytope.

    The BP system carries one equality per connected component and the
    relevant essential bounds (minimal non-degenerate flats F with
    0 < r(F) < |F|).  The IP system instead needs a bound for every flat
    with inseparable restriction, including degenerate rank-1 flats.
    """
    if not M.is_loopless():
        raise HasLoops("inequality systems are stated for loopless matroids")
    if which == "BP":
        eqs = tuple((c, M.r(c)) for c in M.components())
        rel, unit = [], []
        for f in facets(M):
            if not f.is_flat:
                continue  # coordinate facet x_i >= 0, carried by nonneg
            if f.rank < f.rep.bit_count():
                rel.append((f.rep, f.rank))
            else:
                unit.append(f.rep)
        return InequalitySystem("BP", eqs, tuple(sorted(rel)), tuple(sorted(unit)))
    if which == "IP":
        rel, unit = [], []
        for f in M.flats():
            if f == 0:
                continue
            if not M.restrict(f).is_inseparable():
                continue
            rk = M.r(f)
            if rk < f.bit_count():
                rel.append((f, rk))
            else:
                unit.append(f)
        return InequalitySystem("IP", (), tuple(sorted(rel)), tuple(sorted(unit)))
    raise MatroidError(f"unknown polytope kind {which!r}")


@dataclass(frozen=True)
class RidgeClass:
    """Classification of a loopless codimension-2 face cut by two flats."""

    case: str  # DisjointFlats | CoveringFlats | NestedFlats
    F: int
    L: int
    A: int
    T: int
    bases: frozenset[int]


def ridge_classify(M: Matroid, F: int, L: int) -> RidgeClass:
    """Decide which of the three loopless-ridge cases (F, L) falls into and
    return the witnesses; cross-checks the stated matroid decomposition."""
    if not M.is_inseparable() or M.rank < 3:
        raise NotARidge("classification needs an inseparable matroid of rank >= 3")
    if F == L or not (M.is_nondegenerate(F) and M.is_nondegenerate(L)):
        raise NotARidge("arguments must be distinct non-degenerate flats")
    nf, nl = face_matroid(M, F), face_matroid(M, L)
    inter = nf.bases & nl.bases
    if not inter:
        raise NotARidge("face matroids do not intersect")
    Q = Matroid(M.ground, inter, _validated=True)
    if _union(inter) != M.ground_mask or Q.kappa() != M.kappa() + 2:
        raise NotARidge("intersection is not a loopless codimension-2 face")
    gm = M.ground_mask
    if F & L == 0:
        case, A, T = "DisjointFlats", L, F
        decomposition = Expr.make([Minor(M, 0, F), Minor(M, 0, L),
                                   Minor(M, F | L, gm & ~(F | L))])
    elif F | L == gm:
        case, A, T = "CoveringFlats", F & L, F & L
        decomposition = Expr.make([Minor(M, 0, F & L), Minor(M, F, L & ~F),
                                   Minor(M, L, F & ~L)])
    elif F & ~L == 0:
        case, A, T = "NestedFlats", L & ~F, F
        decomposition = Expr.make([Minor(M, L, gm & ~L), Minor(M, F, L & ~F),
                                   Minor(M, 0, F)])
    elif L & ~F == 0:
        case, A, T = "NestedFlats", F & ~L, L
        decomposition = Expr.make([Minor(M, F, gm & ~F), Minor(M, L, F & ~L),
                                   Minor(M, 0, L)])
    else:
        raise NotARidge("flats are crossing; the intersection is not a ridge")
    dec = phi(decomposition)
    if isinstance(dec, EmptyMatroid) or dec.bases != inter:
        raise AssertionError("ridge decomposition mismatch")
    # the A/T witnesses are the minimal tight representatives inside each facet
    got_a = minimal_nondegenerate_rep(nf, A)
    got_t = minimal_nondegenerate_rep(nl, T)
    if {b for b in nf.bases if (b & got_a).bit_count() == nf.r(got_a)} != inter:
        raise AssertionError("A witness is not tight on the ridge")
    if {b for b in nl.bases if (b & got_t).bit_count() == nl.r(got_t)} != inter:
        raise AssertionError("T witness is not tight on the ridge")
    return RidgeClass(case, F, L, got_a, got_t, inter)


@dataclass(frozen=True)
class MinimalFace:
    """Intersection of all facets containing a vertex subset."""

    bases: frozenset[int]
    tight_reps: tuple[int, ...]

    def is_face_of(self, V: frozenset[int]) -> bool:
        return self.bases == V


def minimal_face_containing(M: Matroid, V: Iterable[int]) -> MinimalFace:
    V = frozenset(V)
    if not V or not V <= M.bases:
        raise MatroidError("V must be a nonempty subset of the bases")
    cur = M.bases
    reps = []
    for f in facets(M):
        if V <= f.bases:
            cur &= f.bases
            reps.append(f.rep)
    return MinimalFace(cur, tuple(sorted(reps)))


@dataclass(frozen=True)
class FittingResult:
    kind: str  # "disjoint" | "common_face" | "not_fitting"
    common: frozenset[int] | None = None

    @property
    def fits(self) -> bool:
        return self.kind != "not_fitting"


def face_fitting(M: Matroid, N: Matroid) -> FittingResult:
    """Do BP_M and BP_N meet in a common face?

    The intersection polytope is the base intersection; it is a common face
    exactly when it equals the minimal face containing it on both sides.
    """
    if M.ground != N.ground or M.rank != N.rank:
        raise MatroidError("face fitting is for polytopes in one hypersimplex")
    common = M.bases & N.bases
    if not common:
        return FittingResult("disjoint")
    if (minimal_face_containing(M, common).bases == common
            and minimal_face_containing(N, common).bases == common):
        return FittingResult("common_face", common)
    return FittingResult("not_fitting")


def loopless_face_base_sets(M: Matroid) -> frozenset[frozenset[int]]:
    """Vertex sets of all loopless faces of BP_M (the whole polytope included)."""
    if "loopless_faces" in M._cache:
        return M._cache["loopless_faces"]
    seen = {M.bases}
    queue = [M.bases]
    while queue:
        cur = queue.pop()
        sub = Matroid(M.ground, cur, _validated=True)
        for f in facets(sub):
            if _union(f.bases) != M.ground_mask:
                continue
            if f.bases not in seen:
                seen.add(f.bases)
                queue.append(f.bases)
    out = frozenset(seen)
    M._cache["loopless_faces"] = out
    return out


def face_ref_of(M: Matroid, bases: Iterable[int]):
    """Canonical representative for a loopless face; see `representative`."""
    return representative(M, bases)
