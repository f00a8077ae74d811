"""Minor expressions, face operators, and the face-intersection calculus.

A minor expression over a base matroid normalizes to the two-set form
"contract A, then restrict to C" with A and C disjoint.  Direct sums of
such terms with disjoint effective grounds form expressions; the face
operator, the odot product, and the interval lattice of nested
restrict/contract chains all live at this level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Matroid, direct_sum_all, labels_of, mask_of
from .errors import (
    GroundMismatch,
    MatroidError,
    NotAFace,
    NotAFlaceSequence,
)


class EmptyMatroid:
    """Distinguished sentinel for the matroid of the empty expression."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"

    def __bool__(self):
        return False


EMPTY = EmptyMatroid()


@dataclass(frozen=True)
class Minor:
    """Normalized minor expression M/contracted restricted to ground."""

    base: Matroid
    contracted: int
    ground: int

    def __post_init__(self):
        if self.contracted & self.ground:
            raise MatroidError("contracted set and ground must be disjoint")
        if (self.contracted | self.ground) & ~self.base.ground_mask:
            raise GroundMismatch("minor sets must lie in the base ground set")

    @classmethod
    def whole(cls, M: Matroid) -> "Minor":
        return cls(M, 0, M.ground_mask)

    def restrict(self, mask: int) -> "Minor":
        return Minor(self.base, self.contracted, self.ground & mask)

    def contract(self, mask: int) -> "Minor":
        if mask & ~self.ground:
            raise MatroidError("can only contract inside the current ground")
        return Minor(self.base, self.contracted | mask, self.ground & ~mask)

    @property
    def is_empty(self) -> bool:
        return self.ground == 0

    def matroid(self) -> Matroid | EmptyMatroid:
        if self.is_empty:
            return EMPTY
        return self.base.contract(self.contracted).restrict(self.ground)

    def rank(self) -> int:
        return self.base.r(self.contracted | self.ground) - self.base.r(self.contracted)

    def osubset(self, other: "Minor") -> bool:
        """The containment order: more contracted, smaller ground."""
        return (other.contracted & ~self.contracted == 0
                and self.ground & ~other.ground == 0)

    def olessthan(self, other: "Minor") -> bool:
        """Written as restrict-then-contract, smaller on both coordinates.

        self = M|_A/C with A = contracted|ground, C = contracted; likewise
        for other; compare A subset and C superset.
        """
        a, c = self.contracted | self.ground, self.contracted
        b, d = other.contracted | other.ground, other.contracted
        return a & ~b == 0 and d & ~c == 0

    def __repr__(self):
        c = "".join(map(str, labels_of(self.contracted))) or "-"
        g = "".join(map(str, labels_of(self.ground))) or "-"
        return f"M/{c}|{g}"


def minor_from_steps(M: Matroid, steps: Sequence[tuple[str, int]]) -> Minor:
    """Normalize a restrict/contract step sequence to canonical form."""
    cur = Minor.whole(M)
    for op, mask in steps:
        if op == "restrict":
            cur = cur.restrict(mask)
        elif op == "contract":
            cur = cur.contract(mask & cur.ground)
        else:
            raise MatroidError(f"unknown step {op!r}")
    return cur


@dataclass(frozen=True)
class Expr:
    """Reduced matroidal expression: direct sum of disjoint nonempty minors."""

    terms: tuple[Minor, ...]

    def __post_init__(self):
        seen = 0
        for t in self.terms:
            if t.is_empty:
                raise MatroidError("reduced expressions drop empty terms")
            if seen & t.ground:
                raise MatroidError("effective grounds must be pairwise disjoint")
            seen |= t.ground

    @classmethod
    def make(cls, terms: Iterable[Minor]) -> "Expr":
        kept = sorted((t for t in terms if not t.is_empty),
                      key=lambda t: (t.ground, t.contracted))
        return cls(tuple(kept))

    @classmethod
    def whole(cls, M: Matroid) -> "Expr":
        return cls.make([Minor.whole(M)])

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def effective_ground(self) -> int:
        g = 0
        for t in self.terms:
            g |= t.ground
        return g

    def rank(self) -> int:
        return sum(t.rank() for t in self.terms)

    def face(self, mask: int) -> "Expr":
        """Apply the face operator term by term."""
        out = []
        for t in self.terms:
            local = mask & t.ground
            out.append(t.contract(local))
            out.append(t.restrict(local))
        return Expr.make(out)

    def osubset(self, other: "Expr") -> bool:
        return all(any(t.osubset(u) for u in other.terms) for t in self.terms)

    def olessthan(self, other: "Expr") -> bool:
        return all(any(t.olessthan(u) for u in other.terms) for t in self.terms)

    def __repr__(self):
        return " + ".join(map(repr, self.terms)) if self.terms else "EMPTY_EXPR"


def phi(x: Expr | Minor) -> Matroid | EmptyMatroid:
    """Forgetful map: evaluate an expression to the matroid it represents."""
    if isinstance(x, Minor):
        return x.matroid()
    if x.is_empty:
        return EMPTY
    return direct_sum_all([t.matroid() for t in x.terms])


def face_operator(M: Matroid, mask: int) -> Expr:
    """The expression (M/F) + (M|F) whose polytope is the face x(F)=r(F)."""
    return Expr.whole(M).face(mask)


def face_matroid(M: Matroid, mask: int) -> Matroid:
    """Bases of M tight at x(F)=r(F); equals phi(face_operator(M, F))."""
    rk = M.r(mask)
    return Matroid(M.ground, [b for b in M.bases if (b & mask).bit_count() == rk],
                   _validated=True)


def odot(x: Expr, y: Expr) -> Expr:
    """Pairwise product (M/A|C) . (M/B|D) = M/(A|B)|(C&D), distributed."""
    out = []
    for t in x.terms:
        for u in y.terms:
            if t.base != u.base:
                raise GroundMismatch("odot needs a common base matroid")
            out.append(Minor(t.base, t.contracted | u.contracted, t.ground & u.ground))
    return Expr.make(out)


def odot_faces(M: Matroid, masks: Sequence[int]) -> Expr:
    acc = Expr.whole(M)
    for f in masks:
        acc = odot(acc, face_operator(M, f))
    return acc


def iterated_face(M: Matroid, masks: Sequence[int]) -> Expr:
    acc = Expr.whole(M)
    for f in masks:
        acc = acc.face(f)
    return acc


def face_intersect(M: Matroid, masks: Sequence[int], *, max_perms: int = 24):
    """Intersect the face matroids M(F_i).

    Returns ``(matroid_or_EMPTY, report)`` where the report records the six
    equivalent emptiness tests.  The base-set intersection is the ground
    truth; the product formula is cross-checked and any disagreement is an
    internal error.
    """
    masks = list(masks)
    ranks = [M.r(f) for f in masks]
    inter = frozenset(
        b for b in M.bases
        if all((b & f).bit_count() == rk for f, rk in zip(masks, ranks)))
    prod = odot_faces(M, masks)
    prod_m = phi(prod)

    perms = list(itertools.permutations(range(len(masks))))
    if len(perms) > max_perms:
        perms = perms[:max_perms]
    iterated = [phi(iterated_face(M, [masks[i] for i in p])) for p in perms]

    c1 = bool(inter)
    c2 = all(m == iterated[0] for m in iterated)
    c3 = any(not isinstance(m, EmptyMatroid) and m.bases == inter for m in iterated)
    c4 = (not isinstance(prod_m, EmptyMatroid)) and prod_m.bases == inter
    c5 = any(m == prod_m for m in iterated)
    c6 = prod.rank() == M.rank
    report = {"nonempty": c1, "order_free": c2, "iterated_matches": c3,
              "product_matches": c4, "product_is_iterated": c5, "full_rank": c6}
    if len({c1, c2, c3, c4, c5, c6}) != 1:
        raise AssertionError(f"face intersection conditions disagree: {report}")
    if len(masks) == 2:
        f, l = masks
        report["modular_pair"] = M.r(f) + M.r(l) == M.r(f | l) + M.r(f & l)
        if report["modular_pair"] != c1:
            raise AssertionError("modular pair test disagrees with intersection")
    if not c1:
        return EMPTY, report
    return Matroid(M.ground, inter, _validated=True), report


# -- flace sequences and flags --------------------------------------------


def minimal_nondegenerate_rep(N: Matroid, mask: int) -> int:
    """Inclusionwise minimal subset indexing the same facet as `mask`.

    Candidates are unions of components of the facet matroid that stay
    tight on all its bases.
    """
    rk = N.r(mask)
    facet_bases = frozenset(b for b in N.bases if (b & mask).bit_count() == rk)
    comps = Matroid(N.ground, facet_bases, _validated=True).components()
    reps = []
    for r in range(1, len(comps) + 1):
        for combo in itertools.combinations(comps, r):
            u = 0
            for c in combo:
                u |= c
            if u == N.ground_mask or u == 0:
                continue
            ru = N.r(u)
            tight = {b for b in N.bases if (b & u).bit_count() == ru}
            if tight == facet_bases:
                reps.append(u)
    minimal = [u for u in reps if not any(v != u and v & ~u == 0 for v in reps)]
    if len(minimal) != 1:
        raise MatroidError(f"expected a unique minimal representative, got {minimal}")
    return minimal[0]


def is_flace_sequence(M: Matroid, masks: Sequence[int], *, full: bool = True) -> bool:
    expr = Expr.whole(M)
    for f in masks:
        cur = phi(expr)
        if isinstance(cur, EmptyMatroid) or not cur.is_flat(f):
            return False
        nxt = expr.face(f)
        nxt_m = phi(nxt)
        if isinstance(nxt_m, EmptyMatroid):
            return False
        gain = nxt_m.kappa() - cur.kappa()
        if gain < 1 or (full and gain != 1):
            return False
        expr = nxt
    return True


def flace_to_flag(M: Matroid, masks: Sequence[int]) -> tuple[int, ...]:
    """Convert a full flace sequence into a nested flag with equal expression."""
    if not is_flace_sequence(M, masks, full=True):
        raise NotAFlaceSequence(f"not a full flace sequence: {[labels_of(f) for f in masks]}")
    flag: list[int] = []
    for f in masks:
        expr = iterated_face(M, flag)
        cur = phi(expr)
        fmin = minimal_nondegenerate_rep(cur, f)
        # locate the stratum [L_j, L_{j-1}] holding the minimal representative
        chain = [M.ground_mask] + flag + [0]
        placed = False
        for j in range(len(chain) - 1):
            hi, lo = chain[j], chain[j + 1]
            if fmin & ~hi == 0 and fmin & lo == 0:
                t = fmin | lo
                if M.is_flat(t) and lo != t != hi:
                    flag.insert(j, t)
                    placed = True
                    break
        if not placed:
            raise NotAFlaceSequence("flace step does not refine the flag")
    want = phi(iterated_face(M, masks))
    got = phi(iterated_face(M, flag))
    if want != got:
        raise AssertionError("flag does not evaluate to the flace expression")
    return tuple(flag)


# -- representatives of faces ----------------------------------------------


@dataclass(frozen=True)
class FaceRef:
    """A loopless face identified by its maximal tight flat collection."""

    base: Matroid
    flats: tuple[int, ...]
    bases: frozenset[int]

    def expr(self) -> Expr:
        return odot_faces(self.base, self.flats)

    def matroid(self) -> Matroid:
        return Matroid(self.base.ground, self.bases, _validated=True)

    def dim(self) -> int:
        return len(self.base.ground) - self.matroid().kappa()

    def codim(self) -> int:
        return self.base.ground_mask.bit_count() - self.base.kappa() - self.dim()

    def sort_key(self):
        return (len(self.bases), tuple(sorted(self.bases)))


def representative(M: Matroid, q_bases: Iterable[int]) -> FaceRef:
    """Canonical representative of a loopless face from its vertex set."""
    q = frozenset(q_bases)
    if not q or not q <= M.bases:
        raise NotAFace("vertex set must be a nonempty subset of the bases")
    union = 0
    for b in q:
        union |= b
    if union != M.ground_mask:
        raise NotAFace("face has loops")
    tight = []
    for f in M.flats():
        if f == 0 or f == M.ground_mask:
            continue
        rk = M.r(f)
        if all((b & f).bit_count() == rk for b in q):
            tight.append(f)
    cut = M.bases
    for f in tight:
        rk = M.r(f)
        cut = frozenset(b for b in cut if (b & f).bit_count() == rk)
    if cut != q:
        raise NotAFace("vertex set is not a loopless face")
    return FaceRef(M, tuple(sorted(tight)), q)


# -- lattice reconstruction -------------------------------------------------


def reconstruct_lattice(M: Matroid) -> frozenset[int]:
    """Rebuild the flat lattice using only non-degenerate flats and the
    loopless minimal faces they cut out; no closure or rank calls appear on
    the reconstruction side."""
    nondeg = [f for f in M.flats()
              if 0 != f != M.ground_mask and M.is_nondegenerate(f)]
    ranks = {f: M.r(f) for f in nondeg}
    # minimal loopless faces: intersect tight sets over maximal collections
    out = {0, M.ground_mask}
    for r in range(1, len(nondeg) + 1):
        for combo in itertools.combinations(nondeg, r):
            cur = M.bases
            for f in combo:
                cur = frozenset(b for b in cur if (b & f).bit_count() == ranks[f])
            if not cur:
                continue
            union = 0
            for b in cur:
                union |= b
            if union != M.ground_mask:
                continue
            out.update(_boolean_algebra(combo))
    return frozenset(out)


def _boolean_algebra(gens: Sequence[int]) -> set[int]:
    acc = set(gens)
    changed = True
    while changed:
        changed = False
        items = list(acc)
        for a in items:
            for b in items:
                for c in (a | b, a & b):
                    if c not in acc:
                        acc.add(c)
                        changed = True
    return acc


# -- the interval lattice of nested restrict/contract chains ----------------


@dataclass(frozen=True)
class WElement:
    """Direct sum of strata M|_upper/lower along a weakly decreasing flat
    chain; stored as the interval list [(lower, upper), ...] with the top
    interval reaching the full ground set."""

    base: Matroid
    intervals: tuple[tuple[int, int], ...]  # (lower, upper), upper descending

    def __post_init__(self):
        ivs = self.intervals
        if not ivs or ivs[0][1] != self.base.ground_mask:
            raise MatroidError("top interval must reach the ground set")
        prev_low = None
        for lo, up in ivs:
            if lo & ~up or lo == up:
                raise MatroidError("intervals must be strictly increasing pairs")
            if not (self.base.is_flat(lo) and self.base.is_flat(up)):
                raise MatroidError("interval endpoints must be flats")
            if prev_low is not None and up & ~prev_low:
                raise MatroidError("intervals must chain downward")
            prev_low = lo

    @classmethod
    def from_intervals(cls, M: Matroid, pairs: Iterable[tuple[int, int]]) -> "WElement":
        kept = sorted((p for p in pairs if p[0] != p[1]), key=lambda p: -p[1])
        return cls(M, tuple(kept))

    @classmethod
    def from_flats(cls, M: Matroid, flats: Sequence[int]) -> "WElement":
        """From the odd-length weakly decreasing chain (F_1, ..., F_{2m+1})."""
        chain = [M.ground_mask] + list(flats) + [0]
        pairs = [(chain[2 * i + 1], chain[2 * i]) for i in range((len(chain)) // 2)]
        return cls.from_intervals(M, pairs)

    @classmethod
    def whole(cls, M: Matroid) -> "WElement":
        return cls(M, ((0, M.ground_mask),))

    def flats_sequence(self) -> tuple[int, ...]:
        out = []
        for i, (lo, up) in enumerate(self.intervals):
            if i > 0:
                out.append(up)
            out.append(lo)
        return tuple(out)

    def expr(self) -> Expr:
        return Expr.make([Minor(self.base, lo, up & ~lo) for lo, up in self.intervals])

    def olessthan(self, other: "WElement") -> bool:
        return all(
            any(up & ~u2 == 0 and l2 & ~lo == 0 for l2, u2 in other.intervals)
            for lo, up in self.intervals)

    def perp(self) -> Expr:
        """The complementary strata, as a plain expression."""
        seq = [self.base.ground_mask] + list(self.flats_sequence()) + [0]
        comp = [(seq[i + 1], seq[i]) for i in range(1, len(seq) - 1, 2)]
        return Expr.make([Minor(self.base, lo, up & ~lo) for lo, up in comp])

    def extended(self) -> "WElement":
        """Fill in the complementary strata (the W-tilde completion)."""
        seq = [self.base.ground_mask] + list(self.flats_sequence()) + [0]
        pairs = [(seq[i + 1], seq[i]) for i in range(len(seq) - 1)]
        return WElement.from_intervals(self.base, pairs)

    def edim(self) -> int:
        return sum(self.base.r(up) - self.base.r(lo) - 1 for lo, up in self.intervals)

    def dim(self) -> int:
        m = phi(self.expr())
        if isinstance(m, EmptyMatroid):
            return -1
        loops = m.loops()
        if loops == m.ground_mask:
            return 0
        clean = m.delete(loops)
        return clean.rank - clean.kappa()

    def __repr__(self):
        return "W[" + ", ".join(
            f"{''.join(map(str, labels_of(lo))) or '-'}..{''.join(map(str, labels_of(up)))}"
            for lo, up in self.intervals) + "]"


def expr_to_welement(M: Matroid, x: Expr) -> WElement | None:
    """Interpret an expression as a chain of strata, if it is one."""
    pairs = []
    for t in x.terms:
        if t.base != M:
            return None
        lo, up = t.contracted, t.contracted | t.ground
        if not (M.is_flat(lo) and M.is_flat(up)):
            return None
        pairs.append((lo, up))
    pairs.sort(key=lambda p: -p[1])
    if not pairs or pairs[0][1] != M.ground_mask:
        return None
    for (lo, _), (_, up2) in zip(pairs, pairs[1:]):
        if up2 & ~lo:
            return None
    return WElement(M, tuple(pairs))


def w_join(a: WElement, b: WElement) -> WElement:
    """Least upper bound: merge overlapping strata until the chains nest."""
    if a.base != b.base:
        raise GroundMismatch("join needs a common base matroid")
    M = a.base
    items = list(dict.fromkeys(a.intervals + b.intervals))
    changed = True
    while changed:
        changed = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                (lo1, up1), (lo2, up2) = items[i], items[j]
                nested = (up1 & ~lo2 == 0) or (up2 & ~lo1 == 0)
                if not nested:
                    merged = (lo1 & lo2, M.closure(up1 | up2))
                    items[j] = merged
                    del items[i]
                    changed = True
                    break
            if changed:
                break
    return WElement.from_intervals(M, items)


def w_meet(a: WElement, b: WElement) -> WElement | EmptyMatroid:
    """Greatest lower bound: pairwise interval intersections; empty when the
    top strata miss each other."""
    if a.base != b.base:
        raise GroundMismatch("meet needs a common base matroid")
    M = a.base
    pairs = []
    for lo1, up1 in a.intervals:
        for lo2, up2 in b.intervals:
            lo = M.closure(lo1 | lo2)
            up = up1 & up2
            if lo & ~up == 0 and lo != up:
                pairs.append((lo, up))
    if not pairs or max(p[1] for p in pairs) != M.ground_mask:
        return EMPTY
    return WElement.from_intervals(M, pairs)
