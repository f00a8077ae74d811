"""Canonical finite matroids on small ground sets.

A matroid is stored by its ground set (a sorted tuple of small integer
labels) and its base collection (bitmasks over the labels).  Everything
else -- rank function, flats, circuits, connected components, duals,
minors -- is derived on demand and cached.  All values are immutable
after construction, so instances can be shared freely.

Subsets of the ground set are plain ints used as bitmasks: bit ``i`` set
means label ``i`` is in the subset.  Labels are capped at 64 so a mask
always fits a machine word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    BepViolation,
    GroundMismatch,
    GroundOverlap,
    InvalidRank,
    MatroidError,
    UnequalBaseSizes,
)

DEFAULT_GROUND_CAP = 32
MAX_GROUND_CAP = 64


def mask_of(labels: Iterable[int]) -> int:
    m = 0
    for x in labels:
        m |= 1 << x
    return m


def labels_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def submasks(mask: int):
    """All submasks of `mask`, including 0 and mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def ground_range(n: int) -> tuple[int, ...]:
    """The standard ground set {1, ..., n}."""
    return tuple(range(1, n + 1))


@dataclass(frozen=True)
class SetMap:
    """A total map between two ground sets, given label by label."""

    domain: tuple[int, ...]
    codomain: tuple[int, ...]
    image: tuple[int, ...]  # image[i] = f(domain[i])

    def __post_init__(self):
        if len(self.image) != len(self.domain):
            raise GroundMismatch("image must list one codomain label per domain label")
        cod = set(self.codomain)
        for y in self.image:
            if y not in cod:
                raise GroundMismatch(f"image label {y} not in codomain")

    @classmethod
    def from_dict(cls, mapping: dict[int, int], codomain: Iterable[int] | None = None) -> "SetMap":
        dom = tuple(sorted(mapping))
        img = tuple(mapping[x] for x in dom)
        cod = tuple(sorted(set(codomain))) if codomain is not None else tuple(sorted(set(img)))
        return cls(dom, cod, img)

    def __call__(self, x: int) -> int:
        return self.image[self.domain.index(x)]

    def apply_mask(self, mask: int) -> int:
        out = 0
        for x, y in zip(self.domain, self.image):
            if mask >> x & 1:
                out |= 1 << y
        return out

    def fiber_mask(self, mask: int) -> int:
        """Preimage of a codomain subset."""
        out = 0
        for x, y in zip(self.domain, self.image):
            if mask >> y & 1:
                out |= 1 << x
        return out

    def is_injective_on(self, mask: int) -> bool:
        seen = 0
        for x, y in zip(self.domain, self.image):
            if mask >> x & 1:
                if seen >> y & 1:
                    return False
                seen |= 1 << y
        return True


@dataclass(frozen=True)
class Graph:
    """A multigraph given by a vertex count and labeled edges."""

    vertices: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise MatroidError("edge endpoint out of range")
        if self.labels is not None and len(self.labels) != len(self.edges):
            raise MatroidError("one label per edge required")

    def edge_labels(self) -> tuple[int, ...]:
        if self.labels is not None:
            return self.labels
        return tuple(range(1, len(self.edges) + 1))


def _check_bep(bases: frozenset[int]) -> None:
    """Exhaustive base exchange check; raises BepViolation on failure."""
    blist = list(bases)
    for A in blist:
        for B in blist:
            if A == B:
                continue
            diff = A & ~B
            x = diff
            while x:
                low = x & -x
                x ^= low
                candidates = B & ~A
                ok = False
                y = candidates
                while y:
                    ylow = y & -y
                    y ^= ylow
                    if (A ^ low) | ylow in bases:
                        ok = True
                        break
                if not ok:
                    raise BepViolation(labels_of(A), labels_of(B), low.bit_length() - 1)


class Matroid:
    """A matroid as (ground labels, rank, canonical base list)."""

    def __init__(self, ground: Sequence[int], bases: Iterable[int], *, _validated: bool = False):
        ground = tuple(sorted(ground))
        bases = frozenset(bases)
        if not bases:
            raise MatroidError("base collection must be nonempty")
        gm = mask_of(ground)
        if len(ground) != gm.bit_count():
            raise MatroidError("ground labels must be distinct")
        sizes = {b.bit_count() for b in bases}
        if len(sizes) != 1:
            raise UnequalBaseSizes(f"base sizes {sorted(sizes)}")
        for b in bases:
            if b & ~gm:
                raise MatroidError("base not contained in ground set")
        self.ground = ground
        self.ground_mask = gm
        self.rank = next(iter(sizes))
        self.bases = bases
        self._hash = hash((ground, bases))
        self._cache: dict = {}
        if not _validated:
            _check_bep(bases)

    # -- construction -------------------------------------------------

    @classmethod
    def from_bases(cls, ground: Sequence[int], bases: Iterable[Iterable[int] | int],
                   cap: int = DEFAULT_GROUND_CAP) -> "Matroid":
        """Validating constructor; bases may be masks or label iterables."""
        ground = tuple(sorted(ground))
        if len(ground) > min(cap, MAX_GROUND_CAP):
            raise MatroidError(f"ground set larger than cap {cap}")
        if any(x < 0 or x >= MAX_GROUND_CAP for x in ground):
            raise MatroidError("labels must be small non-negative integers")
        norm = []
        for b in bases:
            norm.append(b if isinstance(b, int) else mask_of(b))
        return cls(ground, norm)

    @classmethod
    def uniform(cls, k: int, ground: Sequence[int] | int) -> "Matroid":
        if isinstance(ground, int):
            ground = ground_range(ground)
        ground = tuple(sorted(ground))
        if not 0 <= k <= len(ground):
            raise InvalidRank(f"rank {k} out of range for {len(ground)} elements")
        bases = [mask_of(c) for c in itertools.combinations(ground, k)]
        return cls(ground, bases, _validated=True)

    @classmethod
    def graphic(cls, graph: Graph) -> "Matroid":
        """Cycle matroid of a multigraph; bases are maximal spanning forests."""
        labels = graph.edge_labels()
        m = len(graph.edges)
        best = -1
        bases: list[int] = []
        for size in range(min(m, graph.vertices), -1, -1):
            for combo in itertools.combinations(range(m), size):
                parent = list(range(graph.vertices))

                def find(a):
                    while parent[a] != a:
                        parent[a] = parent[parent[a]]
                        a = parent[a]
                    return a

                acyclic = True
                for idx in combo:
                    u, v = graph.edges[idx]
                    ru, rv = find(u), find(v)
                    if ru == rv:
                        acyclic = False
                        break
                    parent[ru] = rv
                if acyclic:
                    bases.append(mask_of(labels[i] for i in combo))
            if bases:
                best = size
                break
        if best < 0:
            bases = [0]
        return cls(tuple(sorted(labels)), bases, _validated=True)

    @classmethod
    def partition(cls, blocks: Sequence[Iterable[int]], k: int) -> "Matroid":
        """Partition matroid: pull the rank-k uniform matroid back along
        the map collapsing each block to a point."""
        blocks = [tuple(sorted(b)) for b in blocks]
        ground = tuple(sorted(x for b in blocks for x in b))
        if len(ground) != len(set(ground)):
            raise MatroidError("blocks must be disjoint")
        block_labels = tuple(range(len(blocks)))
        mapping = {x: i for i, b in enumerate(blocks) for x in b}
        f = SetMap(ground, block_labels, tuple(mapping[x] for x in ground))
        return pullback(f, cls.uniform(k, block_labels))

    # -- identity -----------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Matroid) and self.ground == other.ground
                and self.bases == other.bases)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        bs = ",".join("".join(map(str, labels_of(b))) for b in self.bases_sorted[:6])
        more = "..." if len(self.bases) > 6 else ""
        return f"Matroid(ground={list(self.ground)}, rank={self.rank}, bases=[{bs}{more}])"

    @property
    def size(self) -> int:
        return len(self.ground)

    @property
    def bases_sorted(self) -> tuple[int, ...]:
        if "bases_sorted" not in self._cache:
            self._cache["bases_sorted"] = tuple(sorted(self.bases))
        return self._cache["bases_sorted"]

    # -- rank and closure ---------------------------------------------

    def r(self, mask: int) -> int:
        cache = self._cache.setdefault("rank", {})
        if mask in cache:
            return cache[mask]
        val = max((b & mask).bit_count() for b in self.bases)
        cache[mask] = val
        return val

    def corank(self, mask: int) -> int:
        """Dual rank r*(A) = |A| - r(E) + r(E - A)."""
        return mask.bit_count() - self.rank + self.r(self.ground_mask & ~mask)

    def conn(self, mask: int) -> int:
        """Connectivity function c(A) = r(A) + r*(A) - |A|."""
        return self.r(mask) + self.corank(mask) - mask.bit_count()

    def is_independent(self, mask: int) -> bool:
        return self.r(mask) == mask.bit_count()

    def independent_sets(self) -> frozenset[int]:
        if "indep" not in self._cache:
            acc = set()
            for b in self.bases:
                for s in submasks(b):
                    acc.add(s)
            self._cache["indep"] = frozenset(acc)
        return self._cache["indep"]

    def closure(self, mask: int) -> int:
        rk = self.r(mask)
        out = mask
        rest = self.ground_mask & ~mask
        while rest:
            low = rest & -rest
            rest ^= low
            if self.r(mask | low) == rk:
                out |= low
        return out

    def is_flat(self, mask: int) -> bool:
        return self.closure(mask) == mask

    def flats(self, k: int | None = None) -> tuple[int, ...]:
        """All flats of rank k (or the whole lattice, bottom up)."""
        if "flats" not in self._cache:
            by_rank: list[list[int]] = [[self.closure(0)]]
            while by_rank[-1] and self.r(by_rank[-1][0]) < self.rank:
                level = set()
                for f in by_rank[-1]:
                    rest = self.ground_mask & ~f
                    while rest:
                        low = rest & -rest
                        rest ^= low
                        level.add(self.closure(f | low))
                by_rank.append(sorted(level))
            self._cache["flats"] = tuple(tuple(l) for l in by_rank)
        levels = self._cache["flats"]
        if k is None:
            return tuple(f for level in levels for f in level)
        if not 0 <= k <= self.rank:
            raise InvalidRank(f"no rank-{k} flats")
        return levels[k]

    def circuits(self) -> tuple[int, ...]:
        """Inclusion-minimal dependent sets, in canonical order."""
        if "circuits" not in self._cache:
            found: list[int] = []
            for size in range(1, self.size + 1):
                for combo in itertools.combinations(self.ground, size):
                    m = mask_of(combo)
                    if self.is_independent(m):
                        continue
                    if any(c & ~m == 0 for c in found):
                        continue
                    found.append(m)
            self._cache["circuits"] = tuple(sorted(found, key=lambda c: (c.bit_count(), c)))
        return self._cache["circuits"]

    # -- connectivity ---------------------------------------------------

    def loops(self) -> int:
        if "loops" not in self._cache:
            union = 0
            for b in self.bases:
                union |= b
            self._cache["loops"] = self.ground_mask & ~union
        return self._cache["loops"]

    def coloops(self) -> int:
        if "coloops" not in self._cache:
            inter = self.ground_mask
            for b in self.bases:
                inter &= b
            self._cache["coloops"] = inter
        return self._cache["coloops"]

    def is_loopless(self) -> bool:
        return self.loops() == 0

    def is_relevant(self) -> bool:
        """No loops and no coloops."""
        return self.loops() == 0 and self.coloops() == 0

    def components(self) -> tuple[int, ...]:
        """Ground sets of the connected components, as masks.

        Uses fundamental circuits against one fixed base: two elements lie
        in the same component exactly when they are linked by a chain of
        fundamental circuits.  Loops and coloops end up as singletons.
        """
        if "components" in self._cache:
            return self._cache["components"]
        parent = {x: x for x in self.ground}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        base = self.bases_sorted[0]
        rest = self.ground_mask & ~base & ~self.loops()
        while rest:
            low = rest & -rest
            rest ^= low
            e = low.bit_length() - 1
            b = base
            while b:
                bl = b & -b
                b ^= bl
                if (base ^ bl) | low in self.bases:
                    union(e, bl.bit_length() - 1)
        comps: dict[int, int] = {}
        for x in self.ground:
            root = find(x)
            comps[root] = comps.get(root, 0) | (1 << x)
        out = tuple(sorted(comps.values()))
        self._cache["components"] = out
        return out

    def kappa(self) -> int:
        return len(self.components())

    def is_inseparable(self) -> bool:
        return self.kappa() == 1

    def is_separator(self, mask: int) -> bool:
        return self.conn(mask) == 0

    def is_nondegenerate(self, mask: int) -> bool:
        """True when splitting at `mask` raises the component count by
        exactly one, i.e. the subset indexes a facet of the base polytope."""
        if mask == 0 or mask == self.ground_mask:
            return False
        return (self.contract(mask).kappa() + self.restrict(mask).kappa()
                == self.kappa() + 1)

    # -- minors and friends ---------------------------------------------

    def restrict(self, mask: int) -> "Matroid":
        cache = self._cache.setdefault("restrict", {})
        if mask in cache:
            return cache[mask]
        if mask & ~self.ground_mask:
            raise GroundMismatch("restriction set must lie in the ground set")
        rk = self.r(mask)
        bases = {b & mask for b in self.bases if (b & mask).bit_count() == rk}
        out = Matroid(labels_of(mask), bases, _validated=True)
        cache[mask] = out
        return out

    def contract(self, mask: int) -> "Matroid":
        cache = self._cache.setdefault("contract", {})
        if mask in cache:
            return cache[mask]
        if mask & ~self.ground_mask:
            raise GroundMismatch("contraction set must lie in the ground set")
        rk = self.r(mask)
        bases = {b & ~mask for b in self.bases if (b & mask).bit_count() == rk}
        out = Matroid(labels_of(self.ground_mask & ~mask), bases, _validated=True)
        cache[mask] = out
        return out

    def delete(self, mask: int) -> "Matroid":
        return self.restrict(self.ground_mask & ~mask)

    def dual(self) -> "Matroid":
        if "dual" not in self._cache:
            gm = self.ground_mask
            self._cache["dual"] = Matroid(self.ground, {gm & ~b for b in self.bases},
                                          _validated=True)
        return self._cache["dual"]

    def level(self, k: int) -> "Matroid":
        """Truncation: rank function A -> min(k, r(A))."""
        if not 0 <= k <= self.rank:
            raise InvalidRank(f"level {k} out of range")
        bases = set()
        for b in self.bases:
            for s in itertools.combinations(labels_of(b), k):
                bases.add(mask_of(s))
        return Matroid(self.ground, bases, _validated=True)

    def simplify(self) -> tuple["Matroid", int, SetMap]:
        """Collapse parallel classes; returns (simple matroid, class count, map).

        Each non-loop maps to the smallest label of its rank-1 flat; loops
        are dropped.
        """
        nonloops = self.ground_mask & ~self.loops()
        rep: dict[int, int] = {}
        for x in labels_of(nonloops):
            rep[x] = labels_of(self.closure(1 << x) & nonloops)[0]
        dom = tuple(sorted(rep))
        img = tuple(rep[x] for x in dom)
        cod = tuple(sorted(set(img)))
        f = SetMap(dom, cod, img)
        simple = pushforward(f, self.delete(self.loops()))
        return simple, len(cod), f

    # -- convenience ----------------------------------------------------

    def base_count(self) -> int:
        return len(self.bases)


# -- transport and combinations ------------------------------------------


def pullback(f: SetMap, M: Matroid, *, validated: bool = True) -> Matroid:
    """Matroid on the domain whose independents are injective preimages of
    independents of M."""
    if set(f.codomain) != set(M.ground):
        raise GroundMismatch("codomain of the map must match the ground set")
    k = M.r(f.apply_mask(mask_of(f.domain)))
    bases = []
    for combo in itertools.combinations(f.domain, k):
        m = mask_of(combo)
        if f.is_injective_on(m) and M.is_independent(f.apply_mask(m)):
            bases.append(m)
    return Matroid(f.domain, bases, _validated=validated)


def pushforward(f: SetMap, M: Matroid, *, validated: bool = True) -> Matroid:
    """Matroid on the codomain whose independents are images of independents."""
    if set(f.domain) != set(M.ground):
        raise GroundMismatch("domain of the map must match the ground set")
    images = {f.apply_mask(i) for i in M.independent_sets()}
    top = max(m.bit_count() for m in images)
    return Matroid(f.codomain, [m for m in images if m.bit_count() == top],
                   _validated=validated)


def transport(f: SetMap, M: Matroid, direction: str) -> Matroid:
    if direction == "pullback":
        return pullback(f, M)
    if direction == "pushforward":
        return pushforward(f, M)
    raise MatroidError(f"unknown direction {direction!r}")


def direct_sum(M: Matroid, N: Matroid) -> Matroid:
    if mask_of(M.ground) & mask_of(N.ground):
        raise GroundOverlap("direct sum needs disjoint ground sets")
    bases = {a | b for a in M.bases for b in N.bases}
    return Matroid(M.ground + N.ground, bases, _validated=True)


def direct_sum_all(parts: Sequence[Matroid]) -> Matroid:
    if not parts:
        raise MatroidError("empty direct sum has no Matroid value")
    out = parts[0]
    for p in parts[1:]:
        out = direct_sum(out, p)
    return out


def matroid_union(M: Matroid, N: Matroid) -> Matroid:
    """Pushforward of the direct sum along the label-identifying surjection."""
    shift = max(max(M.ground, default=0), max(N.ground, default=0)) + 1
    lifted_ground = tuple(x + shift for x in N.ground)
    lifted = Matroid(lifted_ground, {b << shift for b in N.bases}, _validated=True)
    big = direct_sum(M, lifted)
    ground = tuple(sorted(set(M.ground) | set(N.ground)))
    dom = big.ground
    img = tuple(x if x < shift else x - shift for x in dom)
    return pushforward(SetMap(dom, ground, img), big)


@dataclass(frozen=True)
class SetFamilyResult:
    """A collection of subsets that may or may not be a matroid."""

    ground: tuple[int, ...]
    sets: frozenset[int]
    is_matroid: bool
    matroid: Matroid | None

    @classmethod
    def from_sets(cls, ground: Sequence[int], sets: Iterable[int]) -> "SetFamilyResult":
        sets = frozenset(sets)
        ground = tuple(sorted(ground))
        if not sets:
            return cls(ground, sets, False, None)
        sizes = {s.bit_count() for s in sets}
        if len(sizes) == 1:
            try:
                _check_bep(sets)
            except BepViolation:
                return cls(ground, sets, False, None)
            return cls(ground, sets, True, Matroid(ground, sets, _validated=True))
        return cls(ground, sets, False, None)


def base_union(M: Matroid, N: Matroid) -> SetFamilyResult:
    ground = tuple(sorted(set(M.ground) | set(N.ground)))
    return SetFamilyResult.from_sets(ground, M.bases | N.bases)


def base_intersection(M: Matroid, N: Matroid) -> SetFamilyResult:
    ground = tuple(sorted(set(M.ground) & set(N.ground)))
    return SetFamilyResult.from_sets(ground, M.bases & N.bases)


def matroid_intersection(M: Matroid, N: Matroid) -> SetFamilyResult:
    """Common independent sets; in general not a matroid."""
    ground = tuple(sorted(set(M.ground) & set(N.ground)))
    gm = mask_of(ground)
    common = {s for s in M.independent_sets() & N.independent_sets() if s & ~gm == 0}
    # augmentation axiom decides whether the family is an independence system
    # of a matroid; downward closure holds by construction
    ok = True
    by_size: dict[int, list[int]] = {}
    for s in common:
        by_size.setdefault(s.bit_count(), []).append(s)
    for sa in sorted(by_size):
        for sb in sorted(by_size):
            if sb <= sa:
                continue
            for a in by_size[sa]:
                for b in by_size[sb]:
                    if not any((a | bit) in common for bit in _single_bits(b & ~a)):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    matroid = None
    if ok:
        top = max(s.bit_count() for s in common)
        matroid = Matroid(ground, [s for s in common if s.bit_count() == top],
                          _validated=True)
    return SetFamilyResult(ground, frozenset(common), ok, matroid)


def _single_bits(mask: int):
    while mask:
        low = mask & -mask
        mask ^= low
        yield low


def combine(M: Matroid, N: Matroid, mode: str):
    ops = {
        "direct_sum": direct_sum,
        "matroid_union": matroid_union,
        "base_union": base_union,
        "base_intersection": base_intersection,
        "matroid_intersection": matroid_intersection,
    }
    if mode not in ops:
        raise MatroidError(f"unknown combine mode {mode!r}")
    return ops[mode](M, N)
