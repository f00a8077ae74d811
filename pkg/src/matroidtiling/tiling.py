"""Semitilings of hypersimplices and their cell calculus.

A semitiling is a finite list of full-dimensional base polytopes in one
hypersimplex that tile around every codimension-2 cell.  The cell index
merges faces across pieces by vertex set, so all geometry stays
combinatorial and exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Graph, Matroid, labels_of, mask_of
from .errors import MatroidError, NotASemitiling, NotWeighted
from .exact_lp import feasible
from .polytope import Facet, face_fitting, facets, inequality_system, minimal_face_containing

ANGLE_CAP_RELEVANT = 6
ANGLE_CAP_IRRELEVANT = 3


@dataclass(frozen=True)
class Cell:
    """A merged face of the semitiling, identified by its vertex set."""

    bases: frozenset[int]
    owners: tuple[int, ...]
    kappa: int
    loopless: bool
    relevant: bool

    @property
    def boundary(self) -> bool:
        return len(self.owners) == 1

    def sort_key(self):
        return (len(self.bases), tuple(sorted(self.bases)))


@dataclass(frozen=True)
class Weight:
    """Coordinatewise rational caps on the hypersimplex."""

    beta: tuple[Fraction, ...]

    @classmethod
    def make(cls, values: Iterable) -> "Weight":
        return cls(tuple(Fraction(v) for v in values))

    def validate(self, k: int) -> None:
        if any(not 0 < b <= 1 for b in self.beta):
            raise NotWeighted("weights must lie in (0, 1]")
        if sum(self.beta) <= k:
            raise NotWeighted("weights must sum to more than the rank")

    def is_unit(self) -> bool:
        return all(b == 1 for b in self.beta)


class Semitiling:
    """Validated collection of pairwise locally fitting base polytopes."""

    def __init__(self, pieces: Sequence[Matroid], *, expect_tiling: bool = False):
        pieces = tuple(pieces)
        if not pieces:
            raise NotASemitiling("a semitiling needs at least one piece")
        ground = pieces[0].ground
        k = pieces[0].rank
        for p in pieces:
            if p.ground != ground or p.rank != k:
                raise NotASemitiling("pieces must share a ground set and rank")
            if not p.is_loopless() or not p.is_inseparable():
                raise NotASemitiling("pieces must be loopless and inseparable")
        if len(set(pieces)) != len(pieces):
            raise NotASemitiling("pieces must be distinct")
        self.pieces = pieces
        self.ground = ground
        self.ground_mask = pieces[0].ground_mask
        self.k = k
        self.n = len(ground)
        self._fit_cache: dict[tuple[int, int], object] = {}
        self._build_cells()
        self._check_semitiling()
        if expect_tiling and not self.is_tiling():
            raise NotASemitiling("pieces are not pairwise face-fitting")

    # -- construction ---------------------------------------------------

    def _cell(self, bases: frozenset[int], owners: Iterable[int]) -> Cell:
        union, inter = 0, self.ground_mask
        for b in bases:
            union |= b
            inter &= b
        sub = Matroid(self.ground, bases, _validated=True)
        loopless = union == self.ground_mask
        return Cell(bases, tuple(sorted(set(owners))), sub.kappa(),
                    loopless, loopless and inter == 0)

    def _build_cells(self) -> None:
        facet_owners: dict[frozenset[int], set[int]] = {}
        ridge_owners: dict[frozenset[int], set[int]] = {}
        self.piece_facets: list[tuple[Facet, ...]] = []
        for i, p in enumerate(self.pieces):
            pf = facets(p)
            self.piece_facets.append(pf)
            for f in pf:
                facet_owners.setdefault(f.bases, set()).add(i)
            for fa, fb in itertools.combinations(pf, 2):
                inter = fa.bases & fb.bases
                if not inter:
                    continue
                sub = Matroid(self.ground, inter, _validated=True)
                if sub.kappa() == p.kappa() + 2:
                    ridge_owners.setdefault(inter, set()).add(i)
        self.cells1 = {bs: self._cell(bs, owners) for bs, owners in facet_owners.items()}
        self.cells2 = {bs: self._cell(bs, owners) for bs, owners in ridge_owners.items()}

    def _check_semitiling(self) -> None:
        for cell in self.cells1.values():
            if len(cell.owners) > 2:
                raise NotASemitiling("a facet cell has more than two owners", cell)
        for cell in self.cells2.values():
            owners = cell.owners
            for i, j in itertools.combinations(owners, 2):
                if not self.fitting(i, j).fits:
                    raise NotASemitiling(
                        f"pieces {i} and {j} do not fit around a shared cell", cell)
            if cell.loopless:
                if len(owners) > 6:
                    raise NotASemitiling("more than six pieces around a cell", cell)
                ang = self.angle_sum(cell)
                cap = ANGLE_CAP_RELEVANT if cell.relevant else ANGLE_CAP_IRRELEVANT
                if ang > cap:
                    raise NotASemitiling(
                        f"angle {ang} exceeds cap {cap} at a codimension-2 cell", cell)

    def fitting(self, i: int, j: int):
        key = (min(i, j), max(i, j))
        if key not in self._fit_cache:
            self._fit_cache[key] = face_fitting(self.pieces[key[0]], self.pieces[key[1]])
        return self._fit_cache[key]

    # -- basic structure -------------------------------------------------

    def is_tiling(self) -> bool:
        return all(self.fitting(i, j).fits
                   for i, j in itertools.combinations(range(len(self.pieces)), 2))

    def connected_in_codim(self, c: int) -> bool:
        n = len(self.pieces)
        if n == 1:
            return True
        adj = {i: set() for i in range(n)}
        for i, j in itertools.combinations(range(n), 2):
            res = self.fitting(i, j)
            if not res.fits or res.kind == "disjoint":
                continue
            sub = Matroid(self.ground, res.common, _validated=True)
            if sub.kappa() <= self.pieces[i].kappa() + c:
                adj[i].add(j)
                adj[j].add(i)
        seen = {0}
        queue = [0]
        while queue:
            cur = queue.pop()
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return len(seen) == n

    def sigma_facets(self) -> list[Cell]:
        """Boundary codimension-1 cells (one owner)."""
        return sorted((c for c in self.cells1.values() if c.boundary),
                      key=Cell.sort_key)

    def relevant_facets(self) -> list[Cell]:
        return [c for c in self.sigma_facets() if c.relevant]

    def owner_facet(self, cell: Cell) -> tuple[int, Facet]:
        i = cell.owners[0]
        for f in self.piece_facets[i]:
            if f.bases == cell.bases:
                return i, f
        raise MatroidError("cell is not a facet of its owner")

    def piece_facets_at(self, i: int, cell: Cell) -> tuple[Facet, Facet]:
        """The two facets of piece i containing a codimension-2 cell."""
        hits = [f for f in self.piece_facets[i] if cell.bases <= f.bases]
        if len(hits) != 2:
            raise MatroidError(f"expected 2 facets of piece {i} through the cell")
        return hits[0], hits[1]

    # -- angles and deficiency --------------------------------------------

    def piece_angle(self, i: int, cell: Cell) -> int:
        fa, fb = self.piece_facets_at(i, cell)
        f, l = fa.rep, fb.rep
        return 1 if (f & l == 0 or f | l == self.ground_mask) else 2

    def angle_sum(self, cell: Cell) -> int:
        return sum(self.piece_angle(i, cell) for i in cell.owners)

    def angle_and_deficiency(self, cell: Cell):
        if not cell.loopless:
            raise MatroidError("angles are defined at loopless cells")
        per = {i: self.piece_angle(i, cell) for i in cell.owners}
        ang = sum(per.values())
        return per, ang, 6 - ang

    def deficiency(self, cell: Cell) -> int:
        return 6 - self.angle_sum(cell)

    def loopless_ridges(self) -> list[Cell]:
        return sorted((c for c in self.cells2.values() if c.loopless),
                      key=Cell.sort_key)

    def facet_type_rank(self, cell: Cell, ridge: Cell) -> tuple[int, int]:
        """Type (components of the ridge inside the tight set) and rank."""
        i, f = self.owner_facet(cell)
        if not ridge.bases <= cell.bases:
            raise MatroidError("ridge must lie in the facet")
        comps = Matroid(self.ground, ridge.bases, _validated=True).components()
        typ = sum(1 for c in comps if c & ~f.rep == 0)
        if typ not in (1, 2):
            raise MatroidError("facet type must be 1 or 2")
        rank = self.pieces[i].r(f.rep)
        if self.k == 3 and typ != rank:
            raise AssertionError("for rank 3 the type must equal the rank")
        return typ, rank

    def facet_type(self, cell: Cell) -> int:
        """For k=3 the type equals the rank of the tight set, ridge-free."""
        i, f = self.owner_facet(cell)
        if self.k != 3:
            raise MatroidError("ridge-free facet type only makes sense for k=3")
        return self.pieces[i].r(f.rep)

    def shared_facet_types(self, cell: Cell) -> tuple[int, int]:
        """Ranks of the tight sets on both sides of an interior facet."""
        if len(cell.owners) != 2:
            raise MatroidError("cell is not shared by two pieces")
        out = []
        for i in cell.owners:
            f = next(f for f in self.piece_facets[i] if f.bases == cell.bases)
            out.append(self.pieces[i].r(f.rep))
        return tuple(out)

    # -- convexity, completeness ------------------------------------------

    def local_convexity(self):
        """Either ("convex", support matroid) or ("violations", cells)."""
        if not self.connected_in_codim(1):
            raise MatroidError("local convexity assumes codimension-1 connectivity")
        bad = []
        for cell in self.cells2.values():
            if cell.relevant:
                if self.deficiency(cell) in (1, 2):
                    bad.append(cell)
            else:
                if not self._locally_connected(cell):
                    bad.append(cell)
        if bad:
            return "violations", sorted(bad, key=Cell.sort_key)
        union = frozenset(b for p in self.pieces for b in p.bases)
        support = Matroid(self.ground, union)  # validates base exchange
        return "convex", support

    def _locally_connected(self, cell: Cell) -> bool:
        owners = list(cell.owners)
        if len(owners) <= 1:
            return True
        adj = {i: set() for i in owners}
        for i, j in itertools.combinations(owners, 2):
            res = self.fitting(i, j)
            if res.fits and res.kind == "common_face":
                sub = Matroid(self.ground, res.common, _validated=True)
                if sub.kappa() == self.pieces[i].kappa() + 1:
                    adj[i].add(j)
                    adj[j].add(i)
        seen = {owners[0]}
        queue = [owners[0]]
        while queue:
            for nxt in adj[queue.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return len(seen) == len(owners)

    def is_complete(self) -> bool:
        if not self.connected_in_codim(1):
            raise MatroidError("completeness assumes codimension-1 connectivity")
        no_relevant = not self.relevant_facets()
        union = frozenset(b for p in self.pieces for b in p.bases)
        covers = len(union) == len(Matroid.uniform(self.k, self.ground).bases)
        if no_relevant != covers:
            raise AssertionError("facet test and base union disagree on completeness")
        return no_relevant

    # -- weights ------------------------------------------------------------

    def _essential_rows(self, i: int):
        sys = inequality_system(self.pieces[i], "BP")
        return sys.upper_bounds

    def _delta_rows(self, beta: Weight):
        n = self.n
        rows = []
        for idx, x in enumerate(self.ground):
            unit = [Fraction(0)] * n
            unit[idx] = Fraction(1)
            rows.append((tuple(unit), beta.beta[idx], False))
            rows.append((tuple(-u for u in unit), Fraction(0), False))
        return rows

    def _mask_row(self, mask: int):
        return tuple(Fraction(1) if mask >> x & 1 else Fraction(0) for x in self.ground)

    def _sum_row(self):
        return tuple(Fraction(1) for _ in self.ground)

    def weighted_check(self, beta: Weight):
        """Is this a beta-weighted tiling?  Returns (bool, witnesses).

        Both directions are certified exactly: a rational interior point per
        piece, and either coverage (every violation pattern infeasible) or a
        rational point of the weighted hypersimplex missed by all pieces.
        """
        beta.validate(self.k)
        if len(beta.beta) != self.n:
            raise NotWeighted("weight length must match the ground set")
        if not self.is_tiling():
            return False, {"reason": "not a tiling"}
        witnesses = {"interior_points": [], "uncovered_point": None}
        base_rows = self._delta_rows(beta)
        eq_plus = (self._sum_row(), Fraction(self.k), False)
        eq_minus = (tuple(-c for c in self._sum_row()), Fraction(-self.k), False)
        for i in range(len(self.pieces)):
            rows = [
                (self._mask_row(f), Fraction(r), False) for f, r in self._essential_rows(i)
            ]
            for idx in range(self.n):
                unit = [Fraction(0)] * self.n
                unit[idx] = Fraction(1)
                rows.append((tuple(unit), beta.beta[idx], True))
                rows.append((tuple(-u for u in unit), Fraction(0), True))
            rows += [eq_plus, eq_minus]
            point = feasible(rows, self.n)
            if point is None:
                return False, {"reason": f"piece {i} misses the weighted interior"}
            witnesses["interior_points"].append(point)
        # coverage: search for a point of the weighted hypersimplex violating
        # one essential bound of every piece
        piece_bounds = [self._essential_rows(i) for i in range(len(self.pieces))]
        if any(not pb for pb in piece_bounds):
            return True, witnesses  # some piece covers the whole hypersimplex
        for combo in itertools.product(*piece_bounds):
            rows = list(base_rows) + [eq_plus, eq_minus]
            for f, r in combo:
                rows.append((tuple(-c for c in self._mask_row(f)), Fraction(-r), True))
            point = feasible(rows, self.n)
            if point is not None:
                witnesses["uncovered_point"] = point
                return False, witnesses
        return True, witnesses

    # -- regularity ----------------------------------------------------------

    def boundary_facets_at(self, cell: Cell) -> list[Cell]:
        """The sigma-facets containing a boundary codimension-2 cell."""
        return [c for c in self.sigma_facets() if cell.bases <= c.bases]

    def parallel_class(self, start: Cell) -> list[Cell]:
        """Maximal set of sigma-facets linked through deficiency-3 cells."""
        seen = {start.bases}
        queue = [start]
        while queue:
            cur = queue.pop()
            for ridge in self.cells2.values():
                if not ridge.loopless or not ridge.bases <= cur.bases:
                    continue
                if self.deficiency(ridge) != 3:
                    continue
                for other in self.boundary_facets_at(ridge):
                    if other.bases not in seen:
                        seen.add(other.bases)
                        queue.append(other)
        return sorted((self.cells1[b] for b in seen), key=Cell.sort_key)

    def is_branch_facet(self, cell: Cell) -> bool:
        """A type-1 facet whose polytope has three or more relevant
        codimension-2 cells."""
        i, f = self.owner_facet(cell)
        M = self.pieces[i]
        if not (2 <= f.rep.bit_count() <= self.n - 2):
            return False
        if M.r(f.rep) == 1:
            part = M.contract(f.rep)
        else:
            part = M.restrict(f.rep)
        big = sum(1 for fl in part.flats(1) if fl.bit_count() >= 2)
        return big >= 3

    def regularity(self):
        """Check the two regularity conditions for k=3 semitilings."""
        if self.k != 3:
            raise MatroidError("regularity is defined for rank-3 semitilings")
        violations = []
        for cell in self.loopless_ridges():
            if self.deficiency(cell) == 1:
                violations.append(("deficiency_one", cell))
        for facet in self.sigma_facets():
            if not facet.relevant or self.facet_type(facet) != 2:
                continue
            chain = self.parallel_class(facet)
            support = set()
            for r in chain:
                for ridge in self.loopless_ridges():
                    if ridge.bases <= r.bases:
                        support.add(ridge.bases)
            bad = [b for b in support if self.deficiency(self.cells2[b]) == 2]
            if len(bad) > 1:
                violations.append(("parallel_chain", facet))
        return ("regular", []) if not violations else ("violations", violations)

    def is_regular(self) -> bool:
        return self.regularity()[0] == "regular"

    # -- dual graph ------------------------------------------------------------

    def dual_graph(self) -> Graph:
        edges = []
        for cell in sorted(self.cells1.values(), key=Cell.sort_key):
            if len(cell.owners) == 2:
                edges.append(cell.owners)
        return Graph(len(self.pieces), tuple(edges))

    def base_union(self) -> frozenset[int]:
        return frozenset(b for p in self.pieces for b in p.bases)

    def __repr__(self):
        return f"Semitiling(k={self.k}, n={self.n}, pieces={len(self.pieces)})"


def validate(pieces: Sequence[Matroid], *, expect_tiling: bool = False) -> Semitiling:
    return Semitiling(pieces, expect_tiling=expect_tiling)
