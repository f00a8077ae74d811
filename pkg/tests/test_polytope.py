import itertools
import random
from fractions import Fraction

import pytest

from matroidtiling.core import Matroid, labels_of, mask_of
from matroidtiling.errors import NotARidge
from matroidtiling.expressions import face_matroid
from matroidtiling.polytope import (
    dim_bp,
    dim_ip,
    face_fitting,
    facets,
    inequality_system,
    minimal_face_containing,
    loopless_face_base_sets,
    partition_distance,
    ridge_classify,
    subset_distance,
    vertices,
)

from conftest import random_small_matroid

U42 = Matroid.uniform(2, 4)
U43 = Matroid.uniform(3, 4)


def M(*labels):
    return mask_of(labels)


def test_vertices():
    assert vertices(Matroid.uniform(1, 2)) == ((1, 0), (0, 1))
    assert len(vertices(U42)) == 6


def test_edges_have_length_one(m8):
    # every edge (1-dim face) of a base polytope joins bases at distance 1
    for Mx in (U42, U43, m8):
        for a, b in itertools.combinations(Mx.bases, 2):
            face = minimal_face_containing(Mx, {a, b})
            if len(face.bases) == 2:
                assert subset_distance(a, b) == 1


def test_facets_u42():
    fs = facets(U42)
    assert len(fs) == 8
    flats = {f.rep for f in fs if f.is_flat}
    dels = {f.rep for f in fs if not f.is_flat}
    assert flats == {M(i) for i in range(1, 5)}
    assert dels == {U42.ground_mask & ~M(i) for i in range(1, 5)}


def test_facets_m8(m8):
    reps = {f.rep for f in facets(m8)}
    assert M(1, 2, 3) in reps and M(3, 4, 5) in reps


def test_facets_inseparable_unique_rep():
    rng = random.Random(17)
    for _ in range(30):
        Mx = random_small_matroid(rng, 6)
        if not Mx.is_inseparable() or Mx.size < 2:
            continue
        for f in facets(Mx):
            tight = {b for b in Mx.bases if (b & f.rep).bit_count() == Mx.r(f.rep)}
            assert tight == f.bases


def test_inequality_system_u42():
    sys = inequality_system(U42, "BP")
    assert sys.equalities == ((U42.ground_mask, 2),)
    assert sys.upper_bounds == ()


def test_inequality_system_m8(m8):
    sys = inequality_system(m8, "BP")
    assert set(sys.upper_bounds) == {(M(1, 2, 3), 2), (M(3, 4, 5), 2)}


def test_zero_one_solutions_match(m8):
    rng = random.Random(23)
    mats = [U42, U43, m8, Matroid.uniform(2, 5)]
    mats += [Mx for Mx in (random_small_matroid(rng, 6) for _ in range(40))
             if Mx.is_loopless()]
    for Mx in mats:
        bp = inequality_system(Mx, "BP")
        pts = {s for s in range(Mx.ground_mask + 1)
               if s & ~Mx.ground_mask == 0 and bp.admits_mask(s)}
        assert pts == set(Mx.bases)
        ip = inequality_system(Mx, "IP")
        pts = {s for s in range(Mx.ground_mask + 1)
               if s & ~Mx.ground_mask == 0 and ip.admits_mask(s)}
        assert pts == set(Mx.independent_sets())


def test_bp_bounds_are_facets(m8):
    # every listed bound supports a codimension-1 face, hence none is droppable
    for Mx in (U43, m8, Matroid.uniform(2, 5)):
        sys = inequality_system(Mx, "BP")
        for f, c in sys.upper_bounds:
            tight = [b for b in Mx.bases if (b & f).bit_count() == c]
            sub = Matroid(Mx.ground, tight, _validated=True)
            assert sub.kappa() == Mx.kappa() + 1


def test_ridge_classify_cases(m8):
    # covering pair in M8
    rc = ridge_classify(m8, M(1, 2, 3), M(3, 4, 5))
    assert rc.case == "CoveringFlats" and rc.A == rc.T == M(3)
    # disjoint flats in U_6^3
    U63 = Matroid.uniform(3, 6)
    rc2 = ridge_classify(U63, M(1), M(2))
    assert rc2.case == "DisjointFlats"
    assert rc2.bases == face_matroid(U63, M(1, 2)).bases
    # nested flats need a matroid with a flag of non-degenerate flats
    line = Matroid(U63.ground,
                   [b for b in U63.bases if (b & M(1, 2, 3)).bit_count() <= 2])
    rc3 = ridge_classify(line, M(1), M(1, 2, 3))
    assert rc3.case == "NestedFlats" and rc3.T == M(1) and rc3.A == M(2, 3)
    with pytest.raises(NotARidge):
        ridge_classify(U63, M(1), M(1))


def test_every_loopless_ridge_classifies(m8):
    for Mx in (U43, Matroid.uniform(3, 5), Matroid.uniform(3, 6), m8):
        if not Mx.is_inseparable() or Mx.rank < 3:
            continue
        nd = [f for f in Mx.flats() if 0 < f < Mx.ground_mask
              and Mx.is_nondegenerate(f)]
        for f, l in itertools.combinations(nd, 2):
            nf, nl = face_matroid(Mx, f), face_matroid(Mx, l)
            inter = nf.bases & nl.bases
            if not inter:
                continue
            union = 0
            for b in inter:
                union |= b
            sub = Matroid(Mx.ground, inter, _validated=True)
            if union != Mx.ground_mask or sub.kappa() != 3:
                continue
            rc = ridge_classify(Mx, f, l)
            assert rc.case in {"DisjointFlats", "CoveringFlats", "NestedFlats"}


def test_dims_and_metric(m8):
    assert dim_bp(U42) == 3
    assert dim_bp(m8) == 4
    assert dim_ip(U42) == 4
    assert subset_distance(M(1, 2), M(1, 3)) == 1
    a = [M(1), M(2), M(3, 4, 5, 6)]
    b = [M(1), M(3), M(2, 4, 5, 6)]
    assert partition_distance(a, b) == brute_partition_distance(a, b)


def brute_partition_distance(a, b):
    best = None
    for perm in itertools.permutations(range(len(b))):
        tot = sum((Fraction((a[i] ^ b[perm[i]]).bit_count(), 2)
                   for i in range(len(a))), Fraction(0))
        if best is None or tot < best:
            best = tot
    return best


def test_minimal_face(m8):
    assert minimal_face_containing(U42, U42.bases).bases == U42.bases
    one = next(iter(m8.bases))
    assert minimal_face_containing(m8, {one}).bases == {one}
    facet = face_matroid(U43, M(1)).bases
    assert minimal_face_containing(U43, facet).bases == facet


def test_face_fitting_split():
    # hyperplane split of the rank-2 hypersimplex on [4]
    Ma = Matroid.from_bases(range(1, 5), [{1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}])
    Mb = Matroid.from_bases(range(1, 5), [{1, 3}, {1, 4}, {2, 3}, {2, 4}, {1, 2}])
    res = face_fitting(Ma, Mb)
    assert res.kind == "common_face"
    assert res.common == {M(1, 3), M(1, 4), M(2, 3), M(2, 4)}
    assert face_fitting(Ma, Ma).kind == "common_face"


def test_face_fitting_negative():
    # a split piece overlaps the whole hypersimplex in itself, which is a
    # face of the piece but not of the hypersimplex
    Ma = Matroid.from_bases(range(1, 5), [{1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}])
    res = face_fitting(U42, Ma)
    assert res.kind == "not_fitting"


def test_every_face_is_base_polytope(m8):
    # vertex sets of loopless faces satisfy base exchange
    for Mx in (U42, U43, m8):
        for bs in loopless_face_base_sets(Mx):
            Matroid(Mx.ground, bs)  # validates BEP


def test_inseparable_iff_full_dimensional(m8):
    rng = random.Random(31)
    for _ in range(30):
        Mx = random_small_matroid(rng, 6)
        assert Mx.is_inseparable() == (dim_bp(Mx) == Mx.size - 1)


def test_two_dim_faces_of_ip():
    # 2-dimensional faces of independence polytopes match the four shapes:
    # equilateral triangles, unit squares, right triangles, half squares
    import numpy as np

    for Mx in (Matroid.uniform(2, 4), Matroid.uniform(2, 3), Matroid.uniform(3, 4)):
        verts = {i: np.array([1.0 if i >> x & 1 else 0.0 for x in Mx.ground])
                 for i in Mx.independent_sets()}
        ip = inequality_system(Mx, "IP")
        faces = set()
        zero_opts = [s for s in range(Mx.ground_mask + 1) if s & ~Mx.ground_mask == 0]
        bound_list = ip.all_bounds()
        for zero in zero_opts:
            for r in range(len(bound_list) + 1):
                for combo in itertools.combinations(bound_list, r):
                    cur = frozenset(
                        v for v in verts
                        if v & zero == 0 and all((v & f).bit_count() == c
                                                 for f, c in combo))
                    if cur:
                        faces.add(cur)
        for face in faces:
            pts = [verts[v] for v in face]
            arr = np.array(pts) - pts[0]
            if np.linalg.matrix_rank(arr, tol=1e-9) != 2:
                continue
            dists = sorted(
                round(float(np.linalg.norm(p - q)) ** 2, 6)
                for p, q in itertools.combinations(pts, 2))
            # lengths in the polytope metric d = |A xor B|/2, i.e. squared
            # euclidean distance 2 is "length 1"
            shapes = {
                (2.0, 2.0, 2.0): "triangle",
                (2.0, 2.0, 2.0, 2.0, 4.0, 4.0): "square",
                (1.0, 1.0, 2.0): "half-triangle",
                (1.0, 1.0, 1.0, 1.0, 2.0, 2.0): "half-square",
            }
            assert tuple(dists) in shapes, (face, dists)
