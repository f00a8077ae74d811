import itertools
import random

import pytest

from matroidtiling.core import (
    Graph,
    Matroid,
    SetMap,
    base_intersection,
    base_union,
    direct_sum,
    labels_of,
    mask_of,
    matroid_intersection,
    matroid_union,
    pullback,
    pushforward,
)
from matroidtiling.errors import BepViolation, GroundOverlap

from conftest import brute_components, brute_flats, random_small_matroid, spanning_tree_count

U42 = Matroid.uniform(2, range(1, 5))
U43 = Matroid.uniform(3, range(1, 5))

GEN_POS_GRAPH = Graph(5, ((1, 2), (2, 3), (2, 0), (3, 4), (4, 1), (4, 0)))
# square 1-2-3-4 with chords through vertex 0; circuits all have 4 edges


def test_from_bases_uniform():
    M = Matroid.from_bases(range(1, 5), itertools.combinations(range(1, 5), 2))
    assert M == U42
    assert M.rank == 2 and M.base_count() == 6


def test_from_bases_bep_violation():
    with pytest.raises(BepViolation) as err:
        Matroid.from_bases(range(1, 5), [{1, 2}, {3, 4}])
    assert set(err.value.A) | set(err.value.B) == {1, 2, 3, 4}


def test_m8_has_eight_bases(m8):
    assert m8.base_count() == 8
    assert m8.rank == 3 and m8.is_inseparable()


def test_uniform_constructor_counts():
    assert Matroid.uniform(3, 6).base_count() == 20


def test_graphic_gen_pos_counterexample():
    M = Matroid.graphic(GEN_POS_GRAPH)
    assert M.rank == 4 and M.is_inseparable()
    assert all(c.bit_count() == 4 for c in M.circuits())
    assert M.base_count() == spanning_tree_count(GEN_POS_GRAPH)


def test_rank_values(m8):
    assert U42.r(mask_of([1])) == 1
    assert U42.r(mask_of([1, 2, 3])) == 2
    assert m8.r(mask_of([1, 2, 3])) == 2


def test_closure_and_flats(m8):
    assert U42.closure(mask_of([1, 2])) == mask_of([1, 2, 3, 4])
    assert m8.closure(mask_of([1, 2])) == mask_of([1, 2, 3])
    assert set(U43.flats(2)) == {mask_of(c) for c in itertools.combinations(range(1, 5), 2)}


def test_circuits():
    assert set(U42.circuits()) == {mask_of(c) for c in itertools.combinations(range(1, 5), 3)}
    assert Matroid.uniform(3, 3).circuits() == ()


def test_connectivity(m8):
    two = direct_sum(Matroid.uniform(2, [1, 2, 3]), Matroid.uniform(2, [4, 5, 6]))
    assert two.kappa() == 2
    assert m8.kappa() == 1
    withloop = direct_sum(Matroid.uniform(1, [1, 2]), Matroid.uniform(0, [3]))
    assert withloop.loops() == mask_of([3])


def test_minors(m8):
    assert Matroid.uniform(3, 5).contract(mask_of([1])) == Matroid.uniform(2, [2, 3, 4, 5])
    assert m8.restrict(mask_of([3, 4, 5])) == Matroid.uniform(2, [3, 4, 5])


def test_iterated_contraction_matches_union():
    rng = random.Random(7)
    for _ in range(25):
        M = random_small_matroid(rng, 6)
        labels = list(M.ground)
        rng.shuffle(labels)
        a = mask_of(labels[: len(labels) // 3])
        d = mask_of(labels[len(labels) // 3: 2 * len(labels) // 3])
        assert M.contract(a).contract(d) == M.contract(a | d)


def test_dual_and_level():
    assert Matroid.uniform(1, 4).dual() == Matroid.uniform(3, 4)
    assert U43.level(2) == U42
    M = Matroid.graphic(GEN_POS_GRAPH)
    assert set(M.dual().circuits()) == {
        c for c in _brute_cocircuits(M)
    }


def _brute_cocircuits(M):
    """Minimal sets meeting every base; equals circuits of the dual."""
    out = []
    for size in range(1, M.size + 1):
        for combo in itertools.combinations(M.ground, size):
            m = mask_of(combo)
            if all(b & m for b in M.bases) and not any(c & ~m == 0 for c in out):
                out.append(m)
    return set(out)


def test_pushforward_pullback_degeneration():
    # collapsing {3,4} to one point and pulling back merges them into a
    # single parallel class
    f = SetMap((1, 2, 3, 4), (1, 2, 3), (1, 2, 3, 3))
    M = pullback(f, pushforward(f, U42))
    flats1 = set(M.flats(1))
    assert flats1 == {mask_of([1]), mask_of([2]), mask_of([3, 4])}


def test_pullback_of_restriction_is_restriction(m8):
    sub = (1, 2, 4)
    f = SetMap(sub, m8.ground, sub)
    assert pullback(f, m8) == m8.restrict(mask_of(sub))


def test_surjective_roundtrip():
    for M in (U42, U43, Matroid.uniform(2, 5)):
        dom = tuple(range(1, M.size + 3))
        img = tuple(M.ground[(i - 1) % M.size] for i in dom)
        f = SetMap(dom, M.ground, img)
        assert pushforward(f, pullback(f, M)) == M


def test_combine(m8):
    two = direct_sum(Matroid.uniform(2, [1, 2, 3]), Matroid.uniform(2, [4, 5, 6]))
    assert two.rank == 4 and two.base_count() == 9
    assert base_intersection(U42, U42).matroid == U42
    with pytest.raises(GroundOverlap):
        direct_sum(U42, U42)
    fam = matroid_intersection(U42, Matroid.uniform(2, 4))
    assert fam.is_matroid and fam.matroid == U42
    union = matroid_union(Matroid.uniform(1, [1, 2, 3]), Matroid.uniform(1, [3, 4]))
    assert union.rank == 2


def test_base_intersection_of_disjoint_facets():
    # facets of U_4^2 with disjoint tight sets share no base
    a = Matroid(U42.ground, [b for b in U42.bases if (b & mask_of([1])).bit_count() == 1])
    b = Matroid(U42.ground, [b for b in U42.bases if (b & mask_of([2])).bit_count() == 1])
    both = base_intersection(a, b)
    assert both.sets == {mask_of([1, 2])}


def test_simplify():
    f = SetMap((1, 2, 3, 4), (1, 2, 3), (1, 2, 3, 3))
    M = pullback(f, pushforward(f, U42))
    simple, lam, _ = M.simplify()
    assert lam == 3
    assert simple.base_count() == 3 and simple.rank == 2
    s2, lam2, _ = U43.simplify()
    assert lam2 == 4 and s2 == U43
    assert Matroid.uniform(3, 7).simplify()[1] == 7


def test_nondegenerate(m8):
    # in U_4^3 a doubleton restricts to two coloops (separable), so only the
    # singleton flats and triple subsets index facets
    assert U43.is_nondegenerate(mask_of([1]))
    assert not U43.is_nondegenerate(mask_of([1, 2]))
    assert m8.is_nondegenerate(mask_of([1, 2, 3]))
    assert not m8.is_nondegenerate(mask_of([3]))
    # rank-2: non-degenerate flats are exactly the rank-1 flats
    for M in (U42, Matroid.uniform(2, 5)):
        for f in M.flats():
            if 0 < f.bit_count() < M.ground_mask.bit_count():
                assert M.is_nondegenerate(f) == (M.r(f) == 1 and M.is_flat(f))


def test_components_match_circuit_oracle():
    rng = random.Random(3)
    for _ in range(60):
        M = random_small_matroid(rng)
        assert set(M.components()) == brute_components(M)


def test_flats_match_brute_force():
    rng = random.Random(5)
    for _ in range(30):
        M = random_small_matroid(rng, 6)
        assert set(M.flats()) == brute_flats(M)


def test_axiom_cross_validation_sample():
    rng = random.Random(11)
    for _ in range(40):
        M = random_small_matroid(rng, 6)
        check_all_axioms(M)


def check_all_axioms(M):
    gm = M.ground_mask
    subs = [s for s in range(gm + 1) if s & ~gm == 0]
    for a in subs:
        assert 0 <= M.r(a) <= a.bit_count()
    for a in subs:
        for b in subs:
            if a & ~b == 0:
                assert M.r(a) <= M.r(b)
            assert M.r(a | b) + M.r(a & b) <= M.r(a) + M.r(b)
    # flat axioms
    flats = set(M.flats())
    for f in flats:
        for l in flats:
            assert M.closure(f & l) == f & l
    for f in flats:
        for s in labels_of(gm & ~f):
            cover = min((l for l in flats if (f | 1 << s) & ~l == 0),
                        key=lambda l: l.bit_count())
            assert not any(f & ~l == 0 and l & ~cover == 0 and l not in (f, cover)
                           for l in flats)
    # independence axioms
    indep = M.independent_sets()
    for a in indep:
        for s in submasks(a):
            assert s in indep
    for a in indep:
        for b in indep:
            if a.bit_count() < b.bit_count():
                assert any((a | bit) in indep for bit in _bits(b & ~a))
    # separators closed under complement/union/intersection
    seps = [s for s in subs if M.conn(s) == 0]
    for s in seps:
        assert gm & ~s in seps
    for s in seps:
        for t in seps:
            assert (s | t) in seps and (s & t) in seps
    assert M.kappa() <= M.rank + M.loops().bit_count()


def submasks(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _bits(mask):
    while mask:
        low = mask & -mask
        mask ^= low
        yield low


def test_minor_intersection_identities():
    rng = random.Random(13)
    for _ in range(20):
        M = random_small_matroid(rng, 6)
        gm = M.ground_mask
        c = rng.randrange(gm + 1) & gm
        d = rng.randrange(gm + 1) & gm
        ic = {s for s in M.restrict(c).independent_sets()}
        idd = {s for s in M.restrict(d).independent_sets()}
        assert ic & idd == set(M.restrict(c & d).independent_sets())
        contracted = M.restrict(c | d).contract(d)
        assert ic & set(M.contract(d).independent_sets()) == set(
            contracted.independent_sets())
