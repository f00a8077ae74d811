import itertools
import random

import pytest

from matroidtiling.core import Graph, Matroid, labels_of, mask_of


def brute_rank(bases, mask):
    return max((b & mask).bit_count() for b in bases)


def brute_flats(M):
    """Closure classes computed straight from the rank function."""
    out = set()
    gm = M.ground_mask
    for sub in range(gm + 1):
        if sub & ~gm:
            continue
        rk = M.r(sub)
        cl = sub
        for x in M.ground:
            if not sub >> x & 1 and M.r(sub | 1 << x) == rk:
                cl |= 1 << x
        out.add(cl)
    return out


def brute_components(M):
    """Partition by the 'common circuit' relation, from scratch."""
    parent = {x: x for x in M.ground}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in M.circuits():
        ls = labels_of(c)
        for x in ls[1:]:
            ra, rb = find(ls[0]), find(x)
            if ra != rb:
                parent[ra] = rb
    comps = {}
    for x in M.ground:
        comps.setdefault(find(x), 0)
        comps[find(x)] |= 1 << x
    return set(comps.values())


def spanning_tree_count(graph: Graph) -> int:
    """Kirchhoff determinant oracle (numpy), independent of the bitset path."""
    import numpy as np

    n = graph.vertices
    L = np.zeros((n, n))
    for u, v in graph.edges:
        if u == v:
            continue
        L[u, u] += 1
        L[v, v] += 1
        L[u, v] -= 1
        L[v, u] -= 1
    minor = L[1:, 1:]
    return int(round(np.linalg.det(minor))) if n > 1 else 1


@pytest.fixture
def m8():
    """Rank-3 matroid on [5] with the two covering rank-2 flats 123 and 345."""
    bases = [mask_of(c) for c in itertools.combinations(range(1, 6), 3)
             if (mask_of(c) & mask_of([1, 2, 3])).bit_count() <= 2
             and (mask_of(c) & mask_of([3, 4, 5])).bit_count() <= 2]
    return Matroid.from_bases(range(1, 6), bases)


def random_small_matroid(rng: random.Random, n_max=7):
    """A random matroid from a grab-bag of constructions."""
    from matroidtiling.core import SetMap, direct_sum, pullback

    n = rng.randint(2, n_max)
    kind = rng.randrange(4)
    if kind == 0:
        k = rng.randint(0, n)
        return Matroid.uniform(k, range(1, n + 1))
    if kind == 1:
        v = rng.randint(2, 4)
        edges = tuple((rng.randrange(v), rng.randrange(v)) for _ in range(n))
        return Matroid.graphic(Graph(v, edges))
    if kind == 2:
        k = rng.randint(1, n)
        M = Matroid.uniform(k, range(1, n + 1))
        # random degenerations: keep cutting while the result stays a matroid
        for _ in range(rng.randrange(3)):
            sub = rng.randrange(1, 2 ** n)
            mask = mask_of(i + 1 for i in range(n) if sub >> i & 1)
            j = rng.randint(1, max(1, k - 1))
            cand = [b for b in M.bases if (b & mask).bit_count() <= j]
            if not cand:
                continue
            try:
                M = Matroid(M.ground, cand)
            except Exception:
                pass
        return M
    labels = list(range(1, n + 1))
    img = tuple(rng.choice(labels) for _ in labels)
    cod = tuple(sorted(set(img)))
    k = rng.randint(1, len(cod))
    inner = Matroid.uniform(k, cod)
    return pullback(SetMap(tuple(labels), cod, img), inner)
