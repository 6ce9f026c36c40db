"""Independent brute-force references used to check the library's fast paths.

Nothing here calls the compiled kernels or the cover-based reductions; every
property is checked straight from its definition over all pairs.
"""

from itertools import combinations, product

from ksubmod.core import LabeledSet, join, meet, partial_leq


def points(f):
    return [LabeledSet(f.ground, f.k, labels) for labels in product(range(f.k + 1), repeat=f.ground.n)]


def brute_monotone(f):
    pts = points(f)
    vals = {x: f.evaluate(x) for x in pts}
    return all(vals[x] <= vals[y] for x in pts for y in pts if partial_leq(x, y))


def brute_ksub_violations(f):
    pts = points(f)
    vals = {x: f.evaluate(x) for x in pts}
    return [
        (x, y)
        for a, x in enumerate(pts)
        for y in pts[a + 1:]
        if vals[x] + vals[y] < vals[join(x, y)] + vals[meet(x, y)]
    ]


def brute_orthant(f):
    """Full definition: every comparable pair x ⪯ y, not just covers."""
    pts = points(f)
    vals = {x: f.evaluate(x) for x in pts}
    for x in pts:
        for y in pts:
            if not partial_leq(x, y):
                continue
            for p in range(f.ground.n):
                if y.labels[p]:
                    continue
                for i in range(1, f.k + 1):
                    if vals[x.assign(p, i)] - vals[x] < vals[y.assign(p, i)] - vals[y]:
                        return False
    return True


def brute_pairwise(f):
    pts = points(f)
    vals = {x: f.evaluate(x) for x in pts}
    for x in pts:
        for p in range(f.ground.n):
            if x.labels[p]:
                continue
            for i, j in combinations(range(1, f.k + 1), 2):
                if vals[x.assign(p, i)] + vals[x.assign(p, j)] < 2 * vals[x]:
                    return False
    return True


def classical_matroid_greedy(f, m):
    """Textbook greedy for a set function (k = 1) under a matroid.

    Scans every element each round, keeps the first strict maximum.
    """
    assert f.k == 1
    ground = f.ground
    chosen = []
    value = f.evaluate(LabeledSet.zero(ground, 1))
    while True:
        best = None
        for e in ground.elements:
            if e in chosen or not m.is_independent(set(chosen) | {e}):
                continue
            x = LabeledSet.from_parts(ground, [set(chosen) | {e}])
            gain = f.evaluate(x) - value
            if best is None or gain > best[0]:
                best = (gain, e)
        if best is None:
            break
        chosen.append(best[1])
        value += best[0]
    return LabeledSet.from_parts(ground, [chosen]), value


def brute_is_matroid(m):
    """Literal (M1)-(M3) over all subsets and all independent pairs."""
    elems = m.ground.elements
    subsets = [frozenset(c) for r in range(len(elems) + 1) for c in combinations(elems, r)]
    indep = {F for F in subsets if m.is_independent(F)}
    if frozenset() not in indep:
        return False
    if any(A <= B and A not in indep for B in indep for A in subsets):
        return False
    for A in indep:
        for B in indep:
            if len(A) < len(B) and not any(A | {e} in indep for e in B - A):
                return False
    return True
