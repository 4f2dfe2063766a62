"""Independent brute-force oracles used to pin expected values.

Everything here works on plain Python sets and loops on purpose: these
functions must stay independent of the bit-packed implementations they
check.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np


def derive_objects_naive(bools, objects):
    n_attr = bools.shape[1]
    out = set(range(n_attr))
    for g in objects:
        out &= {m for m in range(n_attr) if bools[g, m]}
    return out


def derive_attributes_naive(bools, attributes):
    n_obj = bools.shape[0]
    out = set(range(n_obj))
    for m in attributes:
        out &= {g for g in range(n_obj) if bools[g, m]}
    return out


def close_attributes_naive(bools, attributes):
    return derive_objects_naive(bools, derive_attributes_naive(bools, attributes))


def all_concepts_naive(bools):
    """Every (extent, intent) pair by closing all attribute subsets."""
    n_attr = bools.shape[1]
    seen = {}
    for k in range(n_attr + 1):
        for subset in combinations(range(n_attr), k):
            ext = derive_attributes_naive(bools, subset)
            intent = derive_objects_naive(bools, ext)
            seen[frozenset(intent)] = frozenset(ext)
    return sorted((sorted(e), sorted(i)) for i, e in ((i, e) for i, e in seen.items()))


def stability_naive(bools, extent, intent):
    """Exact stability by enumerating every subset of the extent."""
    extent = sorted(extent)
    intent = set(intent)
    hits = 0
    for k in range(len(extent) + 1):
        for sub in combinations(extent, k):
            if derive_objects_naive(bools, sub) == intent:
                hits += 1
    return Fraction(hits, 2 ** len(extent))


def gamma_naive(bools, extent, intent, level):
    """Number of level-sized extent subsets deriving exactly the intent."""
    extent = sorted(extent)
    intent = set(intent)
    hits = 0
    for sub in combinations(extent, level):
        if derive_objects_naive(bools, sub) == intent:
            hits += 1
    return hits


def transitive_reduction_naive(extent_sets):
    """Cover pairs (upper, lower) from pairwise extent inclusion."""
    n = len(extent_sets)
    lt = [[extent_sets[d] < extent_sets[c] for c in range(n)] for d in range(n)]
    covers = []
    for c in range(n):
        for d in range(n):
            if not lt[d][c]:
                continue
            if any(lt[d][z] and lt[z][c] for z in range(n)):
                continue
            covers.append((c, d))
    return sorted(covers)


def kendall_tau_b_naive(x, y):
    """O(n^2) pair counting with tie correction."""
    n = len(x)
    concordant = discordant = 0
    ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = int(x[i] > x[j]) - int(x[i] < x[j])
            dy = int(y[i] > y[j]) - int(y[i] < y[j])
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif dx == dy:
                concordant += 1
            else:
                discordant += 1
    denom = (concordant + discordant + ties_x) * (concordant + discordant + ties_y)
    if denom == 0:
        return 0.0
    return (concordant - discordant) / np.sqrt(denom)


def auc_naive(scores, labels):
    """Pairwise probability that a positive outscores a negative (ties 0.5)."""
    pos = [s for s, l in zip(scores, labels) if l]
    neg = [s for s, l in zip(scores, labels) if not l]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def random_context_bools(rng, n_obj, n_attr, density):
    return rng.random((n_obj, n_attr)) < density
