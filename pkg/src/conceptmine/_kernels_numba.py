"""Numba implementations of the hot kernels.

Everything here operates on bit-packed uint64 arrays (see ``bitsets``) and is
mirrored, with identical semantics, by ``_kernels_numpy``.  Concept counts
``sigma`` are kept as exact two-limb (128-bit) integers because they reach
``2**|extent|``; callers fall back to arbitrary-precision Python integers for
more than 126 objects.
"""

import numpy as np
from numba import njit

U1 = np.uint64(1)
U0 = np.uint64(0)
M1 = np.uint64(0x5555555555555555)
M2 = np.uint64(0x3333333333333333)
M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> U1) & M1)
    x = (x & M2) + ((x >> np.uint64(2)) & M2)
    x = (x + (x >> np.uint64(4))) & M4
    return (x * H01) >> np.uint64(56)


@njit(cache=True)
def _popcount_words(words):
    total = 0
    for w in range(words.shape[0]):
        total += _popcount(words[w])
    return total


@njit(cache=True, inline="always")
def _is_subset(a, b, row_a, row_b, width):
    for w in range(width):
        if a[row_a, w] & ~b[row_b, w] != U0:
            return False
    return True


@njit(cache=True)
def _close_extent(extent, rows, n_obj, full_intent, out):
    """Intersect the rows of every object in ``extent``; empty extent -> all attrs."""
    wm = full_intent.shape[0]
    for w in range(wm):
        out[w] = full_intent[w]
    for g in range(n_obj):
        if (extent[g >> 6] >> np.uint64(g & 63)) & U1 != U0:
            for w in range(wm):
                out[w] &= rows[g, w]


@njit(cache=True)
def cbo_enumerate(rows, cols, n_obj, n_attr, min_support, budget):
    """Canonicity-tested closure enumeration over attributes.

    Returns (extents, intents, count, status); status 1 means the concept
    budget was exceeded and the outputs are meaningless.
    """
    wm = rows.shape[1]
    wg = cols.shape[1]

    full_ext = np.zeros(wg, dtype=np.uint64)
    for g in range(n_obj):
        full_ext[g >> 6] |= U1 << np.uint64(g & 63)
    full_int = np.zeros(wm, dtype=np.uint64)
    for m in range(n_attr):
        full_int[m >> 6] |= U1 << np.uint64(m & 63)

    cap = 1024
    out_ext = np.zeros((cap, wg), dtype=np.uint64)
    out_int = np.zeros((cap, wm), dtype=np.uint64)

    stack_ext = np.zeros((n_attr + 2, wg), dtype=np.uint64)
    stack_int = np.zeros((n_attr + 2, wm), dtype=np.uint64)
    stack_j = np.zeros(n_attr + 2, dtype=np.int64)

    scratch_ext = np.zeros(wg, dtype=np.uint64)
    scratch_int = np.zeros(wm, dtype=np.uint64)

    root_int = np.zeros(wm, dtype=np.uint64)
    _close_extent(full_ext, rows, n_obj, full_int, root_int)

    count = 0
    if n_obj >= min_support:
        out_ext[0] = full_ext
        out_int[0] = root_int
        count = 1
    else:
        return out_ext[:0], out_int[:0], 0, 0

    sp = 0
    stack_ext[0] = full_ext
    stack_int[0] = root_int
    stack_j[0] = 0

    while sp >= 0:
        j = stack_j[sp]
        if j >= n_attr:
            sp -= 1
            continue
        stack_j[sp] = j + 1
        if (stack_int[sp, j >> 6] >> np.uint64(j & 63)) & U1 != U0:
            continue
        for w in range(wg):
            scratch_ext[w] = stack_ext[sp, w] & cols[j, w]
        if _popcount_words(scratch_ext) < min_support:
            continue
        _close_extent(scratch_ext, rows, n_obj, full_int, scratch_int)
        # canonicity: the closure may not add attributes below j
        canonical = True
        jw = j >> 6
        for w in range(jw + 1):
            if w < jw:
                mask = ~U0
            else:
                shift = np.uint64(j & 63)
                mask = (U1 << shift) - U1
            if (scratch_int[w] ^ stack_int[sp, w]) & mask != U0:
                canonical = False
                break
        if not canonical:
            continue
        if count >= budget:
            return out_ext[:0], out_int[:0], count, 1
        if count == cap:
            cap *= 2
            new_ext = np.zeros((cap, wg), dtype=np.uint64)
            new_int = np.zeros((cap, wm), dtype=np.uint64)
            new_ext[:count] = out_ext
            new_int[:count] = out_int
            out_ext = new_ext
            out_int = new_int
        out_ext[count] = scratch_ext
        out_int[count] = scratch_int
        count += 1
        sp += 1
        stack_ext[sp] = scratch_ext
        stack_int[sp] = scratch_int
        stack_j[sp] = j + 1

    return out_ext[:count], out_int[:count], count, 0


@njit(cache=True, inline="always")
def _compare_rows(a, row_a, b, row_b, width):
    for w in range(width - 1, -1, -1):
        va = a[row_a, w]
        vb = b[row_b, w]
        if va < vb:
            return -1
        if va > vb:
            return 1
    return 0


@njit(cache=True)
def _lookup_extent(extents, sort_order, probe, width):
    lo = 0
    hi = sort_order.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        cand = sort_order[mid]
        cmp = 0
        for w in range(width - 1, -1, -1):
            va = extents[cand, w]
            vb = probe[w]
            if va < vb:
                cmp = -1
                break
            if va > vb:
                cmp = 1
                break
        if cmp < 0:
            lo = mid + 1
        elif cmp > 0:
            hi = mid
        else:
            return cand
    return -1


@njit(cache=True)
def cover_children(extents, intents, cols, sort_order, n_attr):
    """Direct lower neighbors on a complete lattice.

    For every concept and absent attribute, close the widened intent (its
    extent is ``extent & col``) and keep the minimal proper super-intents.
    Returns an (n, n_attr) id matrix padded with -1 plus per-row counts.
    """
    n = extents.shape[0]
    wg = extents.shape[1]
    wm = intents.shape[1]
    child_ids = np.full((n, n_attr), -1, dtype=np.int64)
    child_counts = np.zeros(n, dtype=np.int64)
    probe = np.zeros(wg, dtype=np.uint64)
    cand = np.empty(n_attr, dtype=np.int64)

    for c in range(n):
        k = 0
        for m in range(n_attr):
            if (intents[c, m >> 6] >> np.uint64(m & 63)) & U1 != U0:
                continue
            for w in range(wg):
                probe[w] = extents[c, w] & cols[m, w]
            d = _lookup_extent(extents, sort_order, probe, wg)
            if d < 0:
                continue
            dup = False
            for t in range(k):
                if cand[t] == d:
                    dup = True
                    break
            if not dup:
                cand[k] = d
                k += 1
        # keep candidates whose intent is minimal among the candidates
        kept = 0
        for t in range(k):
            d = cand[t]
            minimal = True
            for u in range(k):
                if u == t:
                    continue
                e = cand[u]
                if e == d:
                    continue
                # e's intent strictly inside d's intent disqualifies d
                if _is_subset(intents, intents, e, d, wm):
                    same = True
                    for w in range(wm):
                        if intents[e, w] != intents[d, w]:
                            same = False
                            break
                    if not same:
                        minimal = False
                        break
            if minimal:
                child_ids[c, kept] = d
                kept += 1
        child_counts[c] = kept
    return child_ids, child_counts


@njit(cache=True)
def order_scan(ext_s, sizes_s, group_start, pow_table, binom, n_levels):
    """Fused bottom-up recursions over the concept order (sorted by extent size).

    For each concept, scanning its strict subconcepts once yields:
      * sigma as exact 128-bit counts: 2**size minus the subconcept sigmas,
      * robustness per alpha: 1 - sum x**delta * r(d),
      * gamma per level j: C(size, j) - sum gamma_j(d).
    """
    n = ext_s.shape[0]
    wg = ext_s.shape[1]
    n_alpha = pow_table.shape[0]
    sig_hi = np.zeros(n, dtype=np.uint64)
    sig_lo = np.zeros(n, dtype=np.uint64)
    rob = np.empty((n, n_alpha), dtype=np.float64)
    gam = np.zeros((n, n_levels + 1), dtype=np.float64)

    for i in range(n):
        size_i = sizes_s[i]
        if size_i >= 64:
            sig_hi[i] = U1 << np.uint64(size_i - 64)
            sig_lo[i] = U0
        else:
            sig_hi[i] = U0
            sig_lo[i] = U1 << np.uint64(size_i)
        for a in range(n_alpha):
            rob[i, a] = 1.0
        for j in range(2, n_levels + 1):
            gam[i, j] = binom[size_i, j]
        limit = group_start[i]
        for d in range(limit):
            subset = True
            for w in range(wg):
                if ext_s[d, w] & ~ext_s[i, w] != U0:
                    subset = False
                    break
            if not subset:
                continue
            # two-limb subtraction sigma_i -= sigma_d
            lo = sig_lo[i] - sig_lo[d]
            borrow = U1 if sig_lo[i] < sig_lo[d] else U0
            sig_hi[i] = sig_hi[i] - sig_hi[d] - borrow
            sig_lo[i] = lo
            delta = size_i - sizes_s[d]
            for a in range(n_alpha):
                rob[i, a] -= pow_table[a, delta] * rob[d, a]
            for j in range(2, n_levels + 1):
                gam[i, j] -= gam[d, j]
    return sig_hi, sig_lo, rob, gam


@njit(cache=True)
def mobius_row(extents, sizes, ideal, c):
    """Mobius function mu(d, c) for every d in the order ideal of c.

    ``ideal`` must hold the ids of all concepts below-or-equal c sorted by
    extent size descending (c first).  Returns int64 values aligned with it.
    """
    k = ideal.shape[0]
    wg = extents.shape[1]
    mu = np.zeros(k, dtype=np.int64)
    for t in range(k):
        d = ideal[t]
        if d == c:
            mu[t] = 1
            continue
        acc = 0
        for u in range(t):
            z = ideal[u]
            if sizes[z] <= sizes[d]:
                continue
            if _is_subset(extents, extents, d, z, wg):
                acc += mu[u]
        mu[t] = -acc
    return mu


@njit(cache=True)
def ideal_members(extents, sizes, c):
    """Ids of all concepts whose extent is contained in concept c's extent."""
    n = extents.shape[0]
    wg = extents.shape[1]
    out = np.empty(n, dtype=np.int64)
    k = 0
    for d in range(n):
        if sizes[d] > sizes[c]:
            continue
        if _is_subset(extents, extents, d, c, wg):
            out[k] = d
            k += 1
    return out[:k]


@njit(cache=True)
def robustness_mu_all(extents, sizes, pow_table):
    """Robustness for every concept via explicit per-concept Mobius tables."""
    n = extents.shape[0]
    n_alpha = pow_table.shape[0]
    rob = np.empty((n, n_alpha), dtype=np.float64)
    for c in range(n):
        ideal = ideal_members(extents, sizes, c)
        order = np.argsort(-sizes[ideal])
        ideal = ideal[order]
        mu = mobius_row(extents, sizes, ideal, c)
        for a in range(n_alpha):
            acc = 0.0
            for t in range(ideal.shape[0]):
                acc += mu[t] * pow_table[a, sizes[c] - sizes[ideal[t]]]
            rob[c, a] = acc
    return rob


@njit(cache=True)
def mc_closure_hits(rows, n_obj, full_int, extent, intent, rand_words):
    """Count sampled subsets of the extent whose derivation equals the intent."""
    samples = rand_words.shape[0]
    wg = extent.shape[0]
    wm = full_int.shape[0]
    sub = np.zeros(wg, dtype=np.uint64)
    closed = np.zeros(wm, dtype=np.uint64)
    hits = 0
    for s in range(samples):
        for w in range(wg):
            sub[w] = extent[w] & rand_words[s, w]
        _close_extent(sub, rows, n_obj, full_int, closed)
        ok = True
        for w in range(wm):
            if closed[w] != intent[w]:
                ok = False
                break
        if ok:
            hits += 1
    return hits


@njit(cache=True)
def coh_from_extents(indptr, members, sim, average):
    """Pairwise-object cohesion per concept: mean or min of the sim matrix."""
    n = indptr.shape[0] - 1
    out = np.ones(n, dtype=np.float64)
    for c in range(n):
        lo = indptr[c]
        hi = indptr[c + 1]
        k = hi - lo
        if k < 2:
            out[c] = 1.0
            continue
        if average:
            acc = 0.0
            for p in range(lo, hi):
                for q in range(p + 1, hi):
                    acc += sim[members[p], members[q]]
            out[c] = acc / (k * (k - 1) / 2.0)
        else:
            best = 1.0
            first = True
            for p in range(lo, hi):
                for q in range(p + 1, hi):
                    v = sim[members[p], members[q]]
                    if first or v < best:
                        best = v
                        first = False
            out[c] = best
    return out
