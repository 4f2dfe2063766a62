"""Pure-numpy fallback for the hot kernels in ``_kernels_numba``.

Same signatures and results, no compilation step.  Closure enumeration uses
arbitrary-width Python integers as bitsets internally (exactness for free)
and packs the results into uint64 words on the way out.
"""

import numpy as np

from . import bitsets


def _words_to_int(words):
    return int.from_bytes(words.tobytes(), "little")


def _int_to_words(value, width):
    return np.frombuffer(value.to_bytes(width * 8, "little"), dtype=np.uint64).copy()


def cbo_enumerate(rows, cols, n_obj, n_attr, min_support, budget):
    wg = cols.shape[1]
    wm = rows.shape[1]
    row_ints = [_words_to_int(rows[g]) for g in range(n_obj)]
    col_ints = [_words_to_int(cols[m]) for m in range(n_attr)]
    full_ext = (1 << n_obj) - 1
    full_int = (1 << n_attr) - 1

    def close(ext):
        d = full_int
        x = ext
        while x:
            g = (x & -x).bit_length() - 1
            d &= row_ints[g]
            x &= x - 1
        return d

    if n_obj < min_support:
        return (np.zeros((0, wg), np.uint64), np.zeros((0, wm), np.uint64), 0, 0)

    root_int = close(full_ext)
    extents = [full_ext]
    intents = [root_int]
    stack = [(full_ext, root_int, 0)]
    status = 0
    while stack:
        ext, intent, j = stack.pop()
        for m in range(j, n_attr):
            if (intent >> m) & 1:
                continue
            child_ext = ext & col_ints[m]
            if child_ext.bit_count() < min_support:
                continue
            child_int = close(child_ext)
            mask = (1 << m) - 1
            if (child_int ^ intent) & mask:
                continue
            if len(extents) >= budget:
                return (np.zeros((0, wg), np.uint64), np.zeros((0, wm), np.uint64), len(extents), 1)
            extents.append(child_ext)
            intents.append(child_int)
            stack.append((child_ext, child_int, m + 1))
    n = len(extents)
    out_ext = np.zeros((n, wg), dtype=np.uint64)
    out_int = np.zeros((n, wm), dtype=np.uint64)
    for i in range(n):
        out_ext[i] = _int_to_words(extents[i], wg)
        out_int[i] = _int_to_words(intents[i], wm)
    return out_ext, out_int, n, status


def cover_children(extents, intents, cols, sort_order, n_attr):
    n = extents.shape[0]
    lookup = {extents[i].tobytes(): i for i in range(n)}
    child_ids = np.full((n, n_attr), -1, dtype=np.int64)
    child_counts = np.zeros(n, dtype=np.int64)
    intent_bits = bitsets.unpack_to_bool_matrix(intents, n_attr)
    for c in range(n):
        absent = np.flatnonzero(~intent_bits[c])
        if absent.size == 0:
            continue
        probes = extents[c][None, :] & cols[absent]
        seen = []
        for row in probes:
            d = lookup.get(row.tobytes(), -1)
            if d >= 0 and d not in seen:
                seen.append(d)
        if not seen:
            continue
        cand = np.array(seen, dtype=np.int64)
        ci = intents[cand]
        k = cand.size
        minimal = np.ones(k, dtype=bool)
        for t in range(k):
            for u in range(k):
                if u == t:
                    continue
                inside = not np.any(ci[u] & ~ci[t])
                if inside and not np.array_equal(ci[u], ci[t]):
                    minimal[t] = False
                    break
        kept = cand[minimal]
        child_ids[c, : kept.size] = kept
        child_counts[c] = kept.size
    return child_ids, child_counts


def order_scan(ext_s, sizes_s, group_start, pow_table, binom, n_levels):
    n = ext_s.shape[0]
    n_alpha = pow_table.shape[0]
    sig = [0] * n
    rob = np.ones((n, n_alpha), dtype=np.float64)
    gam = np.zeros((n, n_levels + 1), dtype=np.float64)
    for i in range(n):
        size_i = int(sizes_s[i])
        value = 1 << size_i
        if n_levels >= 2:
            gam[i, 2:] = binom[size_i, 2:]
        limit = int(group_start[i])
        if limit > 0:
            mask = ~np.any(ext_s[:limit] & ~ext_s[i], axis=1)
            ids = np.flatnonzero(mask)
            if ids.size:
                for d in ids:
                    value -= sig[d]
                deltas = size_i - sizes_s[ids]
                rob[i] -= (pow_table[:, deltas].T * rob[ids]).sum(axis=0)
                if n_levels >= 2:
                    gam[i, 2:] -= gam[ids, 2:].sum(axis=0)
        sig[i] = value
    sig_hi = np.zeros(n, dtype=np.uint64)
    sig_lo = np.zeros(n, dtype=np.uint64)
    mask64 = (1 << 64) - 1
    for i in range(n):
        sig_lo[i] = sig[i] & mask64
        sig_hi[i] = (sig[i] >> 64) & mask64
    return sig_hi, sig_lo, rob, gam


def ideal_members(extents, sizes, c):
    mask = ~np.any(extents & ~extents[c], axis=1)
    mask &= sizes <= sizes[c]
    return np.flatnonzero(mask).astype(np.int64)


def mobius_row(extents, sizes, ideal, c):
    k = ideal.shape[0]
    mu = np.zeros(k, dtype=np.int64)
    for t in range(k):
        d = ideal[t]
        if d == c:
            mu[t] = 1
            continue
        prior = ideal[:t]
        above = (sizes[prior] > sizes[d]) & ~np.any(extents[d] & ~extents[prior], axis=1)
        mu[t] = -int(mu[:t][above].sum())
    return mu


def robustness_mu_all(extents, sizes, pow_table):
    n = extents.shape[0]
    n_alpha = pow_table.shape[0]
    rob = np.empty((n, n_alpha), dtype=np.float64)
    for c in range(n):
        ideal = ideal_members(extents, sizes, c)
        ideal = ideal[np.argsort(-sizes[ideal], kind="stable")]
        mu = mobius_row(extents, sizes, ideal, c)
        deltas = sizes[c] - sizes[ideal]
        rob[c] = (pow_table[:, deltas] * mu[None, :]).sum(axis=1)
    return rob


def mc_closure_hits(rows, n_obj, full_int, extent, intent, rand_words):
    n_attr = bitsets.popcount(np.asarray(full_int))
    bools = bitsets.unpack_to_bool_matrix(rows, n_attr)
    ext_bool = bitsets.unpack_to_bool_matrix(extent[None, :], n_obj)[0]
    rand_bool = bitsets.unpack_to_bool_matrix(rand_words, n_obj)
    sel = rand_bool & ext_bool[None, :]
    missing = (~bools).astype(np.uint32)
    lacking = sel.astype(np.uint32) @ missing
    derived = lacking == 0
    intent_bool = bitsets.unpack_to_bool_matrix(intent[None, :], n_attr)[0]
    return int(np.all(derived == intent_bool[None, :], axis=1).sum())


def coh_from_extents(indptr, members, sim, average):
    n = indptr.shape[0] - 1
    out = np.ones(n, dtype=np.float64)
    for c in range(n):
        mem = members[indptr[c] : indptr[c + 1]]
        k = mem.size
        if k < 2:
            continue
        sub = sim[np.ix_(mem, mem)]
        if average:
            out[c] = (sub.sum() - np.trace(sub)) / (k * (k - 1))
        else:
            out[c] = sub[~np.eye(k, dtype=bool)].min()
    return out
