"""Fixed-width bitset helpers on top of uint64 words.

Sets over a universe of size ``n`` are stored as ``ceil(n/64)`` little-endian
words: element ``i`` lives in bit ``i % 64`` of word ``i // 64``.  All set
algebra used by the lattice machinery is word-parallel.
"""

import numpy as np

WORD_BITS = 64


def words_for(n):
    return (n + WORD_BITS - 1) // WORD_BITS if n > 0 else 1


def tail_mask(n):
    """Mask of valid bits in the last word of an n-element universe."""
    rem = n % WORD_BITS
    if n == 0:
        return np.uint64(0)
    if rem == 0:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64((1 << rem) - 1)


def empty_mask(n):
    return np.zeros(words_for(n), dtype=np.uint64)


def full_mask(n):
    m = np.full(words_for(n), 0xFFFFFFFFFFFFFFFF, dtype=np.uint64)
    m[-1] = tail_mask(n)
    return m


def mask_from_indices(indices, n):
    """Pack an iterable of element indices; raises IndexError when out of range."""
    m = empty_mask(n)
    for i in indices:
        i = int(i)
        if i < 0 or i >= n:
            raise IndexError(f"element {i} out of range for universe of size {n}")
        m[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
    return m


def indices_from_mask(mask):
    """Sorted element indices present in a packed mask."""
    bits = np.unpackbits(mask.view(np.uint8), bitorder="little")
    return np.flatnonzero(bits).astype(np.int64)


def popcount(mask):
    return int(np.bitwise_count(mask).sum())


def is_subset(a, b):
    """True when packed set a ⊆ packed set b."""
    return not np.any(a & ~b)


def pack_bool_matrix(bools):
    """Pack the rows of a boolean matrix into (rows, words) uint64."""
    bools = np.ascontiguousarray(bools, dtype=bool)
    n_rows, n_cols = bools.shape
    w = words_for(n_cols)
    padded = np.zeros((n_rows, w * WORD_BITS), dtype=bool)
    padded[:, :n_cols] = bools
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed.view(np.uint64))


def unpack_to_bool_matrix(packed, n_cols):
    bits = np.unpackbits(packed.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :n_cols].astype(bool)
