"""Dispatch layer choosing between the numba and numpy kernel modules."""

from . import _kernels_numpy
from .backend import active_backend

_numba_mod = None


def _impl():
    global _numba_mod
    if active_backend() == "numba":
        if _numba_mod is None:
            from . import _kernels_numba

            _numba_mod = _kernels_numba
        return _numba_mod
    return _kernels_numpy


def cbo_enumerate(rows, cols, n_obj, n_attr, min_support, budget):
    return _impl().cbo_enumerate(rows, cols, n_obj, n_attr, min_support, budget)


def cover_children(extents, intents, cols, sort_order, n_attr):
    return _impl().cover_children(extents, intents, cols, sort_order, n_attr)


def order_scan(ext_s, sizes_s, group_start, pow_table, binom, n_levels):
    return _impl().order_scan(ext_s, sizes_s, group_start, pow_table, binom, n_levels)


def ideal_members(extents, sizes, c):
    return _impl().ideal_members(extents, sizes, c)


def mobius_row(extents, sizes, ideal, c):
    return _impl().mobius_row(extents, sizes, ideal, c)


def robustness_mu_all(extents, sizes, pow_table):
    return _impl().robustness_mu_all(extents, sizes, pow_table)


def mc_closure_hits(rows, n_obj, full_int, extent, intent, rand_words):
    return _impl().mc_closure_hits(rows, n_obj, full_int, extent, intent, rand_words)


def coh_from_extents(indptr, members, sim, average):
    return _impl().coh_from_extents(indptr, members, sim, average)
