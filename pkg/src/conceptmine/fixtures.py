"""Bundled demo contexts.

Two catalogue contexts relate interestingness indices (objects) to their
computational features (attributes): ``fig2`` covers the subsampling-based
family over 11 features, ``table1`` the full catalogue over 19 features.
Their lattice sizes (8 and 73 concepts) are regression-tested.

``block_context`` builds the synthetic block-diagonal contexts used by the
noise-filtering study: disjoint groups of objects, each carrying its own
group of attributes and nothing else.
"""

import numpy as np

from .context import FormalContext

# feature columns are 1-based in the listings below
_FIG2_ROWS = {
    "stability": (1, 2, 10),
    "delta_l": (1, 2, 3, 4, 5, 6, 8, 9, 11),
    "delta_h": (1, 2, 3, 4, 5, 6, 8, 9, 11),
    "stab2noe": (1, 2, 3, 4, 5, 6, 8, 9),
    "stab2oe": (1, 2, 3, 4, 5, 6, 8, 9),
    "stab2oie": (1, 2, 3, 4, 5, 6, 8, 9, 11),
    "robustness": (1, 2, 3, 4, 6, 7, 10, 11),
}

_TABLE1_ROWS = {
    "stability": (1, 2, 11, 18),
    "delta_l": (1, 2, 5, 6, 9, 11, 14, 16, 19),
    "delta_h": (1, 2, 5, 6, 9, 11, 14, 16, 19),
    "stab2noe": (1, 2, 5, 6, 9, 11, 14, 16),
    "stab2oe": (1, 2, 5, 6, 9, 11, 14, 16),
    "stab2oie": (1, 2, 5, 6, 9, 11, 14, 16, 19),
    "robustness": (1, 2, 5, 11, 12, 18, 19),
    "probability": (1, 2, 4, 8, 14, 16, 19),
    "separation": (1, 4, 9, 14, 16),
    "support": (3, 7, 11, 14, 15, 19),
    "frequency": (3, 7, 11, 12, 13, 14, 15, 19),
    "monocle": (1, 2, 18),
    "delta_tcfi": (1, 2, 5, 6, 7, 9, 11, 12, 13, 14, 16, 19),
    "margin_closed": (1, 2, 5, 7, 9, 12, 13, 18, 19),
    "margin_closed_relaxed": (1, 2, 5, 6, 7, 9, 11, 14, 16),
    "similarity": (1, 2, 5, 6, 14, 18),
    "predictability": (1, 2, 4, 5, 6, 10, 14, 18),
    "cv": (1, 10, 11, 14, 16, 19),
    "cfc": (1, 4, 10, 11, 14, 16, 19),
    "cu": (1, 4, 8, 10, 14, 16, 19),
}


def _catalogue_context(rows, n_attr):
    names = list(rows)
    mat = np.zeros((len(names), n_attr), dtype=bool)
    for i, cols in enumerate(rows.values()):
        for c in cols:
            mat[i, c - 1] = True
    return FormalContext(names, [f"a{j}" for j in range(1, n_attr + 1)], mat)


def fig2_context():
    """7 subsampling-based indices x 11 features; its lattice has 8 concepts."""
    return _catalogue_context(_FIG2_ROWS, 11)


def table1_context():
    """20 indices x 19 features; its lattice has 73 concepts."""
    return _catalogue_context(_TABLE1_ROWS, 19)


DEMO_CONTEXTS = {"fig2": fig2_context, "table1": table1_context}


def block_context(n_objects, n_attributes, n_blocks):
    """Disjoint all-ones blocks: objects and attributes split evenly."""
    if n_objects % n_blocks or n_attributes % n_blocks:
        raise ValueError("block_context needs dimensions divisible by n_blocks")
    per_obj = n_objects // n_blocks
    per_attr = n_attributes // n_blocks
    mat = np.zeros((n_objects, n_attributes), dtype=bool)
    for b in range(n_blocks):
        mat[b * per_obj : (b + 1) * per_obj, b * per_attr : (b + 1) * per_attr] = True
    return FormalContext(
        [f"g{i}" for i in range(n_objects)],
        [f"m{j}" for j in range(n_attributes)],
        mat,
    )


def noise_fixture_wide():
    """300 objects x 6 attributes in three disjoint blocks."""
    return block_context(300, 6, 3)


def noise_fixture_narrow():
    """400 objects x 4 attributes in four disjoint blocks."""
    return block_context(400, 4, 4)
