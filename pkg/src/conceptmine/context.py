"""Binary object-attribute contexts and their derivation operators.

A context is a named binary incidence between objects and attributes.  The
prime operators map object sets to the attributes they all share and
attribute sets to the objects carrying all of them; applying them twice is a
closure.  Empty sets follow the usual convention: deriving no objects yields
every attribute, deriving no attributes yields every object.

Incidence rows and columns are stored bit-packed (see ``bitsets``) so that
the derivations reduce to word-parallel intersections.  Contexts are
immutable after construction; generation and noise injection return fresh
contexts and draw from counter-based (Philox) streams keyed by their seed,
so results never depend on call order.
"""

from dataclasses import dataclass

import numpy as np

from . import bitsets
from .errors import DimensionError


def rng_stream(seed, *path):
    """Deterministic Philox generator for the sub-stream named by path."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


class _PackedSet:
    """Immutable bit-level set over ``0..universe-1``."""

    __slots__ = ("universe", "words")

    def __init__(self, universe, words):
        self.universe = int(universe)
        words = np.asarray(words, dtype=np.uint64)
        words.setflags(write=False)
        self.words = words

    @classmethod
    def from_indices(cls, universe, indices):
        try:
            words = bitsets.mask_from_indices(indices, universe)
        except IndexError as exc:
            raise DimensionError(str(exc)) from None
        return cls(universe, words)

    @classmethod
    def empty(cls, universe):
        return cls(universe, bitsets.empty_mask(universe))

    @classmethod
    def full(cls, universe):
        return cls(universe, bitsets.full_mask(universe))

    def indices(self):
        return bitsets.indices_from_mask(self.words)

    def to_frozenset(self):
        return frozenset(int(i) for i in self.indices())

    def __len__(self):
        return bitsets.popcount(self.words)

    def __contains__(self, i):
        i = int(i)
        if i < 0 or i >= self.universe:
            return False
        return bool((int(self.words[i >> 6]) >> (i & 63)) & 1)

    def __eq__(self, other):
        if not isinstance(other, _PackedSet):
            return NotImplemented
        return self.universe == other.universe and bool(np.array_equal(self.words, other.words))

    def __hash__(self):
        return hash((self.universe, self.words.tobytes()))

    def __le__(self, other):
        self._check_same(other)
        return bitsets.is_subset(self.words, other.words)

    def _check_same(self, other):
        if self.universe != other.universe:
            raise DimensionError("sets live over universes of different sizes")

    def __repr__(self):
        return f"{type(self).__name__}({sorted(self.to_frozenset())}, universe={self.universe})"


class ObjectSet(_PackedSet):
    """Set of object indices of one context."""


class AttributeSet(_PackedSet):
    """Set of attribute indices of one context."""


def _coerce(cls, value, universe):
    if isinstance(value, _PackedSet):
        if value.universe != universe:
            raise DimensionError(
                f"set over universe {value.universe} used with a context expecting {universe}"
            )
        return value
    return cls.from_indices(universe, value)


@dataclass(frozen=True)
class NoiseSpec:
    """Independent cell flips: each entry changes with the given probability."""

    rate: float
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError(f"noise rate must be in [0, 1], got {self.rate}")


@dataclass(frozen=True)
class RandomContextSpec:
    """Bernoulli context: density is the rate of ones among the cells."""

    n_objects: int
    n_attributes: int
    density: float
    seed: int

    def __post_init__(self):
        if self.n_objects < 1 or self.n_attributes < 1:
            raise ValueError("context dimensions must be positive")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {self.density}")


class FormalContext:
    """Named binary incidence between |G| objects and |M| attributes."""

    __slots__ = ("object_names", "attribute_names", "bools", "_rows", "_cols")

    def __init__(self, object_names, attribute_names, incidence):
        object_names = tuple(str(s) for s in object_names)
        attribute_names = tuple(str(s) for s in attribute_names)
        if len(object_names) < 1 or len(attribute_names) < 1:
            raise ValueError("a context needs at least one object and one attribute")
        if len(set(object_names)) != len(object_names):
            raise ValueError("duplicate object names")
        if len(set(attribute_names)) != len(attribute_names):
            raise ValueError("duplicate attribute names")
        bools = self._coerce_incidence(incidence, len(object_names), len(attribute_names))
        bools.setflags(write=False)
        self.object_names = object_names
        self.attribute_names = attribute_names
        self.bools = bools
        self._rows = None
        self._cols = None

    @staticmethod
    def _coerce_incidence(incidence, n_obj, n_attr):
        if isinstance(incidence, np.ndarray) and incidence.dtype == bool:
            mat = np.array(incidence, dtype=bool)
            if mat.shape != (n_obj, n_attr):
                raise DimensionError(f"incidence shape {mat.shape} != ({n_obj}, {n_attr})")
            return mat
        mat = np.zeros((n_obj, n_attr), dtype=bool)
        rows = list(incidence)
        if len(rows) != n_obj:
            raise DimensionError(f"{len(rows)} incidence rows for {n_obj} objects")
        for g, row in enumerate(rows):
            for m in row:
                m = int(m)
                if m < 0 or m >= n_attr:
                    raise DimensionError(f"attribute index {m} out of range in row {g}")
                mat[g, m] = True
        return mat

    @classmethod
    def from_rows(cls, object_names, attribute_names, rows):
        return cls(object_names, attribute_names, rows)

    @property
    def n_objects(self):
        return len(self.object_names)

    @property
    def n_attributes(self):
        return len(self.attribute_names)

    @property
    def shape(self):
        return (self.n_objects, self.n_attributes)

    @property
    def rows(self):
        """Packed incidence rows: (|G|, words over attributes)."""
        if self._rows is None:
            packed = bitsets.pack_bool_matrix(self.bools)
            packed.setflags(write=False)
            self._rows = packed
        return self._rows

    @property
    def cols(self):
        """Packed incidence columns: (|M|, words over objects)."""
        if self._cols is None:
            packed = bitsets.pack_bool_matrix(self.bools.T)
            packed.setflags(write=False)
            self._cols = packed
        return self._cols

    @property
    def row_sizes(self):
        return self.bools.sum(axis=1)

    @property
    def col_sizes(self):
        return self.bools.sum(axis=0)

    def density(self):
        return float(self.bools.mean())

    def object_set(self, indices):
        return _coerce(ObjectSet, indices, self.n_objects)

    def attribute_set(self, indices):
        return _coerce(AttributeSet, indices, self.n_attributes)

    def __eq__(self, other):
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (
            self.object_names == other.object_names
            and self.attribute_names == other.attribute_names
            and bool(np.array_equal(self.bools, other.bools))
        )

    def __hash__(self):
        return hash((self.object_names, self.attribute_names, self.bools.tobytes()))

    def __repr__(self):
        return f"FormalContext({self.n_objects}x{self.n_attributes}, density={self.density():.3f})"


def derive_objects(ctx, objects):
    """Attributes common to every object in the set (all of M for the empty set)."""
    a = _coerce(ObjectSet, objects, ctx.n_objects)
    out = bitsets.full_mask(ctx.n_attributes)
    rows = ctx.rows
    for g in a.indices():
        out &= rows[g]
    return AttributeSet(ctx.n_attributes, out)


def derive_attributes(ctx, attributes):
    """Objects carrying every attribute in the set (all of G for the empty set)."""
    b = _coerce(AttributeSet, attributes, ctx.n_attributes)
    out = bitsets.full_mask(ctx.n_objects)
    cols = ctx.cols
    for m in b.indices():
        out &= cols[m]
    return ObjectSet(ctx.n_objects, out)


def close_attributes(ctx, attributes):
    """Closure B'' of an attribute set; a superset of B and idempotent."""
    return derive_objects(ctx, derive_attributes(ctx, attributes))


def close_objects(ctx, objects):
    """Closure A'' of an object set."""
    return derive_attributes(ctx, derive_objects(ctx, objects))


def _default_names(prefix, n):
    return tuple(f"{prefix}{i}" for i in range(n))


def generate_random_context(spec=None, **kwargs):
    """Draw a context with i.i.d. Bernoulli(density) cells from a seeded stream."""
    if spec is None:
        spec = RandomContextSpec(**kwargs)
    rng = rng_stream(spec.seed)
    cells = rng.random((spec.n_objects, spec.n_attributes)) < spec.density
    return FormalContext(
        _default_names("g", spec.n_objects),
        _default_names("m", spec.n_attributes),
        cells,
    )


def apply_noise(ctx, spec=None, **kwargs):
    """Flip each cell independently with probability ``rate``; names are kept."""
    if spec is None:
        spec = NoiseSpec(**kwargs)
    rng = rng_stream(spec.seed)
    flips = rng.random(ctx.shape) < spec.rate
    return FormalContext(ctx.object_names, ctx.attribute_names, ctx.bools ^ flips)
