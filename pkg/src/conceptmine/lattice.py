"""Concept enumeration and the lattice order.

``enumerate_concepts`` lists every concept of a context (optionally only
those whose extent reaches a minimum support) using canonicity-tested
closures, then assigns ids in a deterministic order: lexicographic by intent
bit pattern, attribute 0 read first.  The covering relation is built by
closing ``intent + {m}`` for each absent attribute and keeping the minimal
proper super-intents; on support-filtered results it falls back to a
maximal-subconcept scan restricted to the surviving concepts.

The lattice object memoizes the order-scan recursions shared by the index
computations: exact subset-closure counts (sigma), robustness per alpha, and
level-wise closure counts (gamma).  Sigma is exact: two-limb integers inside
the kernels for up to 126 objects, arbitrary-precision Python integers
beyond that.
"""

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import bitsets, kernels
from .context import AttributeSet, FormalContext, ObjectSet
from .errors import BudgetExceededError, IncompleteLatticeError

DEFAULT_BUDGET = 1_000_000
BUDGET_ENV_VAR = "CG_BUDGET"


@dataclass(frozen=True)
class Concept:
    """An (extent, intent) pair of mutually closed sets."""

    extent: ObjectSet
    intent: AttributeSet
    id: int


@dataclass(frozen=True)
class MobiusTable:
    """Mobius function values mu(d, c) for every d below a fixed concept c."""

    c_id: int
    ids: np.ndarray
    values: np.ndarray

    def as_dict(self):
        return {int(d): int(v) for d, v in zip(self.ids, self.values)}

    def mu(self, d_id):
        hit = np.flatnonzero(self.ids == d_id)
        if hit.size == 0:
            raise KeyError(f"concept {d_id} is not below concept {self.c_id}")
        return int(self.values[hit[0]])


def resolve_budget(budget=None):
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV_VAR, "").strip()
    if env:
        return int(env)
    return DEFAULT_BUDGET


class ConceptLattice:
    """All concepts of a context plus order and covering-relation queries."""

    def __init__(self, context, extents, intents, min_support=0):
        self.context = context
        self.extents = extents
        self.intents = intents
        self.min_support = int(min_support)
        extents.setflags(write=False)
        intents.setflags(write=False)
        self.extent_sizes = np.bitwise_count(extents).sum(axis=1).astype(np.int64)
        self.intent_sizes = np.bitwise_count(intents).sum(axis=1).astype(np.int64)
        self.top_id = int(np.flatnonzero(self.extent_sizes == context.n_objects)[0])
        bottoms = np.flatnonzero(self.intent_sizes == context.n_attributes)
        self.bottom_id = int(bottoms[0]) if bottoms.size else -1
        self._lower = None
        self._upper = None
        self._size_order = None
        self._sigma = None
        self._rob_cache = {}
        self._gamma = None
        self._extent_bools = None
        self._intent_bools = None

    def __len__(self):
        return self.extents.shape[0]

    @property
    def n_concepts(self):
        return self.extents.shape[0]

    @property
    def is_complete(self):
        return self.min_support == 0

    def require_complete(self, what):
        if not self.is_complete:
            raise IncompleteLatticeError(
                f"{what} needs the complete lattice; this one was mined with min_support="
                f"{self.min_support}"
            )

    def concept(self, i):
        i = self._check_id(i)
        return Concept(
            ObjectSet(self.context.n_objects, self.extents[i].copy()),
            AttributeSet(self.context.n_attributes, self.intents[i].copy()),
            i,
        )

    @property
    def concepts(self):
        return [self.concept(i) for i in range(len(self))]

    def extent_indices(self, i):
        return bitsets.indices_from_mask(self.extents[self._check_id(i)])

    def intent_indices(self, i):
        return bitsets.indices_from_mask(self.intents[self._check_id(i)])

    def extent_bools(self):
        if self._extent_bools is None:
            b = bitsets.unpack_to_bool_matrix(self.extents, self.context.n_objects)
            b.setflags(write=False)
            self._extent_bools = b
        return self._extent_bools

    def intent_bools(self):
        if self._intent_bools is None:
            b = bitsets.unpack_to_bool_matrix(self.intents, self.context.n_attributes)
            b.setflags(write=False)
            self._intent_bools = b
        return self._intent_bools

    def _check_id(self, i):
        i = int(i)
        if not 0 <= i < len(self):
            raise IndexError(f"concept id {i} out of range for lattice of size {len(self)}")
        return i

    # -- order queries -------------------------------------------------------

    def leq(self, c_id, d_id):
        """True iff concept c is below-or-equal d (extent inclusion)."""
        c = self._check_id(c_id)
        d = self._check_id(d_id)
        return bitsets.is_subset(self.extents[c], self.extents[d])

    def descendants(self, c_id):
        """Ids of the order ideal below c, including c itself, ascending."""
        c = self._check_id(c_id)
        ids = kernels.ideal_members(self.extents, self.extent_sizes, c)
        return np.sort(np.asarray(ids, dtype=np.int64))

    def mobius(self, c_id):
        c = self._check_id(c_id)
        ideal = np.asarray(kernels.ideal_members(self.extents, self.extent_sizes, c))
        ideal = ideal[np.argsort(-self.extent_sizes[ideal], kind="stable")]
        mu = kernels.mobius_row(self.extents, self.extent_sizes, ideal, c)
        return MobiusTable(c, ideal, np.asarray(mu, dtype=np.int64))

    # -- covering relation ---------------------------------------------------

    def _build_covers(self):
        n = len(self)
        if self.is_complete:
            sort_order = np.lexsort(self.extents.T).astype(np.int64)
            child_ids, child_counts = kernels.cover_children(
                self.extents, self.intents, self.context.cols, sort_order, self.context.n_attributes
            )
            lower = [np.sort(child_ids[c, : child_counts[c]]) for c in range(n)]
        else:
            lower = self._covers_filtered()
        upper = [[] for _ in range(n)]
        for c in range(n):
            for d in lower[c]:
                upper[int(d)].append(c)
        self._lower = [np.asarray(v, dtype=np.int64) for v in lower]
        self._upper = [np.asarray(sorted(v), dtype=np.int64) for v in upper]

    def _covers_filtered(self):
        # transitive reduction over the surviving concepts only
        n = len(self)
        lower = []
        for c in range(n):
            below = kernels.ideal_members(self.extents, self.extent_sizes, c)
            below = np.asarray([d for d in below if d != c], dtype=np.int64)
            maximal = []
            for d in below:
                dominated = False
                for e in below:
                    if e == d:
                        continue
                    if self.extent_sizes[e] > self.extent_sizes[d] and bitsets.is_subset(
                        self.extents[d], self.extents[e]
                    ):
                        dominated = True
                        break
                if not dominated:
                    maximal.append(int(d))
            lower.append(np.asarray(sorted(maximal), dtype=np.int64))
        return lower

    def lower_neighbors(self, c_id):
        c = self._check_id(c_id)
        if self._lower is None:
            self._build_covers()
        return self._lower[c]

    def upper_neighbors(self, c_id):
        c = self._check_id(c_id)
        if self._upper is None:
            self._build_covers()
        return self._upper[c]

    def cover_edges(self):
        """(upper, lower) id pairs of the covering relation, sorted."""
        if self._lower is None:
            self._build_covers()
        edges = []
        for c in range(len(self)):
            for d in self._lower[c]:
                edges.append((c, int(d)))
        return sorted(edges)

    # -- order-scan recursions (sigma / robustness / gamma) -------------------

    def _order(self):
        if self._size_order is None:
            order = np.argsort(self.extent_sizes, kind="stable").astype(np.int64)
            sizes_s = self.extent_sizes[order]
            group_start = np.searchsorted(sizes_s, sizes_s, side="left").astype(np.int64)
            self._size_order = (order, sizes_s, group_start)
        return self._size_order

    def _run_order_scan(self, alphas=(), n_levels=0):
        order, sizes_s, group_start = self._order()
        max_size = int(sizes_s[-1]) if len(self) else 0
        xs = np.asarray([1.0 - a for a in alphas], dtype=np.float64)
        pow_table = np.empty((len(alphas), max_size + 1), dtype=np.float64)
        for a in range(len(alphas)):
            pow_table[a] = xs[a] ** np.arange(max_size + 1)
        if n_levels:
            binom = np.zeros((max_size + 1, n_levels + 1), dtype=np.float64)
            for s in range(max_size + 1):
                for j in range(2, min(s, n_levels) + 1):
                    binom[s, j] = float(math.comb(s, j))
        else:
            binom = np.zeros((max_size + 1, 1), dtype=np.float64)
        if self.context.n_objects > 126:
            sig, rob_s, gam_s = self._order_scan_bigint(order, sizes_s, group_start, pow_table, binom, n_levels)
        else:
            ext_s = self.extents[order]
            sig_hi, sig_lo, rob_s, gam_s = kernels.order_scan(
                ext_s, sizes_s, group_start, pow_table, binom, n_levels
            )
            sig = [(int(h) << 64) | int(lo) for h, lo in zip(sig_hi, sig_lo)]
        inverse = np.empty(len(self), dtype=np.int64)
        inverse[order] = np.arange(len(self))
        sigma = [sig[inverse[i]] for i in range(len(self))]
        rob = rob_s[inverse]
        gam = gam_s[inverse]
        return sigma, rob, gam

    def _order_scan_bigint(self, order, sizes_s, group_start, pow_table, binom, n_levels):
        # arbitrary-precision sigma for very tall contexts; same recursions
        n = len(self)
        ext_s = self.extents[order]
        sig = [0] * n
        rob = np.ones((n, pow_table.shape[0]), dtype=np.float64)
        gam = np.zeros((n, n_levels + 1), dtype=np.float64)
        for i in range(n):
            size_i = int(sizes_s[i])
            value = 1 << size_i
            if n_levels >= 2:
                gam[i, 2:] = binom[size_i, 2:]
            limit = int(group_start[i])
            if limit:
                mask = ~np.any(ext_s[:limit] & ~ext_s[i], axis=1)
                ids = np.flatnonzero(mask)
                for d in ids:
                    value -= sig[d]
                if ids.size:
                    deltas = size_i - sizes_s[ids]
                    rob[i] -= (pow_table[:, deltas].T * rob[ids]).sum(axis=0)
                    if n_levels >= 2:
                        gam[i, 2:] -= gam[ids, 2:].sum(axis=0)
            sig[i] = value
        return sig, rob, gam

    def sigma_counts(self):
        """Exact per-concept counts of extent subsets deriving the intent."""
        self.require_complete("sigma counts")
        if self._sigma is None:
            self._sigma, _, _ = self._run_order_scan()
        return self._sigma

    def stability_values(self):
        sigma = self.sigma_counts()
        out = np.empty(len(self), dtype=np.float64)
        for i, s in enumerate(sigma):
            out[i] = float(s) / float(2.0 ** int(self.extent_sizes[i]))
        return out

    def robustness_values(self, alphas):
        """Batch robustness columns; computes any uncached alphas in one scan."""
        self.require_complete("robustness")
        missing = [a for a in alphas if a not in self._rob_cache]
        if missing:
            sigma, rob, _ = self._run_order_scan(alphas=tuple(missing))
            if self._sigma is None:
                self._sigma = sigma
            # robustness is a probability; wash out float cancellation residue
            rob = np.clip(rob, 0.0, 1.0)
            for k, a in enumerate(missing):
                self._rob_cache[a] = rob[:, k]
        return {a: self._rob_cache[a] for a in alphas}

    def gamma_values(self, max_level):
        """gamma[c, j] = number of j-subsets of the extent deriving the intent."""
        self.require_complete("level-wise stability")
        max_level = int(max_level)
        if self._gamma is None or self._gamma.shape[1] <= max_level:
            sigma, _, gam = self._run_order_scan(n_levels=max(max_level, 2))
            if self._sigma is None:
                self._sigma = sigma
            self._gamma = gam
        return self._gamma

    # -- serialization --------------------------------------------------------

    def to_json_dict(self):
        concepts = []
        for i in range(len(self)):
            ext = [int(v) for v in self.extent_indices(i)]
            intent = [int(v) for v in self.intent_indices(i)]
            concepts.append(
                {
                    "id": i,
                    "extent": ext,
                    "intent": intent,
                    "extent_names": [self.context.object_names[g] for g in ext],
                    "intent_names": [self.context.attribute_names[m] for m in intent],
                }
            )
        return {
            "objects": list(self.context.object_names),
            "attributes": list(self.context.attribute_names),
            "n_concepts": len(self),
            "min_support": self.min_support,
            "concepts": concepts,
            "cover_edges": [[c, d] for c, d in self.cover_edges()],
            "top": self.top_id,
            "bottom": self.bottom_id,
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"


def enumerate_concepts(ctx, min_support=0, budget=None):
    """Mine every concept with |extent| >= min_support; complete lattice at 0."""
    if not isinstance(ctx, FormalContext):
        raise TypeError("enumerate_concepts expects a FormalContext")
    min_support = int(min_support)
    if min_support < 0:
        raise ValueError("min_support must be non-negative")
    if min_support > ctx.n_objects:
        raise ValueError(
            f"min_support {min_support} exceeds the object count {ctx.n_objects}; nothing to mine"
        )
    budget = resolve_budget(budget)
    extents, intents, count, status = kernels.cbo_enumerate(
        ctx.rows, ctx.cols, ctx.n_objects, ctx.n_attributes, min_support, budget
    )
    if status == 1:
        raise BudgetExceededError(budget)
    extents = np.asarray(extents, dtype=np.uint64)
    intents = np.asarray(intents, dtype=np.uint64)
    # deterministic ids: lexicographic by intent bit pattern, attribute 0 first
    bits = bitsets.unpack_to_bool_matrix(intents, ctx.n_attributes)
    order = np.lexsort(bits.T[::-1])
    return ConceptLattice(ctx, np.ascontiguousarray(extents[order]), np.ascontiguousarray(intents[order]), min_support)


def leq(lat, c_id, d_id):
    return lat.leq(c_id, d_id)


def descendants(lat, c_id):
    return lat.descendants(c_id)


def mobius(lat, c_id):
    return lat.mobius(c_id)
