"""Per-concept interestingness indices.

The catalogue covers frequency, the stability family (exact counts, Monte
Carlo estimation, logarithmic scale with its neighbor-based bounds,
level-wise and integral variants), robustness, concept probability,
separation, monocle weights, support-gap criteria (delta-tolerance and
margin-closed), and the basic-level group (similarity, predictability, cue
validity, category feature collocation, category utility).

Conventions that make every index total:
  * stability of 1 maps to logarithmic stability +inf; the infinity sentinel
    sorts above all finite values in rankings,
  * a concept without lower neighbors (the bottom) gets +inf for all
    neighbor-based bounds,
  * cohesion of an extent with fewer than two objects is 1,
  * a missing neighbor side contributes a factor of 1,
  * ratio factors are clamped to [0, 1] before the t-norm combination,
  * division by zero inside sums (attributes with empty columns, empty
    extents) contributes 0.

Exactness: subset-closure counts (sigma, gamma) are integers up to
2**|extent|; the single-concept operations return values derived from exact
integer counts, while the batch table computations use the shared lattice
recursions (exact sigma, float gamma with error far below any tolerance
used here).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bitsets, kernels, measures
from .context import rng_stream
from .errors import IncompleteLatticeError
from .lattice import Concept, ConceptLattice

INF = float("inf")

T_NORMS = tuple(measures.T_NORMS)


@dataclass(frozen=True)
class SimilarityConfig:
    """Configuration of the basic-level similarity and predictability indices.

    ``neighbor_aggregation="minimum"`` is the max/min neighbor variant;
    ``nonmonotone_threshold`` zeroes a neighbor factor when the fraction of
    neighbors ordered against cohesion monotonicity exceeds it.
    """

    similarity: str = "smc"
    object_aggregation: str = "average"
    neighbor_aggregation: str = "average"
    tnorm: str = "minimum_t"
    nonmonotone_threshold: float = 0.5

    def __post_init__(self):
        if self.similarity not in ("smc", "jaccard"):
            raise ValueError(f"similarity must be smc or jaccard, got {self.similarity!r}")
        for name in (self.object_aggregation, self.neighbor_aggregation):
            if name not in ("average", "minimum"):
                raise ValueError(f"aggregation must be average or minimum, got {name!r}")
        if self.tnorm not in T_NORMS:
            raise ValueError(f"tnorm must be one of {T_NORMS}, got {self.tnorm!r}")
        if not 0.0 <= self.nonmonotone_threshold <= 1.0:
            raise ValueError("nonmonotone_threshold must be in [0, 1]")


@dataclass(frozen=True)
class LstabBounds:
    lstab: float
    lstab_lower: float
    delta_l: float
    delta_h: float
    stab2noe: float
    stab2oe: float
    stab2oie: float


@dataclass(frozen=True)
class CvCfcCu:
    cv: float
    cfc: float
    cu: float


# -- index spec registry ------------------------------------------------------

_SIM_PARAM_DEFAULTS = {
    "similarity": "smc",
    "object_aggregation": "average",
    "neighbor_aggregation": "average",
    "tnorm": "minimum_t",
    "nonmonotone_threshold": 0.5,
}

_PRED_PARAM_DEFAULTS = {
    "neighbor_aggregation": "average",
    "tnorm": "minimum_t",
    "nonmonotone_threshold": 0.5,
}

#: kind -> (required params, optional params with defaults, needs complete lattice)
KINDS = {
    "support": ((), {}, False),
    "stability": ((), {"samples": None, "seed": 0}, True),
    "lstab": ((), {}, True),
    "lstab_lower": ((), {}, True),
    "delta_l": ((), {}, True),
    "delta_h": ((), {}, True),
    "stab2noe": ((), {}, True),
    "stab2oe": ((), {}, True),
    "stab2oie": ((), {}, True),
    "levelwise_stability": ((), {"level": None, "rate": None}, True),
    "integral_stability_minor": ((), {"level": None, "rate": None}, True),
    "integral_stability_major": ((), {"level": None, "rate": None}, True),
    "robustness": (("alpha",), {}, True),
    "concept_probability": ((), {}, False),
    "separation": ((), {}, False),
    "monocle": ((), {}, False),
    "delta_tcfi": (("delta",), {"literal": 0}, True),
    "margin_closed": (("alpha",), {"min_support": 0.0}, False),
    "margin_closed_relaxed": ((), {}, False),
    "similarity": ((), dict(_SIM_PARAM_DEFAULTS), True),
    "predictability": ((), dict(_PRED_PARAM_DEFAULTS), True),
    "cv": ((), {}, False),
    "cfc": ((), {}, False),
    "cu": ((), {"variant": "column"}, False),
}


def _format_param(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class IndexSpec:
    """A named index with its parameters; duplicates differ by parameters."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(
                f"unknown index kind {self.kind!r}; valid kinds: {', '.join(sorted(KINDS))}"
            )
        required, optional, _ = KINDS[self.kind]
        for name in required:
            if name not in self.params:
                raise ValueError(f"index {self.kind!r} requires parameter {name!r}")
        for name in self.params:
            if name not in required and name not in optional:
                raise ValueError(f"index {self.kind!r} does not take parameter {name!r}")
        self._validate_values()

    def _validate_values(self):
        p = self.params
        for prob in ("alpha", "delta", "min_support", "rate", "nonmonotone_threshold"):
            if prob in p and not 0.0 <= float(p[prob]) <= 1.0:
                raise ValueError(f"{self.kind}: parameter {prob} must be in [0, 1]")
        if self.kind == "stability":
            if p.get("samples") is not None and int(p["samples"]) < 1:
                raise ValueError("stability: samples must be >= 1")
            if "seed" in p and p.get("samples") is None:
                raise ValueError("stability: seed only applies to the sampled variant")
        if self.kind in ("levelwise_stability", "integral_stability_minor", "integral_stability_major"):
            has_level = p.get("level") is not None
            has_rate = p.get("rate") is not None
            if has_level == has_rate:
                raise ValueError(f"{self.kind}: give exactly one of level= or rate=")
            if has_level and int(p["level"]) < 0:
                raise ValueError(f"{self.kind}: level must be non-negative")
        if self.kind in ("similarity", "predictability"):
            default_similarity_config(p, self.kind)  # raises on bad values
        if self.kind == "cu" and p.get("variant", "column") not in ("column", "extent"):
            raise ValueError("cu: variant must be column or extent")

    @property
    def needs_complete_lattice(self):
        if self.kind == "stability" and self.params.get("samples") is not None:
            return False
        return KINDS[self.kind][2]

    def column_name(self):
        if not self.params:
            return self.kind
        parts = [f"{k}={_format_param(v)}" for k, v in sorted(self.params.items()) if v is not None]
        return self.kind if not parts else f"{self.kind}:{','.join(parts)}"

    @classmethod
    def parse(cls, text):
        """Parse "kind" or "kind:param=value,param=value"."""
        text = text.strip()
        if ":" not in text:
            return cls(text, {})
        kind, _, rest = text.partition(":")
        params = {}
        for chunk in rest.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "=" not in chunk:
                raise ValueError(f"malformed parameter {chunk!r} in index spec {text!r}")
            key, _, raw = chunk.partition("=")
            params[key.strip()] = _parse_value(raw.strip())
        return cls(kind.strip(), params)


def _parse_value(raw):
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def default_similarity_config(params=None, kind="similarity"):
    defaults = _SIM_PARAM_DEFAULTS if kind == "similarity" else _PRED_PARAM_DEFAULTS
    merged = {**defaults, **(params or {})}
    if "similarity" not in merged:
        merged["similarity"] = "smc"
    return SimilarityConfig(**merged)


# -- shared lattice-level artifacts -------------------------------------------

def _aux(lat):
    if not hasattr(lat, "_index_aux"):
        lat._index_aux = {}
    return lat._index_aux


def _overlap_matrix(lat):
    """|extent ∩ attribute column| for every concept x attribute."""
    aux = _aux(lat)
    if "overlap" not in aux:
        ext = lat.extent_bools().astype(np.int64)
        inc = lat.context.bools.astype(np.int64)
        aux["overlap"] = ext @ inc
    return aux["overlap"]


def _extent_csr(lat):
    aux = _aux(lat)
    if "extent_csr" not in aux:
        rows, cols = np.nonzero(lat.extent_bools())
        indptr = np.zeros(len(lat) + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        indptr = np.cumsum(indptr)
        aux["extent_csr"] = (indptr.astype(np.int64), cols.astype(np.int64))
    return aux["extent_csr"]


def _sim_matrix(lat, kind):
    aux = _aux(lat)
    key = ("sim", kind)
    if key not in aux:
        bools = lat.context.bools.astype(np.float64)
        inter = bools @ bools.T
        sizes = lat.context.row_sizes.astype(np.float64)
        union = sizes[:, None] + sizes[None, :] - inter
        n_attr = lat.context.n_attributes
        if kind == "smc":
            sim = (inter + n_attr - union) / n_attr
        else:
            with np.errstate(invalid="ignore", divide="ignore"):
                sim = np.where(union > 0, inter / np.maximum(union, 1e-300), 1.0)
        aux[key] = sim
    return aux[key]


def _coh_values(lat, similarity, object_aggregation):
    aux = _aux(lat)
    key = ("coh", similarity, object_aggregation)
    if key not in aux:
        indptr, members = _extent_csr(lat)
        sim = _sim_matrix(lat, similarity)
        aux[key] = np.asarray(
            kernels.coh_from_extents(indptr, members, sim, object_aggregation == "average"),
            dtype=np.float64,
        )
    return aux[key]


def _neighbor_deltas(lat):
    """Per concept: lower-neighbor ids and extent-size drops, id-sorted."""
    aux = _aux(lat)
    if "neighbor_deltas" not in aux:
        out = []
        for c in range(len(lat)):
            dd = lat.lower_neighbors(c)
            out.append((dd, lat.extent_sizes[c] - lat.extent_sizes[dd]))
        aux["neighbor_deltas"] = out
    return aux["neighbor_deltas"]


# -- single-concept operations -------------------------------------------------

def _concept_id(lat, c):
    if isinstance(c, Concept):
        return c.id
    return int(c)


def support(lat, c):
    """|extent| / |G|."""
    i = _concept_id(lat, c)
    return float(lat.extent_sizes[i]) / lat.context.n_objects


def stability_exact(lat, c):
    """Probability that a uniform extent subset derives exactly the intent."""
    i = _concept_id(lat, c)
    lat.require_complete("stability_exact")
    sigma = lat.sigma_counts()[i]
    return float(Fraction(sigma, 1 << int(lat.extent_sizes[i])))


def stability_montecarlo(ctx, concept, samples, seed):
    """Unbiased sampling estimate of stability; stream keyed by (seed, id)."""
    samples = int(samples)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    extent = concept.extent.words
    intent = concept.intent.words
    rng = rng_stream(seed, concept.id)
    wg = extent.shape[0]
    rand_words = rng.integers(0, 2**64, size=(samples, wg), dtype=np.uint64)
    full_int = bitsets.full_mask(ctx.n_attributes)
    hits = kernels.mc_closure_hits(ctx.rows, ctx.n_objects, full_int, extent, intent, rand_words)
    return hits / samples


def _lstab_from_sigma(lat, i):
    sigma = lat.sigma_counts()[i]
    size = int(lat.extent_sizes[i])
    miss = (1 << size) - sigma
    if miss == 0:
        return INF
    # -log2(1 - stab) computed on the exact miss count
    return size - math.log2(miss)


def lstab_and_bounds(lat, c):
    """Logarithmic stability with its neighbor-based bound family."""
    i = _concept_id(lat, c)
    lat.require_complete("lstab_and_bounds")
    lstab = _lstab_from_sigma(lat, i)
    dd = lat.lower_neighbors(i)
    if dd.size == 0:
        return LstabBounds(lstab, INF, INF, INF, INF, INF, INF)
    deltas = (lat.extent_sizes[i] - lat.extent_sizes[dd]).astype(np.int64)
    delta_l = int(deltas.min())
    delta_h = _delta_h_one(lat, i)
    lstab_lower = -math.log2(float(np.sum(2.0 ** (-deltas.astype(np.float64))))) + 0.0
    noe, oe, oie = _two_neighbor_bounds(lat, i, dd, deltas)
    return LstabBounds(lstab, lstab_lower, float(delta_l), float(delta_h), noe, oe, oie)


def _delta_h_one(lat, i):
    outside = ~lat.intent_bools()[i]
    if not outside.any():
        return INF
    overlap = _overlap_matrix(lat)[i]
    return float(lat.extent_sizes[i] - overlap[outside].max())


def _two_neighbor_bounds(lat, i, dd, deltas):
    """stab2noe / stab2oe / stab2oie under difference-set readings."""
    ext_c = lat.extents[i]
    size_c = int(lat.extent_sizes[i])
    order = np.lexsort((dd, deltas))
    d1 = int(dd[order[0]])
    delta1 = int(deltas[order[0]])
    diff1 = ext_c & ~lat.extents[d1]

    if dd.size == 1:
        return float(delta1), float(delta1), float(delta1)

    # noe: cheapest second neighbor whose difference set avoids the first's
    noe = float(delta1)
    for t in order[1:]:
        d = int(dd[t])
        if not np.any((ext_c & ~lat.extents[d]) & diff1):
            noe = float(delta1 + int(deltas[t]))
            break

    # oe: second neighbor with the most objects outside the first's extent
    best_gain = -1
    best_delta = None
    best_d = None
    for t in range(dd.size):
        d = int(dd[t])
        if d == d1:
            continue
        gain = bitsets.popcount(lat.extents[d] & ~lat.extents[d1])
        key = (-gain, int(deltas[t]), d)
        if best_d is None or key < (-best_gain, best_delta, best_d):
            best_gain, best_delta, best_d = gain, int(deltas[t]), d
    inter = bitsets.popcount(lat.extents[d1] & lat.extents[best_d] & ext_c)
    oe = float(size_c - inter)

    # oie: the two smallest-drop distinct neighbors
    d2 = int(dd[order[1]])
    inter2 = bitsets.popcount(lat.extents[d1] & lat.extents[d2] & ext_c)
    oie = float(size_c - inter2)
    return noe, oe, oie


def levelwise_stability(lat, c, j):
    """J_j: fraction of j-sized extent subsets deriving the intent (exact)."""
    i = _concept_id(lat, c)
    lat.require_complete("levelwise_stability")
    j = int(j)
    n = int(lat.extent_sizes[i])
    if j < 2 or j > n - 1:
        return 0.0
    gamma = _gamma_exact(lat, i, j)
    return float(Fraction(gamma, math.comb(n, j)))


def _gamma_exact(lat, i, j):
    """Exact gamma_j via the Mobius table of the concept."""
    table = lat.mobius(i)
    total = 0
    for d, mu in zip(table.ids, table.values):
        total += int(mu) * math.comb(int(lat.extent_sizes[int(d)]), j)
    return total


def integral_stability(lat, c, j, side="full"):
    """Sum of level-wise stabilities: minor 2..j, major j..n-1, full 2..n-1."""
    i = _concept_id(lat, c)
    lat.require_complete("integral_stability")
    n = int(lat.extent_sizes[i])
    j = int(j)
    if side == "minor":
        levels = range(2, min(j, n - 1) + 1)
    elif side == "major":
        levels = range(max(j, 2), n)
    elif side == "full":
        levels = range(2, n)
    else:
        raise ValueError("side must be minor, major, or full")
    return float(sum(levelwise_stability(lat, i, lv) for lv in levels))


def robustness(lat, c, alpha):
    """Mobius-weighted survival probability under object removal.

    r(c, alpha) = sum over d <= c of mu(d, c) * (1-alpha)^(|A_c| - |A_d|);
    equals stability at alpha = 0.5.
    """
    i = _concept_id(lat, c)
    lat.require_complete("robustness")
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    table = lat.mobius(i)
    x = 1.0 - alpha
    size_c = int(lat.extent_sizes[i])
    total = 0.0
    for d, mu in zip(table.ids, table.values):
        total += int(mu) * x ** (size_c - int(lat.extent_sizes[int(d)]))
    return min(1.0, max(0.0, float(total)))


def concept_probability(ctx, c):
    """Probability that the intent is closed under the independence model."""
    intent = c.intent.indices() if isinstance(c, Concept) else np.asarray(sorted(c), dtype=np.int64)
    member = np.zeros(ctx.n_attributes, dtype=bool)
    member[intent] = True
    return float(_concept_probability_rows(ctx, member[None, :])[0])


def _concept_probability_rows(ctx, intent_rows):
    """Vectorized independence-model closedness probability per intent row."""
    n = ctx.n_objects
    p = ctx.col_sizes.astype(np.float64) / n
    ks = np.arange(n + 1, dtype=np.float64)
    log_binom = np.array(
        [math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1) for k in range(n + 1)]
    )
    # powers[k, m] = p_m ** k with 0**0 = 1
    powers = np.power(p[None, :], ks[:, None])
    one_minus = 1.0 - powers
    zero_factor = one_minus <= 0.0
    with np.errstate(divide="ignore"):
        log_one_minus = np.where(zero_factor, 0.0, np.log(np.maximum(one_minus, 1e-300)))
    total_log = log_one_minus.sum(axis=1)
    total_zero = zero_factor.sum(axis=1)

    out = np.empty(intent_rows.shape[0], dtype=np.float64)
    for r in range(intent_rows.shape[0]):
        member = intent_rows[r]
        if member.any():
            p_b = float(np.prod(p[member]))
        else:
            p_b = 1.0
        # per-k product over attributes outside the intent
        zeros_outside = total_zero - zero_factor[:, member].sum(axis=1)
        log_outside = total_log - log_one_minus[:, member].sum(axis=1)
        outside_factor = np.where(zeros_outside > 0, 0.0, np.exp(log_outside))
        if p_b <= 0.0:
            t1 = np.zeros(n + 1)
            t1[0] = 1.0
        elif p_b >= 1.0:
            t1 = np.zeros(n + 1)
            t1[n] = 1.0
        else:
            t1 = np.exp(log_binom + ks * math.log(p_b) + (n - ks) * math.log1p(-p_b))
        out[r] = float(np.sum(t1 * outside_factor))
    return np.clip(out, 0.0, 1.0)


def separation(ctx, c):
    """Share of the concept's rectangle among the ones in its rows and columns."""
    if isinstance(c, Concept):
        extent, intent = c.extent.indices(), c.intent.indices()
    else:
        extent, intent = (np.asarray(sorted(s), dtype=np.int64) for s in c)
    area = len(extent) * len(intent)
    if area == 0:
        return 0.0
    denom = int(ctx.row_sizes[extent].sum()) + int(ctx.col_sizes[intent].sum()) - area
    return float(area / denom)


def monocle(lat, c, H=None):
    """Monotone-system concept weight against a reference concept set H."""
    i = _concept_id(lat, c)
    if H is None:
        members = np.arange(len(lat))
    else:
        members = np.asarray(sorted(int(h) for h in set(H)), dtype=np.int64)
        if members.size and (members.min() < 0 or members.max() >= len(lat)):
            raise IndexError("H contains out-of-range concept ids")
    ext_b = lat.extent_bools()
    int_b = lat.intent_bools()
    h_count = members.size
    obj_present = ext_b[members].sum(axis=0) if h_count else np.zeros(lat.context.n_objects)
    attr_present = int_b[members].sum(axis=0) if h_count else np.zeros(lat.context.n_attributes)
    ext = ext_b[i]
    intent = int_b[i]
    left = ext.sum() + (h_count - obj_present[ext]).sum()
    right = intent.sum() + (h_count - attr_present[intent]).sum()
    return float(left * right)


def delta_tcfi(lat, c, delta, literal=False):
    """Support-gap test against the one-attribute-larger closed intents.

    Default reading: true iff no such intent keeps at least (1-delta) of the
    concept's support.  ``literal=True`` flips to the universally quantified
    reading.
    """
    i = _concept_id(lat, c)
    lat.require_complete("delta_tcfi")
    delta = float(delta)
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must be in [0, 1]")
    dd = lat.lower_neighbors(i)
    target = lat.intent_sizes[i] + 1
    children = [int(d) for d in dd if lat.intent_sizes[int(d)] == target]
    threshold = (1.0 - delta) * float(lat.extent_sizes[i])
    hits = [d for d in children if lat.extent_sizes[d] >= threshold]
    if literal:
        return len(hits) == len(children)
    return len(hits) == 0


def margin_closed(lat, c, alpha, min_support=0.0):
    """No closed super-intent keeps more than (1-alpha) of the support."""
    i = _concept_id(lat, c)
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    n_obj = lat.context.n_objects
    if lat.extent_sizes[i] / n_obj < min_support:
        return False
    dd = lat.lower_neighbors(i)
    if dd.size == 0:
        return True
    largest = int(lat.extent_sizes[dd].max())
    if largest / n_obj < min_support:
        return True
    if lat.extent_sizes[i] == 0:
        return False
    return largest / float(lat.extent_sizes[i]) <= 1.0 - alpha


def margin_closed_relaxed(lat, c):
    """Largest lower-neighbor extent as a fraction of the concept's extent."""
    i = _concept_id(lat, c)
    dd = lat.lower_neighbors(i)
    if dd.size == 0 or lat.extent_sizes[i] == 0:
        return 0.0
    return float(lat.extent_sizes[dd].max() / lat.extent_sizes[i])


def _safe_ratio(a, b):
    if b == 0.0:
        return 1.0 if a == 0.0 else INF
    return a / b


# slack for the monotonicity comparisons: cohesion values that agree to
# within summation noise must not flip the discrete zeroing rule
_MONOTONE_EPS = 1e-12


def _neighbor_factors(values, c, un, ln, aggregation, threshold):
    """Upper/lower neighbor terms of the basic-level combination."""
    v_c = values[c]
    if un.size == 0:
        un_term = 1.0
    else:
        ratios = [_safe_ratio(values[int(u)], v_c) for u in un]
        if aggregation == "average":
            un_term = 1.0 - sum(ratios) / len(ratios)
        else:
            un_term = 1.0 - max(ratios)
        bad = sum(1 for u in un if values[int(u)] > v_c + _MONOTONE_EPS)
        if bad / un.size > threshold:
            un_term = 0.0
    if ln.size == 0:
        ln_term = 1.0
    else:
        ratios = [_safe_ratio(v_c, values[int(d)]) for d in ln]
        if aggregation == "average":
            ln_term = sum(ratios) / len(ratios)
        else:
            ln_term = min(ratios)
        bad = sum(1 for d in ln if values[int(d)] < v_c - _MONOTONE_EPS)
        if bad / ln.size > threshold:
            ln_term = 0.0
    return un_term, ln_term


def _clamp01(x):
    if x != x:  # NaN guard
        return 0.0
    return min(1.0, max(0.0, x))


def _basic_level_combine(lat, base_values, cfg):
    out = np.empty(len(lat), dtype=np.float64)
    for c in range(len(lat)):
        un = lat.upper_neighbors(c)
        ln = lat.lower_neighbors(c)
        un_term, ln_term = _neighbor_factors(
            base_values, c, un, ln, cfg.neighbor_aggregation, cfg.nonmonotone_threshold
        )
        factors = [_clamp01(base_values[c]), _clamp01(un_term), _clamp01(ln_term)]
        out[c] = measures.aggregate(factors, cfg.tnorm)
    return out


def basic_level_similarity(lat, c, cfg=None):
    """Fuzzy combination of cohesion with its neighbor contrast terms."""
    i = _concept_id(lat, c)
    lat.require_complete("basic_level_similarity")
    cfg = cfg or SimilarityConfig()
    return float(_similarity_column(lat, cfg)[i])


def _similarity_column(lat, cfg):
    aux = _aux(lat)
    key = ("similarity_col", cfg)
    if key not in aux:
        coh = _coh_values(lat, cfg.similarity, cfg.object_aggregation)
        aux[key] = _basic_level_combine(lat, coh, cfg)
    return aux[key]


def predictability(lat, c, cfg=None):
    """Basic-level combination built on outside-attribute entropy."""
    i = _concept_id(lat, c)
    lat.require_complete("predictability")
    cfg = cfg or SimilarityConfig()
    return float(_predictability_column(lat, cfg)[i])


def _pred_values(lat):
    aux = _aux(lat)
    if "pred" not in aux:
        overlap = _overlap_matrix(lat).astype(np.float64)
        sizes = lat.extent_sizes.astype(np.float64)
        with np.errstate(invalid="ignore", divide="ignore"):
            q = np.where(sizes[:, None] > 0, overlap / np.maximum(sizes[:, None], 1.0), 0.0)
        ent = np.where(q > 0, -q * np.log2(np.maximum(q, 1e-300)), 0.0)
        outside = ~lat.intent_bools()
        counts = outside.sum(axis=1).astype(np.float64)
        sums = np.where(outside, ent, 0.0).sum(axis=1)
        aux["pred"] = np.where(counts > 0, 1.0 - sums / np.maximum(counts, 1.0), 1.0)
    return aux["pred"]


def _predictability_column(lat, cfg):
    aux = _aux(lat)
    key = ("predictability_col", cfg)
    if key not in aux:
        aux[key] = _basic_level_combine(lat, _pred_values(lat), cfg)
    return aux[key]


def cv_cfc_cu(ctx, c, cu_variant="column"):
    """Conditional-probability trio: cue validity, feature collocation, utility."""
    if isinstance(c, Concept):
        extent, intent = c.extent.indices(), c.intent.indices()
    else:
        extent, intent = (np.asarray(sorted(s), dtype=np.int64) for s in c)
    ext_mask = np.zeros(ctx.n_objects, dtype=bool)
    ext_mask[extent] = True
    size = float(ext_mask.sum())
    col = ctx.col_sizes.astype(np.float64)
    overlap = ctx.bools[ext_mask].sum(axis=0).astype(np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        per_col = np.where(col > 0, overlap / np.maximum(col, 1.0), 0.0)
        per_ext = np.where(size > 0, overlap / max(size, 1.0), 0.0)
    cv = float(np.where(col[intent] > 0, size / np.maximum(col[intent], 1.0), 0.0).sum())
    cfc = float((per_col * per_ext).sum())
    # "column" squares the attribute-column conditional, "extent" the
    # textbook category-utility conditional on the extent
    grounding = per_col if cu_variant == "column" else per_ext
    cu = float(size / ctx.n_objects * (grounding**2 - (col / ctx.n_objects) ** 2).sum())
    return CvCfcCu(cv, cfc, cu)


# -- batch table --------------------------------------------------------------

@dataclass
class IndexTable:
    """Aligned per-concept values for a named list of indices."""

    lattice: ConceptLattice
    names: list
    columns: dict

    @property
    def n_concepts(self):
        return len(self.lattice)

    def values(self, name):
        return self.columns[name]

    def to_csv(self):
        lat = self.lattice
        header = ["concept_id", "extent_size", "intent_size"] + self.names
        lines = [",".join(header)]
        for i in range(len(lat)):
            row = [str(i), str(int(lat.extent_sizes[i])), str(int(lat.intent_sizes[i]))]
            for name in self.names:
                row.append(format_value(float(self.columns[name][i])))
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def format_value(v):
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    if v == 0.0:
        v = 0.0  # normalize -0.0
    return f"{v:.12g}"


def compute_index_table(lat, specs):
    """One value per concept per spec; deterministic given seeds."""
    specs = [s if isinstance(s, IndexSpec) else IndexSpec.parse(s) for s in specs]
    for spec in specs:
        if spec.needs_complete_lattice and not lat.is_complete:
            raise IncompleteLatticeError(
                f"index {spec.column_name()!r} needs a complete lattice (min_support=0)"
            )
    # batch the shared recursions up front
    alphas = tuple(
        sorted({float(s.params["alpha"]) for s in specs if s.kind == "robustness"})
    )
    if alphas and lat.is_complete:
        lat.robustness_values(alphas)
    max_level = _max_gamma_level(lat, specs)
    if max_level:
        lat.gamma_values(max_level)

    names = []
    columns = {}
    for spec in specs:
        name = spec.column_name()
        if name not in columns:
            names.append(name)
        columns[name] = _compute_column(lat, spec)
    return IndexTable(lat, names, columns)


def _max_gamma_level(lat, specs):
    levels = [0]
    gamma_kinds = ("levelwise_stability", "integral_stability_minor", "integral_stability_major")
    for spec in specs:
        if spec.kind not in gamma_kinds:
            continue
        max_size = int(lat.extent_sizes.max())
        if spec.params.get("level") is not None:
            lv = int(spec.params["level"])
        else:
            lv = int(math.ceil(float(spec.params["rate"]) * max_size))
        if spec.kind == "integral_stability_major":
            lv = max_size  # major side always needs the top levels
        levels.append(min(max(lv, 2), max(max_size - 1, 2)))
    return max(levels)


def _per_concept_levels(lat, spec):
    sizes = lat.extent_sizes.astype(np.int64)
    if spec.params.get("level") is not None:
        levels = np.full(len(lat), int(spec.params["level"]), dtype=np.int64)
    else:
        rate = float(spec.params["rate"])
        levels = np.ceil(rate * sizes).astype(np.int64)
        levels = np.clip(levels, 2, np.maximum(sizes - 1, 2))
    return sizes, levels


def _j_matrix(lat, max_level):
    """J_j values for all concepts and 2 <= j <= max_level (0 elsewhere)."""
    aux = _aux(lat)
    key = ("jmat", max_level)
    if key not in aux:
        gam = lat.gamma_values(max_level)
        sizes = lat.extent_sizes.astype(np.int64)
        width = gam.shape[1]
        comb = np.zeros((int(sizes.max()) + 1, width))
        for s in range(comb.shape[0]):
            for j in range(2, min(s, width - 1) + 1):
                comb[s, j] = float(math.comb(s, j))
        jmat = np.zeros_like(gam)
        valid = comb[sizes] > 0
        js = np.arange(width)[None, :]
        in_range = (js >= 2) & (js <= (sizes - 1)[:, None])
        with np.errstate(invalid="ignore", divide="ignore"):
            jmat = np.where(valid & in_range, gam / np.maximum(comb[sizes], 1.0), 0.0)
        aux[key] = jmat
    return aux[key]


def _compute_column(lat, spec):
    kind = spec.kind
    n = len(lat)
    sizes = lat.extent_sizes.astype(np.float64)

    if kind == "support":
        return sizes / lat.context.n_objects

    if kind == "stability":
        if spec.params.get("samples") is not None:
            samples = int(spec.params["samples"])
            seed = int(spec.params.get("seed", 0))
            return np.array(
                [
                    stability_montecarlo(lat.context, lat.concept(i), samples, seed)
                    for i in range(n)
                ]
            )
        return lat.stability_values()

    if kind in ("lstab", "lstab_lower", "delta_l", "delta_h", "stab2noe", "stab2oe", "stab2oie"):
        return _bounds_column(lat, kind)

    if kind == "levelwise_stability":
        sizes_i, levels = _per_concept_levels(lat, spec)
        jmat = _j_matrix(lat, int(levels.max()))
        out = np.zeros(n)
        ok = (levels >= 2) & (levels <= sizes_i - 1)
        out[ok] = jmat[np.flatnonzero(ok), levels[ok]]
        return out

    if kind in ("integral_stability_minor", "integral_stability_major"):
        sizes_i, levels = _per_concept_levels(lat, spec)
        top = int(max(levels.max(), (sizes_i - 1).max(), 2))
        jmat = _j_matrix(lat, top)
        cum = np.cumsum(jmat, axis=1)
        out = np.zeros(n)
        ok = sizes_i >= 3
        idx = np.flatnonzero(ok)
        lv = np.clip(levels[ok], 2, sizes_i[ok] - 1)
        if kind == "integral_stability_minor":
            out[idx] = cum[idx, lv]
        else:
            last = np.minimum(sizes_i[ok] - 1, top)
            out[idx] = cum[idx, last] - cum[idx, lv - 1]
        return out

    if kind == "robustness":
        return lat.robustness_values((float(spec.params["alpha"]),))[float(spec.params["alpha"])]

    if kind == "concept_probability":
        return _concept_probability_rows(lat.context, lat.intent_bools())

    if kind == "separation":
        ext_b = lat.extent_bools()
        int_b = lat.intent_bools()
        area = sizes * lat.intent_sizes
        row_part = ext_b @ lat.context.row_sizes.astype(np.float64)
        col_part = int_b @ lat.context.col_sizes.astype(np.float64)
        denom = row_part + col_part - area
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(area > 0, area / np.maximum(denom, 1.0), 0.0)

    if kind == "monocle":
        ext_b = lat.extent_bools()
        int_b = lat.intent_bools()
        obj_present = ext_b.sum(axis=0)
        attr_present = int_b.sum(axis=0)
        left = sizes + ext_b @ (n - obj_present).astype(np.float64)
        right = lat.intent_sizes + int_b @ (n - attr_present).astype(np.float64)
        return left * right

    if kind == "delta_tcfi":
        literal = bool(spec.params.get("literal", 0))
        delta = float(spec.params["delta"])
        return np.array(
            [float(delta_tcfi(lat, i, delta, literal=literal)) for i in range(n)]
        )

    if kind == "margin_closed":
        alpha = float(spec.params["alpha"])
        ms = float(spec.params.get("min_support", 0.0))
        return np.array([float(margin_closed(lat, i, alpha, ms)) for i in range(n)])

    if kind == "margin_closed_relaxed":
        deltas = _neighbor_deltas(lat)
        out = np.zeros(n)
        for c in range(n):
            dd, _ = deltas[c]
            if dd.size and lat.extent_sizes[c] > 0:
                out[c] = float(lat.extent_sizes[dd].max() / lat.extent_sizes[c])
        return out

    if kind == "similarity":
        cfg = default_similarity_config(spec.params, "similarity")
        return _similarity_column(lat, cfg)

    if kind == "predictability":
        cfg = default_similarity_config(spec.params, "predictability")
        return _predictability_column(lat, cfg)

    if kind in ("cv", "cfc", "cu"):
        return _cv_family_column(lat, kind, spec.params.get("variant", "column"))

    raise AssertionError(f"unhandled index kind {kind}")


def _bounds_column(lat, kind):
    aux = _aux(lat)
    if "bounds" not in aux:
        names = ("lstab", "lstab_lower", "delta_l", "delta_h", "stab2noe", "stab2oe", "stab2oie")
        cols = {name: np.empty(len(lat)) for name in names}
        for i in range(len(lat)):
            b = lstab_and_bounds(lat, i)
            for name in names:
                cols[name][i] = getattr(b, name)
        aux["bounds"] = cols
    return aux["bounds"][kind]


def _cv_family_column(lat, kind, variant="column"):
    overlap = _overlap_matrix(lat).astype(np.float64)
    col = lat.context.col_sizes.astype(np.float64)
    sizes = lat.extent_sizes.astype(np.float64)
    int_b = lat.intent_bools()
    with np.errstate(invalid="ignore", divide="ignore"):
        per_col = np.where(col[None, :] > 0, overlap / np.maximum(col[None, :], 1.0), 0.0)
        per_ext = np.where(sizes[:, None] > 0, overlap / np.maximum(sizes[:, None], 1.0), 0.0)
    if kind == "cv":
        with np.errstate(invalid="ignore", divide="ignore"):
            contrib = np.where(col[None, :] > 0, sizes[:, None] / np.maximum(col[None, :], 1.0), 0.0)
        return np.where(int_b, contrib, 0.0).sum(axis=1)
    if kind == "cfc":
        return (per_col * per_ext).sum(axis=1)
    grounding = per_col if variant == "column" else per_ext
    base = (col / lat.context.n_objects) ** 2
    return sizes / lat.context.n_objects * (grounding**2 - base[None, :]).sum(axis=1)
