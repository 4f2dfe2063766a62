"""Generic index construction: rule measures, aggregation, composites.

``rule_measure`` evaluates the classical 2x2-contingency interestingness
measures for a rule A -> B.  Division policy, applied uniformly: a ratio
with zero denominator is +/-inf by the sign of the numerator and 0/0 is 0,
so every measure is total and usable for ranking.  Logarithms follow the
source conventions: one-way/two-way support and mutual information use
base 2, information gain and the J-measure use the natural log.

``aggregate`` implements the real-valued aggregators plus the fuzzy t-norm
and s-norm families (n-ary by left fold; all of them are associative).
``evaluate_composite`` strings the pieces together over a comparison scope
around a concept, which is how compound indices such as the worked
examples ``index1`` / ``index2`` are expressed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .context import derive_attributes
from .lattice import Concept

INF = float("inf")


def _div(num, den):
    if den == 0.0:
        if num == 0.0:
            return 0.0
        return INF if num > 0 else -INF
    return num / den


def _xlog(x, ratio, base=math.e):
    """x * log(ratio) with the 0 * log(...) = 0 convention."""
    if x == 0.0:
        return 0.0
    if ratio <= 0.0:
        return -INF if x > 0 else INF
    return x * math.log(ratio, base)


@dataclass(frozen=True)
class ContingencyTable:
    """Joint occurrence counts of an antecedent/consequent pair."""

    n: int
    n_ab: int
    n_anb: int
    n_nab: int
    n_nanb: int

    def __post_init__(self):
        cells = (self.n_ab, self.n_anb, self.n_nab, self.n_nanb)
        if any(v < 0 for v in cells):
            raise ValueError("contingency cells must be non-negative")
        if sum(cells) != self.n:
            raise ValueError(f"cells sum to {sum(cells)}, expected n={self.n}")

    @property
    def p_ab(self):
        return self.n_ab / self.n

    @property
    def p_anb(self):
        return self.n_anb / self.n

    @property
    def p_nab(self):
        return self.n_nab / self.n

    @property
    def p_nanb(self):
        return self.n_nanb / self.n

    @property
    def p_a(self):
        return (self.n_ab + self.n_anb) / self.n

    @property
    def p_b(self):
        return (self.n_ab + self.n_nab) / self.n


def contingency_from_sets(ctx, antecedent, consequent):
    """2x2 counts of the objects carrying the two attribute sets."""
    ext_a = derive_attributes(ctx, antecedent)
    ext_b = derive_attributes(ctx, consequent)
    n = ctx.n_objects
    n_ab = int(np.bitwise_count(ext_a.words & ext_b.words).sum())
    n_a = len(ext_a)
    n_b = len(ext_b)
    return ContingencyTable(n, n_ab, n_a - n_ab, n_b - n_ab, n - n_a - n_b + n_ab)


def _cond(t):
    return (
        _div(t.p_ab, t.p_a),      # P(B|A)
        _div(t.p_anb, t.p_a),     # P(~B|A)
        _div(t.p_nab, 1 - t.p_a), # P(B|~A)
        _div(t.p_nanb, 1 - t.p_a) # P(~B|~A)
    )


def _m_accuracy(t):
    return t.p_ab + t.p_nanb


def _m_added_value(t):
    return _div(t.p_ab, t.p_a) - t.p_b


def _m_certainty_factor(t):
    return _div(_div(t.p_ab, t.p_a) - t.p_b, 1.0 - t.p_b)


def _m_collective_strength(t):
    expected = t.p_a * t.p_b + (1 - t.p_a) * (1 - t.p_b)
    observed = t.p_ab + t.p_nanb
    return _div(observed, expected) * _div(1.0 - expected, 1.0 - observed)


def _m_conditional_probability(t):
    return _div(t.p_ab, t.p_a)


def _m_conviction(t):
    return _div(t.p_a * (1 - t.p_b), t.p_anb)


def _m_cosine(t):
    return _div(t.p_ab, math.sqrt(t.p_a * t.p_b))


def _m_gini_index(t):
    b_a, nb_a, b_na, nb_na = _cond(t)
    return (
        t.p_a * (b_a**2 + nb_a**2)
        + (1 - t.p_a) * (b_na**2 + nb_na**2)
        - t.p_b**2
        - (1 - t.p_b) ** 2
    )


def _m_information_gain(t):
    ratio = _div(t.p_ab, t.p_a * t.p_b)
    if ratio <= 0.0:
        return -INF
    return math.log(ratio)


def _m_j_measure(t):
    b_a, nb_a, _, _ = _cond(t)
    return _xlog(t.p_ab, _div(b_a, t.p_b)) + _xlog(t.p_anb, _div(nb_a, 1 - t.p_b))


def _m_jaccard(t):
    return _div(t.p_ab, t.p_a + t.p_b - t.p_ab)


def _m_klosgen(t):
    return math.sqrt(t.p_ab) * (_div(t.p_ab, t.p_a) - t.p_b)


def _m_klosgen_max(t):
    return math.sqrt(t.p_ab) * max(
        _div(t.p_ab, t.p_a) - t.p_b, _div(t.p_ab, t.p_b) - t.p_a
    )


def _m_laplace_correction(t):
    return (t.n_ab + 1) / (t.n_ab + t.n_anb + 2)


def _m_least_contradiction(t):
    return _div(t.p_ab - t.p_anb, t.p_b)


def _m_leverage(t):
    return t.p_ab - t.p_a * t.p_b


def _m_lift(t):
    return _div(t.p_ab, t.p_a * t.p_b)


def _m_loevinger(t):
    return 1.0 - _div(t.p_a * (1 - t.p_b), t.p_anb)


def _m_normalized_mutual_information(t):
    ps = ((t.p_ab, t.p_a, t.p_b), (t.p_anb, t.p_a, 1 - t.p_b),
          (t.p_nab, 1 - t.p_a, t.p_b), (t.p_nanb, 1 - t.p_a, 1 - t.p_b))
    mi = sum(_xlog(p, _div(p, pa * pb), base=2.0) for p, pa, pb in ps)
    entropy = -(_xlog(t.p_a, t.p_a, base=2.0) + _xlog(1 - t.p_a, 1 - t.p_a, base=2.0))
    return _div(mi, entropy)


def _m_odd_multiplier(t):
    return _div(t.p_ab * (1 - t.p_b), t.p_b * t.p_anb)


def _m_example_counterexample_rate(t):
    return 1.0 - _div(t.p_anb, t.p_ab)


def _m_odds_ratio(t):
    return _div(t.p_ab * t.p_nanb, t.p_anb * t.p_nab)


def _m_one_way_support(t):
    b_a = _div(t.p_ab, t.p_a)
    return _xlog(b_a, _div(t.p_ab, t.p_a * t.p_b), base=2.0)


def _m_pearson_chi2(t):
    total = 0.0
    margins = ((t.p_ab, t.p_a, t.p_b), (t.p_anb, t.p_a, 1 - t.p_b),
               (t.p_nab, 1 - t.p_a, t.p_b), (t.p_nanb, 1 - t.p_a, 1 - t.p_b))
    for obs, pa, pb in margins:
        exp = pa * pb
        total += _div((obs - exp) ** 2, exp)
    return t.n * total


def _m_piatetsky_shapiro(t):
    return t.p_ab - t.p_a * t.p_b


def _m_relative_risk(t):
    b_a, _, b_na, _ = _cond(t)
    return _div(b_a, b_na)


def _m_sebag_schoenauer(t):
    return _div(t.p_ab, t.p_anb)


def _m_two_way_support(t):
    return _xlog(t.p_ab, _div(t.p_ab, t.p_a * t.p_b), base=2.0)


def _m_linear_correlation(t):
    denom = math.sqrt(t.p_a * t.p_b * (1 - t.p_a) * (1 - t.p_b))
    return _div(t.p_ab - t.p_a * t.p_b, denom)


def _m_zhang(t):
    return _div(
        t.p_ab - t.p_a * t.p_b,
        max(t.p_ab * (1 - t.p_b), t.p_b * t.p_anb),
    )


MEASURES = {
    "accuracy": _m_accuracy,
    "added_value": _m_added_value,
    "certainty_factor": _m_certainty_factor,
    "collective_strength": _m_collective_strength,
    "conditional_probability": _m_conditional_probability,
    "conviction": _m_conviction,
    "cosine": _m_cosine,
    "gini_index": _m_gini_index,
    "information_gain": _m_information_gain,
    "j_measure": _m_j_measure,
    "jaccard": _m_jaccard,
    "klosgen": _m_klosgen,
    "klosgen_max": _m_klosgen_max,
    "laplace_correction": _m_laplace_correction,
    "least_contradiction": _m_least_contradiction,
    "leverage": _m_leverage,
    "lift": _m_lift,
    "loevinger": _m_loevinger,
    "normalized_mutual_information": _m_normalized_mutual_information,
    "odd_multiplier": _m_odd_multiplier,
    "example_counterexample_rate": _m_example_counterexample_rate,
    "odds_ratio": _m_odds_ratio,
    "one_way_support": _m_one_way_support,
    "pearson_chi2": _m_pearson_chi2,
    "piatetsky_shapiro": _m_piatetsky_shapiro,
    "relative_risk": _m_relative_risk,
    "sebag_schoenauer": _m_sebag_schoenauer,
    "two_way_support": _m_two_way_support,
    "linear_correlation": _m_linear_correlation,
    "zhang": _m_zhang,
}


def rule_measure(kind, table):
    """Evaluate one contingency measure; total by the division policy above."""
    if kind not in MEASURES:
        raise ValueError(f"unknown measure kind {kind!r}; valid: {', '.join(sorted(MEASURES))}")
    return float(MEASURES[kind](table))


# -- aggregation --------------------------------------------------------------

def _t_drastic(a, b):
    return min(a, b) if max(a, b) == 1.0 else 0.0


def _t_bounded(a, b):
    return max(0.0, a + b - 1.0)


def _t_einstein(a, b):
    return a * b / (2.0 - (a + b - a * b))


def _t_algebraic(a, b):
    return a * b


def _t_hamacher(a, b):
    if a == 0.0 and b == 0.0:
        return 0.0
    return a * b / (a + b - a * b)


def _s_drastic(a, b):
    return max(a, b) if min(a, b) == 0.0 else 1.0


def _s_bounded(a, b):
    return min(1.0, a + b)


def _s_einstein(a, b):
    return (a + b) / (1.0 + a * b)


def _s_probabilistic(a, b):
    return a + b - a * b


def _s_hamacher(a, b):
    if a == 1.0 and b == 1.0:
        return 1.0
    return (a + b - 2.0 * a * b) / (1.0 - a * b)


T_NORMS = {
    "drastic_product": _t_drastic,
    "bounded_difference": _t_bounded,
    "einstein_product": _t_einstein,
    "algebraic_product": _t_algebraic,
    "hamacher_product": _t_hamacher,
    "minimum_t": min,
}

S_NORMS = {
    "drastic_sum": _s_drastic,
    "bounded_sum": _s_bounded,
    "einstein_sum": _s_einstein,
    "probabilistic_sum": _s_probabilistic,
    "hamacher_sum": _s_hamacher,
    "maximum_s": max,
}

#: dual pairs satisfying T(a, b) = 1 - S(1-a, 1-b)
DUAL_PAIRS = (
    ("drastic_product", "drastic_sum"),
    ("bounded_difference", "bounded_sum"),
    ("einstein_product", "einstein_sum"),
    ("algebraic_product", "probabilistic_sum"),
    ("hamacher_product", "hamacher_sum"),
    ("minimum_t", "maximum_s"),
)

REAL_AGGREGATORS = (
    "sum",
    "arithmetic_mean",
    "geometric_mean",
    "harmonic_mean",
    "median",
    "maximum",
    "minimum",
    "midrange",
)

AGGREGATOR_KINDS = REAL_AGGREGATORS + tuple(T_NORMS) + tuple(S_NORMS)


def aggregate(values, kind):
    """Combine values with a Table-style aggregator; fuzzy kinds need [0,1]."""
    values = [float(v) for v in values]
    if not values:
        raise ValueError("aggregate needs at least one value")
    if kind in T_NORMS or kind in S_NORMS:
        for v in values:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"fuzzy aggregator {kind!r} needs values in [0, 1], got {v}")
        op = T_NORMS.get(kind) or S_NORMS[kind]
        acc = values[0]
        for v in values[1:]:
            acc = op(acc, v)
        return float(acc)
    if kind == "sum":
        return float(sum(values))
    if kind == "arithmetic_mean":
        return float(sum(values) / len(values))
    if kind == "geometric_mean":
        if any(v < 0 for v in values):
            raise ValueError("geometric_mean needs non-negative values")
        prod = 1.0
        for v in values:
            prod *= v
        return float(prod ** (1.0 / len(values)))
    if kind == "harmonic_mean":
        if any(v == 0.0 for v in values):
            return 0.0
        return float(len(values) / sum(1.0 / v for v in values))
    if kind == "median":
        s = sorted(values)
        n = len(s)
        if n % 2 == 1:
            return float(s[n // 2])
        return float(0.5 * (s[n // 2 - 1] + s[n // 2]))
    if kind == "maximum":
        return float(max(values))
    if kind == "minimum":
        return float(min(values))
    if kind == "midrange":
        return float(0.5 * (min(values) + max(values)))
    raise ValueError(f"unknown aggregator kind {kind!r}; valid: {', '.join(AGGREGATOR_KINDS)}")


# -- itemset adaptations and composites ----------------------------------------

#: measures expressible as f(observed joint probability, independence product)
ITEMSET_MEASURES = {
    "lift": lambda p, q: _div(p, q),
    "piatetsky_shapiro": lambda p, q: p - q,
    "leverage": lambda p, q: p - q,
    "information_gain": lambda p, q: math.log(_div(p, q)) if _div(p, q) > 0 else -INF,
    "two_way_support": lambda p, q: _xlog(p, _div(p, q), base=2.0),
    "cosine": lambda p, q: _div(p, math.sqrt(q)) if q >= 0 else -INF,
}


def itemset_measure(ctx, kind, attributes):
    """Rule measure recast for one itemset: joint support vs independence."""
    if kind not in ITEMSET_MEASURES:
        raise ValueError(
            f"measure {kind!r} has no single-itemset form; usable: "
            f"{', '.join(sorted(ITEMSET_MEASURES))}"
        )
    attrs = sorted(int(a) for a in attributes)
    p_joint = len(derive_attributes(ctx, attrs)) / ctx.n_objects
    p = ctx.col_sizes.astype(np.float64) / ctx.n_objects
    q = float(np.prod(p[attrs])) if attrs else 1.0
    return float(ITEMSET_MEASURES[kind](p_joint, q))


SCOPES = {
    "self": "self",
    "upper": "upper_neighbors",
    "upper_neighbors": "upper_neighbors",
    "lower": "lower_neighbors",
    "lower_neighbors": "lower_neighbors",
    "descendants": "all_descendants",
    "all_descendants": "all_descendants",
    "outside": "out_of_intent_attributes",
    "out_of_intent_attributes": "out_of_intent_attributes",
}

COMPARISONS = ("none", "difference", "ratio", "log_ratio")


@dataclass(frozen=True)
class CompositeIndexSpec:
    """scope + base measure + comparison against the concept + aggregator."""

    comparison_scope: str
    base_measure: str
    comparison: str = "none"
    aggregator: str = "arithmetic_mean"

    def __post_init__(self):
        if self.comparison_scope not in SCOPES:
            raise ValueError(f"unknown scope {self.comparison_scope!r}; valid: {', '.join(sorted(set(SCOPES.values())))}")
        if self.comparison not in COMPARISONS:
            raise ValueError(f"unknown comparison {self.comparison!r}; valid: {COMPARISONS}")
        if self.aggregator not in AGGREGATOR_KINDS:
            raise ValueError(f"unknown aggregator {self.aggregator!r}")

    @property
    def scope(self):
        return SCOPES[self.comparison_scope]


def parse_composite_spec(text):
    """Parse the compact "scope:measure:comparison:aggregator" grammar.

    The measure token may itself carry ":param=value" parts, so the scope is
    the first segment and the comparison/aggregator the last two.
    """
    parts = text.strip().split(":")
    if len(parts) < 4:
        raise ValueError(
            f"composite spec {text!r} must look like scope:measure:comparison:aggregator"
        )
    scope = parts[0]
    comparison = parts[-2]
    aggregator = parts[-1]
    measure = ":".join(parts[1:-2])
    return CompositeIndexSpec(scope, measure, comparison, aggregator)


def _base_on_concept(lat, base_measure, concept_id):
    if base_measure in MEASURES:
        return itemset_measure(lat.context, base_measure, lat.intent_indices(concept_id))
    from . import indices  # deferred: indices imports this module

    spec = indices.IndexSpec.parse(base_measure)
    table = indices.compute_index_table(lat, [spec])
    return float(table.values(spec.column_name())[concept_id])


def _base_on_attribute(lat, base_measure, concept_id, attribute):
    if base_measure not in MEASURES:
        raise ValueError(
            f"attribute scopes need a contingency measure, got {base_measure!r}"
        )
    table = _rule_table(lat.context, lat.intent_indices(concept_id), [int(attribute)])
    return rule_measure(base_measure, table)


def _rule_table(ctx, antecedent, consequent):
    return contingency_from_sets(ctx, list(map(int, antecedent)), list(map(int, consequent)))


def evaluate_composite(lat, c, spec):
    """Collect the base measure over the scope, compare, aggregate.

    Empty scopes return 0.  Fuzzy aggregators reject values outside [0, 1]
    with the offending value named.
    """
    if isinstance(spec, str):
        spec = parse_composite_spec(spec)
    c = c.id if isinstance(c, Concept) else int(c)
    scope = spec.scope

    if scope == "out_of_intent_attributes":
        intent = set(int(m) for m in lat.intent_indices(c))
        elements = [m for m in range(lat.context.n_attributes) if m not in intent]
        values = [_base_on_attribute(lat, spec.base_measure, c, m) for m in elements]
        own = None
        if spec.comparison != "none":
            own = rule_measure(
                spec.base_measure,
                _rule_table(lat.context, lat.intent_indices(c), lat.intent_indices(c)),
            )
    else:
        if scope == "self":
            elements = [c]
        elif scope == "upper_neighbors":
            elements = [int(u) for u in lat.upper_neighbors(c)]
        elif scope == "lower_neighbors":
            elements = [int(d) for d in lat.lower_neighbors(c)]
        else:
            elements = [int(d) for d in lat.descendants(c)]
        values = [_base_on_concept(lat, spec.base_measure, e) for e in elements]
        own = _base_on_concept(lat, spec.base_measure, c) if spec.comparison != "none" else None

    if not values:
        return 0.0
    if spec.comparison == "difference":
        values = [v - own for v in values]
    elif spec.comparison == "ratio":
        values = [_div(v, own) for v in values]
    elif spec.comparison == "log_ratio":
        values = [math.log(_div(v, own)) if _div(v, own) > 0 else -INF for v in values]
    return aggregate(values, spec.aggregator)


def index1(lat, c):
    """Worked example 1: smallest independence-gap drop toward the ancestors.

    min over upper neighbors of PS(D) - PS(B) with PS(X) = P(X) - prod P(m);
    0 when the concept has no upper neighbors.
    """
    c = c.id if isinstance(c, Concept) else int(c)
    un = lat.upper_neighbors(c)
    if un.size == 0:
        return 0.0
    own = itemset_measure(lat.context, "piatetsky_shapiro", lat.intent_indices(c))
    return float(
        min(
            itemset_measure(lat.context, "piatetsky_shapiro", lat.intent_indices(int(u))) - own
            for u in un
        )
    )


def index2(lat, c, literal=True):
    """Worked example 2 over the attributes outside the intent.

    Literal form: |M-B| * sum of 1/P(m|B); the harmonic-mean reading
    |M-B| / sum of 1/P(m|B) sits behind ``literal=False``.  A zero
    conditional probability yields the +inf sentinel.
    """
    c = c.id if isinstance(c, Concept) else int(c)
    ctx = lat.context
    intent = set(int(m) for m in lat.intent_indices(c))
    outside = [m for m in range(ctx.n_attributes) if m not in intent]
    if not outside:
        return 0.0
    extent = lat.extent_indices(c)
    size = extent.size
    total = 0.0
    for m in outside:
        hit = int(ctx.bools[extent, m].sum()) if size else 0
        p = hit / size if size else 0.0
        if p == 0.0:
            return INF if literal else 0.0
        total += 1.0 / p
    if literal:
        return float(len(outside) * total)
    return float(len(outside) / total)
