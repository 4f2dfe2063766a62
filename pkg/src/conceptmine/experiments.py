"""Evaluation harnesses: rank correlation, stability approximation, noise AUC.

Three seeded, deterministic pipelines plus a bundled demo:

* correlation study: random contexts per density, every index pair compared
  with the tie-corrected Kendall tau over the concepts of each context,
  averaged within density groups and overall;
* approximation study: pooled concepts per (density, rate), ordinary least
  squares of exact stability against the minor-integral stability at level
  ceil(rate * |extent|) clamped to [2, |extent|-1];
* noise study: repeated noisy copies of a base context, concepts labelled by
  whether their intent survives from the original lattice, one AUC per index
  and trial;
* meta demo: the bundled index-catalogue context ranked by every index.

Every trial derives its randomness from (study seed, trial path), so results
are independent of execution order; reruns are byte-identical in CSV form.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .context import FormalContext, NoiseSpec, apply_noise, rng_stream
from .errors import BudgetExceededError
from .indices import IndexSpec, compute_index_table, format_value
from .lattice import enumerate_concepts

# -- rank statistics -----------------------------------------------------------


def _merge_count_inversions(values):
    """Strict inversions via iterative mergesort; equal elements don't count."""
    a = list(values)
    n = len(a)
    buf = [0.0] * n
    inversions = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[j] < a[i]:
                    inversions += mid - i
                    buf[k] = a[j]
                    j += 1
                else:
                    buf[k] = a[i]
                    i += 1
                k += 1
            buf[k:hi] = a[i:mid] if i < mid else a[j:hi]
            a[lo:hi] = buf[lo:hi]
        width *= 2
    return inversions


def _tie_term(sorted_values):
    total = 0
    run = 1
    for i in range(1, len(sorted_values) + 1):
        if i < len(sorted_values) and sorted_values[i] == sorted_values[i - 1]:
            run += 1
        else:
            total += run * (run - 1) // 2
            run = 1
    return total


def kendall_tau_b(x, y, with_flag=False):
    """Tie-corrected rank correlation in [-1, 1]; O(n log n).

    Fully tied input on either side is degenerate: the value is 0 and the
    optional flag reports it.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("kendall_tau_b needs two equally long 1-d sequences")
    n = x.size
    if n < 2:
        raise ValueError("kendall_tau_b needs at least two observations")
    perm = np.lexsort((y, x))
    xs = x[perm]
    ys = y[perm]
    tot = n * (n - 1) // 2
    xtie = _tie_term(list(xs))
    joint = 0
    run = 1
    for i in range(1, n + 1):
        if i < n and xs[i] == xs[i - 1] and ys[i] == ys[i - 1]:
            run += 1
        else:
            joint += run * (run - 1) // 2
            run = 1
    ytie = _tie_term(sorted(y.tolist()))
    dis = _merge_count_inversions(ys.tolist())
    con_minus_dis = tot - xtie - ytie + joint - 2 * dis
    denom = math.sqrt(float(tot - xtie) * float(tot - ytie))
    if denom == 0.0:
        return (0.0, True) if with_flag else 0.0
    tau = con_minus_dis / denom
    return (tau, False) if with_flag else tau


def auc(scores, labels):
    """Probability that a positive outscores a negative; ties credit 0.5."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("auc needs aligned 1-d scores and labels")
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("auc needs at least one positive and one negative label")
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(scores.size, dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    u = float(ranks[labels].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


@dataclass(frozen=True)
class OlsFit:
    slope: float
    intercept: float
    r_squared: float
    degenerate: bool = False


def ols_fit(x, y):
    """Least-squares line with R^2 = 1 - SSE/SST; constant y flags R^2 = 1."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("ols_fit needs two equally long sequences of length >= 2")
    if np.all(x == x[0]):
        raise ValueError("ols_fit needs non-constant x")
    mx = x.mean()
    my = y.mean()
    sxx = float(((x - mx) ** 2).sum())
    sxy = float(((x - mx) * (y - my)).sum())
    slope = sxy / sxx
    intercept = my - slope * mx
    sst = float(((y - my) ** 2).sum())
    if sst == 0.0:
        return OlsFit(slope, intercept, 1.0, degenerate=True)
    sse = float(((y - (slope * x + intercept)) ** 2).sum())
    return OlsFit(slope, intercept, 1.0 - sse / sst, degenerate=False)


# -- study specs ----------------------------------------------------------------


def _coerce_specs(specs):
    return tuple(s if isinstance(s, IndexSpec) else IndexSpec.parse(s) for s in specs)


@dataclass(frozen=True)
class CorrelationStudySpec:
    densities: tuple = (0.1, 0.2, 0.3, 0.4)
    contexts_per_density: int = 100
    object_range: tuple = (40, 80)
    attribute_range: tuple = (10, 50)
    indices: tuple = ()
    seed: int = 0
    budget: int = None

    def __post_init__(self):
        if not self.densities or any(not 0 <= d <= 1 for d in self.densities):
            raise ValueError("densities must be probabilities")
        if self.contexts_per_density < 1:
            raise ValueError("contexts_per_density must be >= 1")
        for lo, hi in (self.object_range, self.attribute_range):
            if lo < 1 or hi < lo:
                raise ValueError("ranges must be non-empty inclusive intervals")
        object.__setattr__(self, "indices", _coerce_specs(self.indices))


@dataclass(frozen=True)
class ApproxStudySpec:
    densities: tuple = (0.2, 0.3)
    rates: tuple = tuple(round(0.05 * k, 2) for k in range(1, 20))
    contexts_per_density: int = 10
    object_range: tuple = (40, 80)
    attribute_range: tuple = (10, 50)
    seed: int = 0
    budget: int = None

    def __post_init__(self):
        if any(not 0 < r < 1 for r in self.rates):
            raise ValueError("rates must lie strictly inside (0, 1)")


@dataclass(frozen=True)
class NoiseStudySpec:
    base_context: FormalContext
    noise_rates: tuple = (0.01, 0.03, 0.05, 0.1)
    trials_per_rate: int = 20
    indices: tuple = ()
    seed: int = 0
    match: str = "intent"
    budget: int = None

    def __post_init__(self):
        if any(not 0 <= r <= 1 for r in self.noise_rates):
            raise ValueError("noise rates must be probabilities")
        if self.trials_per_rate < 1:
            raise ValueError("trials_per_rate must be >= 1")
        if self.match not in ("intent", "extent", "both"):
            raise ValueError("match must be intent, extent, or both")
        object.__setattr__(self, "indices", _coerce_specs(self.indices))


def _draw_context(seed, path, density, object_range, attribute_range):
    rng = rng_stream(seed, *path)
    n_obj = int(rng.integers(object_range[0], object_range[1] + 1))
    n_attr = int(rng.integers(attribute_range[0], attribute_range[1] + 1))
    cells = rng.random((n_obj, n_attr)) < density
    return FormalContext(
        [f"g{i}" for i in range(n_obj)], [f"m{j}" for j in range(n_attr)], cells
    )


def _mine_with_regeneration(seed, base_path, density, object_range, attribute_range, budget):
    """Enumerate a random context, drawing a fresh one when the budget trips."""
    attempt = 0
    while True:
        ctx = _draw_context(seed, (*base_path, attempt), density, object_range, attribute_range)
        try:
            return enumerate_concepts(ctx, budget=budget), attempt
        except BudgetExceededError:
            attempt += 1
            if attempt > 1000:
                raise


# -- correlation study -----------------------------------------------------------


@dataclass
class CorrelationStudyResult:
    index_names: list
    densities: list
    mean_tau: dict  # density key ("0.1", ..., "overall") -> symmetric matrix
    sd_tau: dict
    n_contexts: dict
    regenerated: int
    degenerate_pairs: int

    def pair(self, density, name_a, name_b):
        i = self.index_names.index(name_a)
        j = self.index_names.index(name_b)
        return float(self.mean_tau[density][i, j])

    def to_csv(self):
        lines = ["density,index_a,index_b,mean_tau,sd_tau"]
        keys = [_density_key(d) for d in self.densities] + ["overall"]
        k = len(self.index_names)
        for key in keys:
            for i in range(k):
                for j in range(i + 1, k):
                    lines.append(
                        ",".join(
                            [
                                key,
                                self.index_names[i],
                                self.index_names[j],
                                format_value(float(self.mean_tau[key][i, j])),
                                format_value(float(self.sd_tau[key][i, j])),
                            ]
                        )
                    )
        return "\n".join(lines) + "\n"


def _density_key(d):
    return format_value(float(d))


def run_correlation_study(spec):
    """Mean pairwise tau between index rankings on random contexts."""
    names = [s.column_name() for s in spec.indices]
    if len(names) < 2:
        raise ValueError("correlation study needs at least two indices")
    k = len(names)
    per_density_taus = {}
    regenerated = 0
    degenerate = 0
    for di, density in enumerate(spec.densities):
        taus = np.full((spec.contexts_per_density, k, k), np.nan)
        for ci in range(spec.contexts_per_density):
            lat, attempts = _mine_with_regeneration(
                spec.seed, (di, ci), density, spec.object_range, spec.attribute_range, spec.budget
            )
            regenerated += attempts
            table = compute_index_table(lat, list(spec.indices))
            cols = [table.values(name) for name in names]
            for i in range(k):
                taus[ci, i, i] = 1.0
                for j in range(i + 1, k):
                    tau, flag = kendall_tau_b(cols[i], cols[j], with_flag=True)
                    if flag:
                        degenerate += 1
                        continue
                    taus[ci, i, j] = tau
                    taus[ci, j, i] = tau
        per_density_taus[_density_key(density)] = taus
    mean_tau = {}
    sd_tau = {}
    n_contexts = {}
    with np.errstate(invalid="ignore"):
        for key, taus in per_density_taus.items():
            mean_tau[key] = np.nanmean(taus, axis=0)
            sd_tau[key] = np.nanstd(taus, axis=0)
            n_contexts[key] = taus.shape[0]
        pooled = np.concatenate(list(per_density_taus.values()), axis=0)
        mean_tau["overall"] = np.nanmean(pooled, axis=0)
        sd_tau["overall"] = np.nanstd(pooled, axis=0)
        n_contexts["overall"] = pooled.shape[0]
    return CorrelationStudyResult(
        names, list(spec.densities), mean_tau, sd_tau, n_contexts, regenerated, degenerate
    )


# -- approximation study ----------------------------------------------------------


@dataclass
class ApproxStudyResult:
    rows: list  # dicts: density, rate, slope, intercept, r2, n_concepts, skipped

    def cell(self, density, rate):
        for row in self.rows:
            if row["density"] == density and row["rate"] == rate:
                return row
        raise KeyError((density, rate))

    def r2_curve(self, density):
        rows = sorted((r for r in self.rows if r["density"] == density), key=lambda r: r["rate"])
        return [r["rate"] for r in rows], [r["r2"] for r in rows]

    def to_csv(self):
        lines = ["density,rate,slope,intercept,r2,n_concepts"]
        for row in self.rows:
            lines.append(
                ",".join(
                    [
                        format_value(row["density"]),
                        format_value(row["rate"]),
                        format_value(row["slope"]),
                        format_value(row["intercept"]),
                        format_value(row["r2"]),
                        str(row["n_concepts"]),
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def run_approx_study(spec):
    """Fit stability against integral stability truncated at per-concept levels.

    The regressor for rate r is the mean level-wise stability over levels
    ceil(r * |extent|) .. |extent|-1 (the upper-side integral divided by the
    number of levels it sums); averaging keeps the regressor on the same
    [0, 1] scale as stability across extents of very different sizes.
    """
    rows = []
    for di, density in enumerate(spec.densities):
        xs = {rate: [] for rate in spec.rates}
        ys = []
        for ci in range(spec.contexts_per_density):
            lat, _ = _mine_with_regeneration(
                spec.seed, (di, ci), density, spec.object_range, spec.attribute_range, spec.budget
            )
            specs = [IndexSpec("stability")] + [
                IndexSpec("integral_stability_major", {"rate": rate}) for rate in spec.rates
            ]
            table = compute_index_table(lat, specs)
            usable = lat.extent_sizes >= 3  # level range [2, n-1] must be non-empty
            ys.append(table.values("stability")[usable])
            sizes = lat.extent_sizes[usable].astype(np.int64)
            for rate in spec.rates:
                name = IndexSpec("integral_stability_major", {"rate": rate}).column_name()
                levels = np.clip(np.ceil(rate * sizes).astype(np.int64), 2, sizes - 1)
                xs[rate].append(table.values(name)[usable] / (sizes - levels))
        y = np.concatenate(ys) if ys else np.empty(0)
        for rate in spec.rates:
            x = np.concatenate(xs[rate]) if xs[rate] else np.empty(0)
            row = {
                "density": float(density),
                "rate": float(rate),
                "n_concepts": int(x.size),
                "skipped": False,
            }
            if x.size < 2 or np.all(x == x[0]):
                row.update(slope=0.0, intercept=0.0, r2=0.0, skipped=True)
            else:
                fit = ols_fit(x, y)
                row.update(slope=fit.slope, intercept=fit.intercept, r2=fit.r_squared)
            rows.append(row)
    return ApproxStudyResult(rows)


# -- noise study --------------------------------------------------------------------


@dataclass
class NoiseStudyResult:
    rows: list  # dicts: rate, index, mean_auc, trials_used
    dropped_trials: int

    def mean_auc(self, rate, index_name):
        for row in self.rows:
            if row["rate"] == rate and row["index"] == index_name:
                return row["mean_auc"]
        raise KeyError((rate, index_name))

    def to_csv(self):
        lines = ["rate,index,mean_auc,trials_used"]
        for row in self.rows:
            lines.append(
                ",".join(
                    [
                        format_value(row["rate"]),
                        row["index"],
                        format_value(row["mean_auc"]),
                        str(row["trials_used"]),
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def _survivor_labels(base_lat, noisy_lat, match):
    base_intents = {base_lat.intents[i].tobytes() for i in range(len(base_lat))}
    base_extents = {base_lat.extents[i].tobytes() for i in range(len(base_lat))}
    labels = np.zeros(len(noisy_lat), dtype=bool)
    same_attr_words = base_lat.intents.shape[1] == noisy_lat.intents.shape[1]
    same_obj_words = base_lat.extents.shape[1] == noisy_lat.extents.shape[1]
    for i in range(len(noisy_lat)):
        by_intent = same_attr_words and noisy_lat.intents[i].tobytes() in base_intents
        by_extent = same_obj_words and noisy_lat.extents[i].tobytes() in base_extents
        if match == "intent":
            labels[i] = by_intent
        elif match == "extent":
            labels[i] = by_extent
        else:
            labels[i] = by_intent and by_extent
    return labels


def run_noise_study(spec):
    """Original-concept recovery AUC per index under cellwise noise."""
    names = [s.column_name() for s in spec.indices]
    if not names:
        raise ValueError("noise study needs at least one index")
    base_lat = enumerate_concepts(spec.base_context, budget=spec.budget)
    rows = []
    dropped = 0
    for ri, rate in enumerate(spec.noise_rates):
        per_index = {name: [] for name in names}
        used = 0
        for ti in range(spec.trials_per_rate):
            sub_seed = int(rng_stream(spec.seed, ri, ti).integers(0, 2**63))
            noisy = apply_noise(spec.base_context, NoiseSpec(rate=rate, seed=sub_seed))
            noisy_lat = enumerate_concepts(noisy, budget=spec.budget)
            labels = _survivor_labels(base_lat, noisy_lat, spec.match)
            if labels.all() or not labels.any():
                dropped += 1
                continue
            used += 1
            table = compute_index_table(noisy_lat, list(spec.indices))
            for name in names:
                per_index[name].append(auc(table.values(name), labels))
        for name in names:
            vals = per_index[name]
            rows.append(
                {
                    "rate": float(rate),
                    "index": name,
                    "mean_auc": float(np.mean(vals)) if vals else float("nan"),
                    "trials_used": used,
                }
            )
    return NoiseStudyResult(rows, dropped)


# -- CSV parsers (round-trip support for the CLI outputs) ---------------------------


def parse_correlation_csv(text):
    return _parse_csv(text, ("density", str), ("index_a", str), ("index_b", str),
                      ("mean_tau", float), ("sd_tau", float))


def parse_approx_csv(text):
    return _parse_csv(text, ("density", float), ("rate", float), ("slope", float),
                      ("intercept", float), ("r2", float), ("n_concepts", int))


def parse_noise_csv(text):
    return _parse_csv(text, ("rate", float), ("index", str), ("mean_auc", float),
                      ("trials_used", int))


def _parse_csv(text, *fields):
    lines = [line for line in text.strip().split("\n") if line]
    header = lines[0].split(",")
    expected = [name for name, _ in fields]
    if header != expected:
        raise ValueError(f"unexpected header {header}, wanted {expected}")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        rows.append({name: conv(part) for (name, conv), part in zip(fields, parts)})
    return rows


# -- meta demo -----------------------------------------------------------------------

#: rankings reported by the bundled demo (name -> index spec string)
META_DEMO_INDICES = (
    "support",
    "stability",
    "delta_l",
    "delta_h",
    "stab2noe",
    "stab2oe",
    "stab2oie",
    "robustness:alpha=0.3",
    "concept_probability",
    "separation",
    "monocle",
    "margin_closed:alpha=0.5",
    "margin_closed_relaxed",
    "similarity:similarity=jaccard",
    "similarity:similarity=smc",
    "predictability",
    "cv",
    "cfc",
    "cu",
)


@dataclass
class MetaDemoReport:
    n_concepts: int
    top_k: int
    rankings: dict  # index name -> list of concept ids
    frequencies: np.ndarray  # per concept: fraction of rankings listing it
    concept_labels: list

    def to_json(self):
        payload = {
            "n_concepts": self.n_concepts,
            "top_k": self.top_k,
            "rankings": {k: list(map(int, v)) for k, v in self.rankings.items()},
            "frequencies": [
                {"concept": i, "label": self.concept_labels[i], "frequency": float(f)}
                for i, f in enumerate(self.frequencies)
                if f > 0
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def run_meta_demo(top_k=8):
    """Rank the bundled index-catalogue lattice by every index."""
    from .fixtures import table1_context

    ctx = table1_context()
    lat = enumerate_concepts(ctx)
    table = compute_index_table(lat, list(META_DEMO_INDICES))
    rankings = {}
    for name in table.names:
        values = table.values(name)
        order = np.lexsort((np.arange(len(lat)), -values))
        rankings[name] = [int(i) for i in order[:top_k]]
    freq = np.zeros(len(lat))
    for ids in rankings.values():
        for i in ids:
            freq[i] += 1
    freq /= len(rankings)
    labels = [
        "{" + ",".join(ctx.object_names[g] for g in lat.extent_indices(i)) + "}"
        for i in range(len(lat))
    ]
    return MetaDemoReport(len(lat), top_k, rankings, freq, labels)
