"""conceptmine: concept lattices, interestingness indices, and evaluation harnesses."""

from .backend import active_backend, set_backend
from .context import (
    AttributeSet,
    FormalContext,
    NoiseSpec,
    ObjectSet,
    RandomContextSpec,
    apply_noise,
    close_attributes,
    close_objects,
    derive_attributes,
    derive_objects,
    generate_random_context,
)
from .errors import (
    BudgetExceededError,
    DimensionError,
    IncompleteLatticeError,
    InvariantError,
    ParseError,
)
from .formats import read_context, write_context
from .lattice import (
    Concept,
    ConceptLattice,
    MobiusTable,
    descendants,
    enumerate_concepts,
    leq,
    mobius,
)
from .indices import (
    IndexSpec,
    IndexTable,
    SimilarityConfig,
    basic_level_similarity,
    compute_index_table,
    concept_probability,
    cv_cfc_cu,
    delta_tcfi,
    integral_stability,
    levelwise_stability,
    lstab_and_bounds,
    margin_closed,
    margin_closed_relaxed,
    monocle,
    predictability,
    robustness,
    separation,
    stability_exact,
    stability_montecarlo,
    support,
)
from .measures import (
    AGGREGATOR_KINDS,
    CompositeIndexSpec,
    ContingencyTable,
    MEASURES,
    aggregate,
    contingency_from_sets,
    evaluate_composite,
    index1,
    index2,
    itemset_measure,
    parse_composite_spec,
    rule_measure,
)
from .experiments import (
    ApproxStudySpec,
    CorrelationStudySpec,
    NoiseStudySpec,
    auc,
    kendall_tau_b,
    ols_fit,
    run_approx_study,
    run_correlation_study,
    run_meta_demo,
    run_noise_study,
)
from . import fixtures

__version__ = "0.1.0"

__all__ = [
    "AGGREGATOR_KINDS",
    "ApproxStudySpec",
    "AttributeSet",
    "BudgetExceededError",
    "CompositeIndexSpec",
    "Concept",
    "ConceptLattice",
    "ContingencyTable",
    "CorrelationStudySpec",
    "DimensionError",
    "FormalContext",
    "IncompleteLatticeError",
    "IndexSpec",
    "IndexTable",
    "InvariantError",
    "MEASURES",
    "MobiusTable",
    "NoiseSpec",
    "NoiseStudySpec",
    "ObjectSet",
    "ParseError",
    "RandomContextSpec",
    "SimilarityConfig",
    "active_backend",
    "aggregate",
    "apply_noise",
    "auc",
    "basic_level_similarity",
    "close_attributes",
    "close_objects",
    "compute_index_table",
    "concept_probability",
    "contingency_from_sets",
    "cv_cfc_cu",
    "delta_tcfi",
    "derive_attributes",
    "derive_objects",
    "descendants",
    "enumerate_concepts",
    "evaluate_composite",
    "fixtures",
    "generate_random_context",
    "index1",
    "index2",
    "integral_stability",
    "itemset_measure",
    "kendall_tau_b",
    "leq",
    "levelwise_stability",
    "lstab_and_bounds",
    "margin_closed",
    "margin_closed_relaxed",
    "mobius",
    "monocle",
    "ols_fit",
    "parse_composite_spec",
    "predictability",
    "read_context",
    "robustness",
    "rule_measure",
    "run_approx_study",
    "run_correlation_study",
    "run_meta_demo",
    "run_noise_study",
    "separation",
    "set_backend",
    "stability_exact",
    "stability_montecarlo",
    "support",
    "write_context",
]
