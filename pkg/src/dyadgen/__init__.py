"""dyadgen: causal-arrow algebra over network dyads and growth samplers."""

from .arrows import (
    Arrow,
    ARROW_ORDER,
    CompositionTable,
    Dyad,
    HassePoset,
    MetaDagClass,
    build_hasse,
    class_label,
    classify_relation,
    compose_sets,
    composition_table_csv,
    derive_composition_table,
    enumerate_closed_classes,
    enumerate_deletion_invariant,
    generators,
    hasse_dot,
    meta_dag_dot,
    parents_of,
    transitive_closure,
)
from .analytics import (
    DegreeStats,
    GrowthFit,
    GrowthLaw,
    NoPowerLawError,
    Regime,
    RegimeReport,
    TailFit,
    avg_degree_curve,
    build_regime_report,
    expected_edges_exact,
    expected_in_degree,
    expected_in_degree_recursion,
    fit_avg_degree_growth,
    fit_tail_exponent,
    gamma_from_expected_curve,
    predicted_avg_degree,
    predicted_gamma,
    regime_classify,
)
from .events import (
    DyadStatus,
    TriggerKey,
    TriggerStats,
    dorpa_edge_prob,
    dorpa_marginal_counts,
    sample_dorpa_events,
    sample_dorpa_sequential,
)
from .network import (
    GrowingNetwork,
    NetworkFormatError,
    edge_prob,
    read_manifest,
    read_network,
    recompute_checks,
    sample_node_degrees,
    sample_sequential,
    write_manifest,
    write_network,
)
from .parallel import BlockSchedule, sample_parallel
from .params import ModelParams, ParameterError
from .rng import TAG_BASE, TAG_EDGE, TAG_HUB, TAG_PATH, RandomSource

__version__ = "0.1.0"
