"""Macro-set expansion simulations and dependency-graph compression analytics."""

from .analytics import (
    ClassifyConfig,
    CondensedGraph,
    FilterPolicy,
    HistogramBin,
    MedianCurve,
    NodeMetrics,
    RegimeVerdict,
    SlopeFit,
    classify_relationship,
    condense_scc,
    depths,
    filter_macro_set,
    histogram,
    inline_nodes,
    log2_exact,
    median_curve,
    node_metrics,
    regime_classify,
    slope_fit,
    split_unwrapped,
    unwrapped_lengths,
)
from .corpus import (
    CorpusError,
    DepGraph,
    Element,
    GraphNode,
    build_graph,
    load_corpus,
    load_graph,
    save_corpus,
    save_graph,
)
from .expansion import (
    BoundReport,
    ExpansionProfile,
    ExpansionValue,
    HalvingFailure,
    SampledRates,
    SphereBudgetError,
    expansion_function,
    expansion_profile,
    find_halving_macro,
    fit_parse_constant,
    quasi_exponential_upper_report,
    recursive_parse_free,
    sample_words,
    sampled_rates,
    verify_bounds,
)
from .exprs import ExprNode, ExprParseError, collect_elems, parse_expr, print_expr
from .families import FamilySpec, LazyFreeMacroSet, build_macro_family, minimal_period
from .interest import (
    CompressionScores,
    ElementSplit,
    MalformedElementError,
    PowerIterationError,
    RankParams,
    RankResult,
    alt_deductive_scores,
    compression_scores,
    element_splits,
    pagerank,
    transition_probability,
)
from .monoid import (
    LatticeBudgetError,
    Macro,
    MacroSet,
    MonoidKind,
    Word,
    abelian,
    ball_size,
    free,
    g_length,
    gprime_length,
    monoid_depth,
    wrapped_length,
)
from .synth import synth_flat, synth_hierarchy, synth_mixed

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ClassifyConfig",
    "CompressionScores",
    "CondensedGraph",
    "CorpusError",
    "DepGraph",
    "Element",
    "ElementSplit",
    "ExpansionProfile",
    "ExpansionValue",
    "ExprNode",
    "ExprParseError",
    "FamilySpec",
    "FilterPolicy",
    "GraphNode",
    "HalvingFailure",
    "HistogramBin",
    "LatticeBudgetError",
    "LazyFreeMacroSet",
    "Macro",
    "MacroSet",
    "MalformedElementError",
    "MedianCurve",
    "MonoidKind",
    "NodeMetrics",
    "PowerIterationError",
    "RankParams",
    "RankResult",
    "RegimeVerdict",
    "SampledRates",
    "SlopeFit",
    "SphereBudgetError",
    "Word",
    "abelian",
    "alt_deductive_scores",
    "ball_size",
    "build_graph",
    "build_macro_family",
    "classify_relationship",
    "collect_elems",
    "compression_scores",
    "condense_scc",
    "depths",
    "element_splits",
    "expansion_function",
    "expansion_profile",
    "filter_macro_set",
    "find_halving_macro",
    "fit_parse_constant",
    "free",
    "g_length",
    "gprime_length",
    "histogram",
    "inline_nodes",
    "load_corpus",
    "load_graph",
    "log2_exact",
    "median_curve",
    "minimal_period",
    "monoid_depth",
    "node_metrics",
    "pagerank",
    "parse_expr",
    "print_expr",
    "quasi_exponential_upper_report",
    "recursive_parse_free",
    "regime_classify",
    "sample_words",
    "sampled_rates",
    "save_corpus",
    "save_graph",
    "slope_fit",
    "split_unwrapped",
    "synth_flat",
    "synth_hierarchy",
    "synth_mixed",
    "transition_probability",
    "unwrapped_lengths",
    "verify_bounds",
    "wrapped_length",
]
