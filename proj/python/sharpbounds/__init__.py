"""Bounds on counterfactual probabilities and their contrasts under
unmeasured confounding.

The sensitivity parameters (m, M) are the analyst's assumed extrema of
p(D=1 | E=e, U=u) over the exposure levels and the strata of an unmeasured
confounder U. Given observed margins and a feasible (m, M), the library
computes the counterfactual intervals, combines them into contrast bounds,
constructs explicit confounder models attaining those bounds to any
precision, and propagates distributions over (m, M) by deterministic
Monte Carlo.
"""

from ._core import (
    BoundDistribution,
    BoundSummary,
    ContingencyCounts,
    ContrastInterval,
    ContrastKind,
    ContrastSpec,
    CounterRng,
    DegenerateSupport,
    EmptyArm,
    EpsilonOutOfRange,
    Error,
    FeasibleRegion,
    GridTable,
    IndeterminateContrast,
    InfeasibleM,
    InfeasibleParams,
    InfeasibleSmallM,
    InvalidProbability,
    InvertedParams,
    MalformedRow,
    McConfig,
    McDraw,
    McSummary,
    NonMonotoneContrast,
    ObservedMargins,
    ParamDistribution,
    ParseError,
    ProbabilityInterval,
    Quantiles,
    RawRecord,
    SensitivityParams,
    SharpnessReport,
    WitnessModel,
    WitnessTarget,
    build_witness,
    contrast_interval,
    count_records,
    counterfactual_interval,
    crude_risk,
    eval_contrast,
    exact_counterfactual,
    feasible_region,
    grid,
    implied_extrema,
    implied_margins,
    margins_from_counts,
    margins_from_records,
    mc_draw,
    normal_cdf,
    normal_quantile,
    odds,
    read_counts_json,
    read_records_csv,
    run_mc,
    sample_param,
    sharpness_gap,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "BoundDistribution",
    "BoundSummary",
    "ContingencyCounts",
    "ContrastInterval",
    "ContrastKind",
    "ContrastSpec",
    "CounterRng",
    "DegenerateSupport",
    "EmptyArm",
    "EpsilonOutOfRange",
    "Error",
    "FeasibleRegion",
    "GridTable",
    "IndeterminateContrast",
    "InfeasibleM",
    "InfeasibleParams",
    "InfeasibleSmallM",
    "InvalidProbability",
    "InvertedParams",
    "MalformedRow",
    "McConfig",
    "McDraw",
    "McSummary",
    "NonMonotoneContrast",
    "ObservedMargins",
    "ParamDistribution",
    "ParseError",
    "ProbabilityInterval",
    "Quantiles",
    "RawRecord",
    "SensitivityParams",
    "SharpnessReport",
    "WitnessModel",
    "WitnessTarget",
    "build_witness",
    "contrast_interval",
    "count_records",
    "counterfactual_interval",
    "crude_risk",
    "eval_contrast",
    "exact_counterfactual",
    "feasible_region",
    "grid",
    "implied_extrema",
    "implied_margins",
    "margins_from_counts",
    "margins_from_records",
    "mc_draw",
    "normal_cdf",
    "normal_quantile",
    "odds",
    "read_counts_json",
    "read_records_csv",
    "run_mc",
    "sample_param",
    "sharpness_gap",
    "validate_params",
]
