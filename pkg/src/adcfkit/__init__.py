"""adcfkit: detection-cost and EER metrics for spoofing-robust speaker
verification scoring.

The package evaluates single-score and tandem (ASV + CM) systems from
trial-key and score files: the three-class architecture-agnostic
detection cost, its two-class specialization, tandem detection costs
under the AND-gate rule, the SV/SPF/SASV equal error rates, and a gated
cascade that turns a two-score system into a single-score one.
"""

from .adcf import AdcfResult, CostCurve, adcf_at, adcf_default, adcf_norm_at, min_adcf
from .costcore import (
    ConditionalMatrix,
    binary_conditional_matrix,
    cost_spec_from_model,
    dcf,
    empirical_conditional_matrix,
    total_cost,
)
from .eer import EerResult, eer_two_class, sasv_eer, spf_eer, sv_eer
from .errcurves import RateCurve, build_curve, candidate_thresholds, rate_at
from .synth import ClassDistribution, DualClassDistribution, generate_dual, generate_single
from .tandem import (
    ConstrainedCoeffs,
    TandemRates,
    TdcfResult,
    constrained_coeffs,
    gate_scores,
    min_tdcf,
    tandem_rates_analytic,
    tandem_rates_empirical,
    tdcf_constrained,
    tdcf_unconstrained,
)
from .trialdata import (
    COST_PRESETS,
    CostModel,
    DualScoreSet,
    GeneralCostSpec,
    PairedScores,
    ScoreSet,
    Trial,
    TrialClass,
    partition_dual_scores,
    partition_scores,
    read_cost_config,
    read_dual_scores,
    read_scores,
    read_trial_keys,
    resolve_cost_config,
    validate_cost_model,
    write_cost_config,
)

__version__ = "0.1.0"

__all__ = [
    "AdcfResult",
    "ClassDistribution",
    "ConditionalMatrix",
    "ConstrainedCoeffs",
    "CostCurve",
    "CostModel",
    "COST_PRESETS",
    "DualClassDistribution",
    "DualScoreSet",
    "EerResult",
    "GeneralCostSpec",
    "PairedScores",
    "RateCurve",
    "ScoreSet",
    "TandemRates",
    "TdcfResult",
    "Trial",
    "TrialClass",
    "adcf_at",
    "adcf_default",
    "adcf_norm_at",
    "binary_conditional_matrix",
    "build_curve",
    "candidate_thresholds",
    "constrained_coeffs",
    "cost_spec_from_model",
    "dcf",
    "eer_two_class",
    "empirical_conditional_matrix",
    "gate_scores",
    "generate_dual",
    "generate_single",
    "min_adcf",
    "min_tdcf",
    "partition_dual_scores",
    "partition_scores",
    "rate_at",
    "read_cost_config",
    "read_dual_scores",
    "read_scores",
    "read_trial_keys",
    "resolve_cost_config",
    "sasv_eer",
    "spf_eer",
    "sv_eer",
    "tandem_rates_analytic",
    "tandem_rates_empirical",
    "tdcf_constrained",
    "tdcf_unconstrained",
    "total_cost",
    "validate_cost_model",
    "write_cost_config",
]
