"""
Hypothesis checkers for Liouville-type theorems and the exponent / threshold formulas.
"""

from .exponents import BenchmarkThresholds, Exponents, Geometry, benchmark_thresholds, exponents
from .gidas_spruck import GSCoefficients, GSParams, check_gs_general, gs_coefficients, search_gs_params
from .scalar import (
    KappaBar,
    check_gs_modified,
    check_theorem_A,
    check_theorem_B,
    check_theorem_C_hyp,
    check_thm1_scalar,
    monotone_kappa_bar,
)
from .systems import (
    Cor0Params,
    check_mixed_power,
    check_coupled_log,
    check_proportional,
    check_sum_positivity,
    check_thm1_conditions,
    cor0_params,
    growth_D_value,
    lane_emden_region,
)
from .thresholds import ThresholdRecovery, recover_benchmark_thresholds
from .verdict import CheckVerdict, ConditionResult, Holds, TheoremId, Witness

__all__ = [
    "BenchmarkThresholds",
    "CheckVerdict",
    "ConditionResult",
    "Cor0Params",
    "Exponents",
    "GSCoefficients",
    "GSParams",
    "Geometry",
    "Holds",
    "KappaBar",
    "TheoremId",
    "ThresholdRecovery",
    "Witness",
    "benchmark_thresholds",
    "check_mixed_power",
    "check_coupled_log",
    "check_gs_general",
    "check_gs_modified",
    "check_proportional",
    "check_sum_positivity",
    "check_theorem_A",
    "check_theorem_B",
    "check_theorem_C_hyp",
    "check_thm1_conditions",
    "check_thm1_scalar",
    "cor0_params",
    "exponents",
    "growth_D_value",
    "monotone_kappa_bar",
    "gs_coefficients",
    "lane_emden_region",
    "recover_benchmark_thresholds",
    "search_gs_params",
]
