"""
Nonlinearities: expression trees, scalar and vector wrappers, calculus and regular variation.
"""

from .calculus import (
    deriv,
    kinks,
    one_sided_derivative,
    primitive,
    weighted_primitive,
    weighted_primitive_grid,
)
from .expr import Const, Expr, Log, LogShift, Max, Min, Power, Product, Sum, Switch, Var
from .parser import evaluate_constant, parse_expr
from .presets import PRESETS, build_preset
from .regvar import NumericIndex, RegVarProfile, SlowFactor, f_plus, local_index, numeric_index, regvar_profile
from .scalar import ScalarNonlin
from .special import (
    LogConvexity,
    check_log_convexity,
    h_sigma,
    log_family,
    log_family_log_derivative,
    phi_K,
    phi_K_min,
    theta,
)
from .system import ProportionalParts, SystemKind, SystemNonlin

__all__ = [
    "Const",
    "Expr",
    "Log",
    "LogShift",
    "Max",
    "Min",
    "Power",
    "Product",
    "Sum",
    "Switch",
    "Var",
    "parse_expr",
    "evaluate_constant",
    "ScalarNonlin",
    "SystemNonlin",
    "SystemKind",
    "ProportionalParts",
    "deriv",
    "kinks",
    "one_sided_derivative",
    "primitive",
    "weighted_primitive",
    "weighted_primitive_grid",
    "RegVarProfile",
    "SlowFactor",
    "NumericIndex",
    "regvar_profile",
    "numeric_index",
    "local_index",
    "f_plus",
    "theta",
    "phi_K",
    "phi_K_min",
    "h_sigma",
    "log_family",
    "log_family_log_derivative",
    "check_log_convexity",
    "LogConvexity",
    "PRESETS",
    "build_preset",
]
