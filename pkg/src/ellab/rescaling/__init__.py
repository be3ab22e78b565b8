"""Rescaling limits: uniform convergence tables, discrete doubling points, the critical limit of u_k."""

from .convergence import ConvergenceTable, PowerEnvelope, power_envelope, uniform_convergence_check
from .critical import BubbleFit, CriticalLimitTable, CriticalRow, critical_limit_check, fit_bubble, rescaled_uk
from .doubling import DiscreteField, DoublingCheck, DoublingResult, doubling_point, verify_doubling

__all__ = [
    "BubbleFit",
    "ConvergenceTable",
    "CriticalLimitTable",
    "CriticalRow",
    "DiscreteField",
    "DoublingCheck",
    "DoublingResult",
    "PowerEnvelope",
    "critical_limit_check",
    "doubling_point",
    "fit_bubble",
    "power_envelope",
    "rescaled_uk",
    "uniform_convergence_check",
]
