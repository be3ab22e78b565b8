"""
Finite-difference Dirichlet solves, universal-bound measurements, Lane-Emden h-calculus,
decay scans and the proportional-system counterexamples.
"""

from .counterexample import Counterexample, proportional_counterexample
from .fd import BVPSolution, GuessKind, InitialGuess, solve_ball, solve_slab
from .hcalc import BoundSlopes, HCalculus, LogBoundExponents, h_calculus, lane_emden_bound_slopes, log_bound_exponents
from .report import BoundMode, BoundReport, DecayRow, DecayStatus, DecayTable, DomainBound, bound_report, decay_scan

__all__ = [
    "BVPSolution",
    "BoundMode",
    "BoundReport",
    "BoundSlopes",
    "Counterexample",
    "DecayRow",
    "DecayStatus",
    "DecayTable",
    "DomainBound",
    "GuessKind",
    "HCalculus",
    "InitialGuess",
    "LogBoundExponents",
    "bound_report",
    "decay_scan",
    "h_calculus",
    "lane_emden_bound_slopes",
    "log_bound_exponents",
    "proportional_counterexample",
    "solve_ball",
    "solve_slab",
]
