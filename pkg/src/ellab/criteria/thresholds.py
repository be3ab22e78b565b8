"""
Numerical recovery of the benchmark thresholds K1, K2, K3 from the checkers themselves.

Each threshold is the zero crossing in K of one checker margin on the benchmark family
f(u) = (K + min(1, u^(p-1))) u^p; the closed forms in `benchmark_thresholds` are only used for
the relative errors.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable

from scipy.optimize import brentq

from ellab.exceptions import OnsetNotFoundError
from ellab.nonlin.presets import benchmark
from ellab.utils.scans import ScanConfig

from .exponents import BenchmarkThresholds, benchmark_thresholds
from .scalar import check_gs_modified, check_theorem_B, check_thm1_scalar

logger = logging.getLogger(__name__)

K_BRACKET = (1e-4, 1e4)
K_XTOL = 1e-10
K_RTOL = 1e-8


@dataclass(frozen=True, slots=True)
class ThresholdRecovery:
    exact: BenchmarkThresholds
    K1: float
    K2: float
    K3: float

    @property
    def relative_errors(self) -> dict[str, float]:
        return {
            "K1": abs(self.K1 - self.exact.K1) / self.exact.K1,
            "K2": abs(self.K2 - self.exact.K2) / self.exact.K2,
            "K3": abs(self.K3 - self.exact.K3) / self.exact.K3,
        }

    def to_dict(self) -> dict:
        return {
            "n": self.exact.n,
            "p": self.exact.p,
            "estimates": {"K1": self.K1, "K2": self.K2, "K3": self.K3},
            "exact": {"K0": self.exact.K0, "K1": self.exact.K1, "K2": self.exact.K2, "K3": self.exact.K3},
            "relative_errors": self.relative_errors,
        }


def _crossing(name: str, margin: Callable[[float], float]) -> float:
    lo, hi = K_BRACKET
    m_lo, m_hi = margin(lo), margin(hi)
    if m_lo * m_hi > 0.0:
        raise OnsetNotFoundError(f"{name} margin does not change sign on K in [{lo:g}, {hi:g}] ({m_lo:.3g}, {m_hi:.3g})")
    return float(brentq(margin, lo, hi, xtol=K_XTOL, rtol=K_RTOL, maxiter=200))


def recover_benchmark_thresholds(n: int, p: float, scan: ScanConfig | None = None) -> ThresholdRecovery:
    """
    Bisect in K on three margins:

        K1: p_S - sup s f'/f                       (nonincreasing s^-p_S f)
        K2: p_S + 1 - sup s f / F                  (scalar growth condition)
        K3: kappa - Q                              (modified Gidas-Spruck)

    Raises:
        ParameterRangeError: (n, p) outside the benchmark window.
        OnsetNotFoundError: a margin keeps its sign over the K bracket.
    """
    exact = benchmark_thresholds(n, p)
    scan = scan or ScanConfig.from_settings()
    start = time.perf_counter()
    K1 = _crossing("Theorem B", lambda K: check_theorem_B(benchmark(p, K), n, scan).margin)
    K2 = _crossing("growth", lambda K: check_thm1_scalar(benchmark(p, K), n, scan).margin)
    K3 = _crossing("Gidas-Spruck", lambda K: check_gs_modified(benchmark(p, K), n, scan).margin)
    recovery = ThresholdRecovery(exact=exact, K1=K1, K2=K2, K3=K3)
    logger.info(
        "criteria.thresholds_recovered",
        extra={
            "n": n,
            "p": p,
            "estimates": [K1, K2, K3],
            "relative_errors": recovery.relative_errors,
            "duration_ms": round((time.perf_counter() - start) * 1000, 1),
        },
    )
    return recovery
