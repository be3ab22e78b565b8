"""
theta, phi_K and the log-family helpers.

    theta(K)       inverse of s -> s^-1 e^(s-1) on [1, inf)
    phi_K(s)       (1 + K / s) log(K + s), with inf_s phi_K = theta(K)
    h_sigma(s)     sigma / phi_K(s^sigma) = s g'(s) / g(s) - b  (per unit a)
    log_family     g(s) = s^b log^a(K + s^sigma), b = (p0 + 1) / 2
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ellab.exceptions import DomainError, ParameterRangeError

from .expr import LogShift, Var, make_product, power
from .scalar import ScalarNonlin

logger = logging.getLogger(__name__)

_RTOL = 4 * np.finfo(float).eps


def _require_K(K: float) -> float:
    K = float(K)
    if not math.isfinite(K) or K < 1.0:
        raise DomainError(f"K must be a finite number >= 1, got {K!r}", fields=["K"])
    return K


def theta(K: float) -> float:
    """
    theta(K) >= 1 with theta^-1 e^(theta - 1) = K.

    Solved in log form, (s - 1) - log s = log K, which is increasing on (1, inf).
    """
    K = _require_K(K)
    if K == 1.0:
        return 1.0
    target = math.log(K)

    def gap(s: float) -> float:
        return (s - 1.0) - math.log(s) - target

    hi = 2.0 + 2.0 * target
    while gap(hi) <= 0.0:
        hi *= 2.0
    return float(brentq(gap, 1.0, hi, xtol=1e-300, rtol=_RTOL, maxiter=500))


def phi_K(s, K: float):
    """(1 + K / s) log(K + s) for s > 0 (vectorized)."""
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore"):
        out = (1.0 + K / s) * np.log(K + s)
    return float(out) if out.ndim == 0 else out


def phi_K_min(K: float) -> tuple[float, float]:
    """
    (s_K, min phi_K).

    phi_K'(s) = (s - K log(K + s)) / s^2, so the minimizer is the root of s = K log(K + s); for
    K = 1 the function is increasing with infimum 1 as s -> 0+, reported as (0, 1).
    """
    K = _require_K(K)
    if K == 1.0:
        return 0.0, 1.0

    def slope_sign(s: float) -> float:
        return s - K * math.log(K + s)

    hi = max(1.0, 2.0 * K * (1.0 + math.log(K)))
    while slope_sign(hi) <= 0.0:
        hi *= 2.0
    s_K = float(brentq(slope_sign, 0.0, hi, xtol=1e-14, rtol=_RTOL, maxiter=500))
    value = float(phi_K(s_K, K))
    logger.debug("special.phi_K_min", extra={"K": K, "s_K": s_K, "value": value})
    return s_K, value


def h_sigma(s, K: float, sigma: int):
    """sigma / phi_K(s^sigma); |h_sigma| <= 1 / theta(K)."""
    if sigma not in (-1, 1):
        raise ParameterRangeError(f"sigma must be -1 or +1, got {sigma!r}", fields=["sigma"])
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        t = s if sigma == 1 else 1.0 / s
    out = sigma / np.asarray(phi_K(t, K))
    return float(out) if out.ndim == 0 else out


def log_family(p0: float, a: float, K: float, sigma: int, *, var: str = "u") -> ScalarNonlin:
    """g(s) = s^((p0 + 1) / 2) log^a(K + s^sigma)."""
    if sigma not in (-1, 1):
        raise ParameterRangeError(f"sigma must be -1 or +1, got {sigma!r}", fields=["sigma"])
    if not (math.isfinite(K) and K > 0.0):
        raise ParameterRangeError(f"K must be > 0, got {K!r}", fields=["K"])
    b = (p0 + 1.0) / 2.0
    expr = make_product([power(Var(var), b), LogShift(var, float(K), sigma, float(a))])
    return ScalarNonlin.from_expr(expr, var=var)


def log_family_log_derivative(s, p0: float, a: float, K: float, sigma: int):
    """s g'(s) / g(s) = b + a h_sigma(s)."""
    return (p0 + 1.0) / 2.0 + a * np.asarray(h_sigma(s, K, sigma))


@dataclass(frozen=True, slots=True)
class LogConvexity:
    increasing: bool
    convex: bool
    min_first: float
    min_second: float


def check_log_convexity(g: ScalarNonlin, grid, *, tol: float = 1e-9) -> LogConvexity:
    """g' > 0 and g'' >= -tol * scale on `grid` (both from the symbolic derivatives)."""
    grid = np.asarray(grid, dtype=float)
    d1 = g.derivative()
    d2 = d1.derivative()
    first = d1.raw(grid)
    second = d2.raw(grid)
    scale = np.maximum(1.0, np.abs(first) / np.maximum(grid, 1e-300))
    ok1 = np.isfinite(first)
    ok2 = np.isfinite(second)
    return LogConvexity(
        increasing=bool(np.all(first[ok1] > 0.0)),
        convex=bool(np.all(second[ok2] >= -tol * scale[ok2])),
        min_first=float(np.min(first[ok1])) if ok1.any() else math.nan,
        min_second=float(np.min(second[ok2])) if ok2.any() else math.nan,
    )
