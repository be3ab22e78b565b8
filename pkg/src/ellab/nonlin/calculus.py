"""
Derivatives and weighted primitives of scalar nonlinearities.

`weighted_primitive(f, w, s)` computes F_w(s) = int_0^s sigma^w f(sigma) d sigma:

  - sums of monomials are integrated in closed form;
  - anything else is split at a small eps into an analytic head eps^(w+1) f(eps) / (w + q0 + 1)
    (q0 = local index of f at 0) and a body integrated by `scipy.integrate.quad` in t = log sigma,
    with the min/max kinks passed as break points.

`weighted_primitive_grid` returns F_w on a whole increasing grid: one anchor value from
`weighted_primitive`, then cumulative 10-point Gauss-Legendre increments on log pieces.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_legendre

from ellab.exceptions import IntegralDivergenceError, ParameterRangeError

from .expr import monomial_terms
from .regvar import local_index
from .scalar import ScalarNonlin

logger = logging.getLogger(__name__)

# integrability margin on w + q0 + 1
RATE_TOL = 1e-12
# head cut-off: (eps / s)^rate = exp(-HEAD_DECAY), i.e. the head is ~1e-12 of the scale at s
HEAD_DECAY = 27.6
EPS_FLOOR = 1e-280
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 1000
# grid version
GAUSS_POINTS = 10
MAX_LOG_WIDTH = 0.05

_GL_NODES, _GL_WEIGHTS = roots_legendre(GAUSS_POINTS)


def deriv(f: ScalarNonlin) -> ScalarNonlin:
    """Symbolic derivative; kink locations are carried over as metadata."""
    return f.derivative()


def one_sided_derivative(f: ScalarNonlin, s: float, side: int) -> float:
    if side not in (-1, 1):
        raise ParameterRangeError(f"side must be -1 or +1, got {side!r}", fields=["side"])
    return float(f.one_sided_derivative(s, side))


def kinks(f: ScalarNonlin, lo: float = 1e-12, hi: float = 1e12) -> list[float]:
    return f.kinks(lo, hi)


# =====================================================================================================================
# Weighted primitives
# =====================================================================================================================


def _closed_form(terms: list[tuple[float, float]], w: float, s: np.ndarray) -> np.ndarray:
    total = np.zeros_like(s, dtype=float)
    for c, p in terms:
        if c == 0.0:
            continue
        rate = w + p + 1.0
        if rate <= 0.0:
            raise IntegralDivergenceError(
                f"int_0^s sigma^{w:g} * sigma^{p:g} diverges at 0", local_index=p
            )
        total = total + c * np.power(s, rate) / rate
    return total


def _integrability_rate(f: ScalarNonlin, w: float) -> tuple[float, float]:
    q0, _ = local_index(f, "zero")
    rate = w + q0 + 1.0
    if rate <= RATE_TOL:
        raise IntegralDivergenceError(
            f"int_0^s sigma^{w:g} f(sigma) diverges at 0 (local index {q0:g})", local_index=q0
        )
    return q0, rate


def _head_cut(s: float, rate: float) -> float:
    return min(s, max(s * math.exp(-HEAD_DECAY / rate), EPS_FLOOR))


def weighted_primitive(f: ScalarNonlin, w: float, s: float) -> float:
    """
    int_0^s sigma^w f(sigma) d sigma.

    Raises:
        IntegralDivergenceError: w + (local index of f at 0) + 1 <= 0; `.value` is +inf.
        ParameterRangeError: s <= 0 or not finite.
    """
    if not (math.isfinite(s) and s > 0.0):
        raise ParameterRangeError(f"upper limit must be finite and > 0, got {s!r}", fields=["s"])
    terms = monomial_terms(f.expr)
    if terms is not None:
        return float(_closed_form(terms, w, np.array(s)))

    _, rate = _integrability_rate(f, w)
    eps = _head_cut(s, rate)
    head = eps ** (w + 1.0) * float(f.raw(np.array(eps))) / rate
    if eps >= s:
        return head

    def integrand(t: float) -> float:
        sigma = math.exp(t)
        return math.exp((w + 1.0) * t) * float(f.raw(np.array(sigma)))

    lo, hi = math.log(eps), math.log(s)
    points = [math.log(k) for k in f.kinks(eps, s) if eps < k < s]
    body, abserr = quad(
        integrand,
        lo,
        hi,
        points=points or None,
        epsabs=0.0,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
    )
    logger.debug(
        "primitive.quad",
        extra={"expr": f.text, "w": w, "s": s, "eps": eps, "head": head, "body": body, "abserr": abserr},
    )
    return head + body


def primitive(f: ScalarNonlin, s: float) -> float:
    """F(s) = int_0^s f."""
    return weighted_primitive(f, 0.0, s)


def _log_pieces(log_grid: np.ndarray, log_kinks: list[float]) -> tuple[np.ndarray, np.ndarray]:
    """Break points covering [log_grid[0], log_grid[-1]] with width <= MAX_LOG_WIDTH and the index of each grid node."""
    anchors = np.unique(np.concatenate([log_grid, np.asarray(log_kinks, dtype=float)]))
    pieces = [anchors[:1]]
    for a, b in zip(anchors[:-1], anchors[1:]):
        count = max(1, int(math.ceil((b - a) / MAX_LOG_WIDTH)))
        pieces.append(np.linspace(a, b, count + 1)[1:])
    edges = np.concatenate(pieces)
    where = np.searchsorted(edges, log_grid)
    return edges, where


def weighted_primitive_grid(f: ScalarNonlin, w: float, grid) -> np.ndarray:
    """F_w at every point of a strictly increasing positive grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterRangeError("grid must be a non-empty 1-D array", fields=["grid"])
    if np.any(grid <= 0.0) or not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0.0):
        raise ParameterRangeError("grid must be finite, positive and strictly increasing", fields=["grid"])

    terms = monomial_terms(f.expr)
    if terms is not None:
        return _closed_form(terms, w, grid)

    anchor = weighted_primitive(f, w, float(grid[0]))
    if grid.size == 1:
        return np.array([anchor])

    log_grid = np.log(grid)
    log_kinks = [math.log(k) for k in f.kinks(float(grid[0]), float(grid[-1])) if grid[0] < k < grid[-1]]
    edges, where = _log_pieces(log_grid, log_kinks)

    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    t = 0.5 * (a + b) + half * _GL_NODES[None, :]
    with np.errstate(all="ignore"):
        values = np.exp((w + 1.0) * t) * f.raw(np.exp(t))
    increments = (half[:, 0]) * (values @ _GL_WEIGHTS)
    cumulative = np.concatenate([[0.0], np.cumsum(increments)])
    return anchor + cumulative[where]
