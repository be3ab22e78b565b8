"""
Lane-Emden h-calculus for -Delta u = f1(v), -Delta v = f2(u).

    h_i(s) = s f_i(s),  phi(t) = t / (h1^-1(t) h2^-1(t)),  N(t1, t2) = 2A + h1(t2) + h2(t1)

The universal estimates bound f2(u) / (h1^-1 o h2)(u) and f1(v) / (h2^-1 o h1)(v); for
f1 = v^p log^a(K+v), f2 = u^q log^b(K+u) these behave like u^((pq-1)/(p+1)) log^k u and
v^((pq-1)/(q+1)) log^l v with k = (bp+a)/(p+1), l = (aq+b)/(q+1).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ellab.config import get_settings
from ellab.exceptions import OnsetNotFoundError, ParameterRangeError
from ellab.nonlin.regvar import local_index
from ellab.nonlin.scalar import ScalarNonlin
from ellab.utils.scans import ScanConfig, log_grid
from ellab.validators.numeric_validators import require_positive

logger = logging.getLogger(__name__)

BISECT_ITER = 200
LOG_XTOL = 1e-15
# phi counts as increasing when each grid step gains at least this fraction
PHI_MARGIN = 1e-9
# minimal number of monotone table points past the onset
MIN_TAIL = 8


def _h(f: ScalarNonlin, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return s * np.asarray(f(s), dtype=float)


def _invert(f: ScalarNonlin, table_s: np.ndarray, table_h: np.ndarray, t) -> np.ndarray:
    """
    h^-1(t) on [table_h[0], table_h[-1]]: table bracket, then bisection in log s.

    NaN outside the tabulated range.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.full(t.shape, np.nan)
    inside = (t >= table_h[0]) & (t <= table_h[-1])
    if not inside.any():
        return out
    target = t[inside]
    idx = np.clip(np.searchsorted(table_h, target), 1, table_h.size - 1)
    lo = np.log(table_s[idx - 1])
    hi = np.log(table_s[idx])
    for _ in range(BISECT_ITER):
        mid = 0.5 * (lo + hi)
        up = _h(f, np.exp(mid)) < target
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
        if np.all(hi - lo <= LOG_XTOL * np.maximum(1.0, np.abs(hi))):
            break
    out[inside] = np.exp(0.5 * (lo + hi))
    return out


def _unwrap(values: np.ndarray, like):
    return float(values[0]) if np.ndim(like) == 0 else values


@dataclass(frozen=True)
class HCalculus:
    """
    Attributes:
        s0: onset beyond which h1 and h2 are positive and strictly increasing on the table.
        A: the constant of the phi-monotonicity lemma (least certified grid value).
        A1, A2: inf over s >= 0 of h1, h2 (on the table, 0 included).
        s_max: top of the table; inverses are defined on [h_i(s0), h_i(s_max)].
    """

    f1: ScalarNonlin
    f2: ScalarNonlin
    s0: float
    A: float
    A1: float
    A2: float
    s_max: float
    table_s: np.ndarray = field(repr=False)
    table_h1: np.ndarray = field(repr=False)
    table_h2: np.ndarray = field(repr=False)

    def h1(self, s):
        return _unwrap(np.atleast_1d(_h(self.f1, s)), s)

    def h2(self, s):
        return _unwrap(np.atleast_1d(_h(self.f2, s)), s)

    def h1_inv(self, t):
        return _unwrap(_invert(self.f1, self.table_s, self.table_h1, t), t)

    def h2_inv(self, t):
        return _unwrap(_invert(self.f2, self.table_s, self.table_h2, t), t)

    def h1_inv_h2(self, u):
        """(h1^-1 o h2)(u)."""
        return _unwrap(_invert(self.f1, self.table_s, self.table_h1, _h(self.f2, u)), u)

    def h2_inv_h1(self, v):
        return _unwrap(_invert(self.f2, self.table_s, self.table_h2, _h(self.f1, v)), v)

    def phi(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        values = t_arr / (
            _invert(self.f1, self.table_s, self.table_h1, t_arr) * _invert(self.f2, self.table_s, self.table_h2, t_arr)
        )
        return _unwrap(values, t)

    def N(self, t1, t2):
        return 2.0 * self.A + self.h1(t2) + self.h2(t1)

    def bound_quantity_u(self, u):
        """f2(u) / (h1^-1 o h2)(u), NaN below s0 or outside the table."""
        u_arr = np.atleast_1d(np.asarray(u, dtype=float))
        values = np.asarray(self.f2(u_arr), dtype=float) / np.atleast_1d(self.h1_inv_h2(u_arr))
        return _unwrap(np.where(u_arr >= self.s0, values, np.nan), u)

    def bound_quantity_v(self, v):
        v_arr = np.atleast_1d(np.asarray(v, dtype=float))
        values = np.asarray(self.f1(v_arr), dtype=float) / np.atleast_1d(self.h2_inv_h1(v_arr))
        return _unwrap(np.where(v_arr >= self.s0, values, np.nan), v)

    def to_dict(self) -> dict:
        return {
            "f1": self.f1.text,
            "f2": self.f2.text,
            "s0": self.s0,
            "A": self.A,
            "A1": self.A1,
            "A2": self.A2,
            "s_max": self.s_max,
        }


def h_calculus(
    f1: ScalarNonlin,
    f2: ScalarNonlin,
    scan: ScanConfig | None = None,
    s_max: float | None = None,
) -> HCalculus:
    """
    Tabulate h1, h2 on the log grid [scan.lo, s_max] and locate s0 and A.

    Raises:
        OnsetNotFoundError: h1, h2 do not become positive and increasing on the table, or phi never
            becomes increasing past 2 max(s0, -A1, -A2).
    """
    scan = scan or ScanConfig.from_settings()
    s_max = float(require_positive(s_max if s_max is not None else get_settings().HCALC_SMAX, "s_max"))
    if s_max <= scan.lo:
        raise ParameterRangeError(f"s_max must exceed the scan floor {scan.lo:g}", fields=["s_max"])

    # 1) Onset of positivity and strict monotonicity
    grid = log_grid(scan.lo, s_max, scan.per_decade)
    h1 = _h(f1, grid)
    h2 = _h(f2, grid)
    ok = (np.diff(h1) > 0.0) & (np.diff(h2) > 0.0) & (h1[:-1] > 0.0) & (h2[:-1] > 0.0)
    bad = np.flatnonzero(~ok)
    start = int(bad[-1]) + 1 if bad.size else 0
    if grid.size - start < MIN_TAIL:
        raise OnsetNotFoundError(
            f"h1 = s f1, h2 = s f2 are not positive and increasing near the top of [{scan.lo:g}, {s_max:g}]"
        )
    s0 = float(grid[start])
    A1 = min(0.0, float(np.min(h1)))
    A2 = min(0.0, float(np.min(h2)))
    table_s = grid[start:]
    table_h1 = h1[start:]
    table_h2 = h2[start:]

    # 2) A: least grid t > 2 max(s0, -A1, -A2) past which phi increases
    t_lo = max(float(table_h1[0]), float(table_h2[0]))
    t_hi = min(float(table_h1[-1]), float(table_h2[-1]))
    if not t_lo < t_hi:
        raise OnsetNotFoundError("the ranges of h1 and h2 above s0 do not overlap on the table")
    floor = 2.0 * max(s0, -A1, -A2)
    t_grid = np.clip(log_grid(t_lo, t_hi, scan.per_decade), t_lo, t_hi)
    partial = HCalculus(f1, f2, s0, math.nan, A1, A2, s_max, table_s, table_h1, table_h2)
    phi = np.asarray(partial.phi(t_grid), dtype=float)
    increasing = np.diff(phi) > PHI_MARGIN * np.abs(phi[:-1])
    failing = np.flatnonzero(~increasing)
    first_ok = int(failing[-1]) + 1 if failing.size else 0
    candidates = np.flatnonzero((t_grid > floor) & (np.arange(t_grid.size) >= first_ok))
    if candidates.size == 0 or candidates[0] >= t_grid.size - 1:
        raise OnsetNotFoundError(f"phi is not increasing above t = {floor:g} on the table")
    A = float(t_grid[candidates[0]])

    calc = HCalculus(f1, f2, s0, A, A1, A2, s_max, table_s, table_h1, table_h2)
    logger.debug("bounds.h_calculus", extra=calc.to_dict())
    return calc


# =====================================================================================================================
# Exponents
# =====================================================================================================================


@dataclass(frozen=True, slots=True)
class LogBoundExponents:
    """Power and log exponents of the two bound quantities."""

    alpha: float
    beta: float
    k: float
    l: float

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "k": self.k, "l": self.l}


def log_bound_exponents(p: float, q: float, a: float = 0.0, b: float = 0.0) -> LogBoundExponents:
    """alpha = (pq-1)/(p+1), beta = (pq-1)/(q+1), k = (bp+a)/(p+1), l = (aq+b)/(q+1)."""
    require_positive(p, "p")
    require_positive(q, "q")
    return LogBoundExponents(
        alpha=(p * q - 1.0) / (p + 1.0),
        beta=(p * q - 1.0) / (q + 1.0),
        k=(b * p + a) / (p + 1.0),
        l=(a * q + b) / (q + 1.0),
    )


@dataclass(frozen=True, slots=True)
class BoundSlopes:
    """
    Regression slopes of the two bound quantities.

    power_slope_*: slope of log Q against log s.
    log_slope_*: slope of log Q - (predicted power) log s against log log s.
    """

    predicted: LogBoundExponents
    power_slope_u: float
    log_slope_u: float
    power_slope_v: float
    log_slope_v: float
    points_u: int
    points_v: int

    def to_dict(self) -> dict:
        return {
            "predicted": self.predicted.to_dict(),
            "power_slope_u": self.power_slope_u,
            "log_slope_u": self.log_slope_u,
            "power_slope_v": self.power_slope_v,
            "log_slope_v": self.log_slope_v,
            "points_u": self.points_u,
            "points_v": self.points_v,
        }


def _slopes(s: np.ndarray, Q: np.ndarray, power: float) -> tuple[float, float, int]:
    keep = np.isfinite(Q) & (Q > 0.0) & (s > math.e)
    if keep.sum() < 3:
        return math.nan, math.nan, int(keep.sum())
    x = np.log(s[keep])
    y = np.log(Q[keep])
    ones = np.ones_like(x)
    (_, power_slope), *_ = np.linalg.lstsq(np.column_stack([ones, x]), y, rcond=None)
    (_, log_slope), *_ = np.linalg.lstsq(np.column_stack([ones, np.log(x)]), y - power * x, rcond=None)
    return float(power_slope), float(log_slope), int(keep.sum())


def lane_emden_bound_slopes(hcal: HCalculus, s_grid, v_grid=None) -> BoundSlopes:
    """
    Fit the bound quantities on the given grids (points below s0, at or below e, or outside the
    inverse tables are dropped).

    The indices (p, a), (q, b) of f1, f2 at infinity come from `local_index`.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    v_grid = s_grid if v_grid is None else np.asarray(v_grid, dtype=float)
    p, a = local_index(hcal.f1, "inf")
    q, b = local_index(hcal.f2, "inf")
    predicted = log_bound_exponents(p, q, a, b)
    pu, lu, nu = _slopes(s_grid, np.atleast_1d(hcal.bound_quantity_u(s_grid)), predicted.alpha)
    pv, lv, nv = _slopes(v_grid, np.atleast_1d(hcal.bound_quantity_v(v_grid)), predicted.beta)
    slopes = BoundSlopes(predicted, pu, lu, pv, lv, nu, nv)
    logger.debug("bounds.lane_emden_slopes", extra=slopes.to_dict())
    return slopes
