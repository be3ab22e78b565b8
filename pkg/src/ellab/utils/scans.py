"""
Log-spaced grid scans with local refinement.

Every sup/inf condition in the criteria module is a ratio of regularly varying functions, so it
is sampled on a geometric grid and the grid extremum is polished by a bounded scalar minimization
in log s (scipy's bounded Brent / golden-section search) on the two neighbouring cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from ellab.config import Settings, get_settings

# points closer than this (relative) to a kink are dropped from scans
KINK_RTOL = 1e-9


@dataclass(frozen=True, slots=True)
class ScanConfig:
    """Geometric scan range [lo, hi], density and the tolerance under which a margin counts as zero."""

    lo: float = 1e-6
    hi: float = 1e6
    per_decade: int = 64
    tol: float = 1e-9

    @classmethod
    def from_settings(cls, settings: Settings | None = None) -> "ScanConfig":
        settings = settings or get_settings()
        return cls(
            lo=settings.SCAN_MIN,
            hi=settings.SCAN_MAX,
            per_decade=settings.SCAN_POINTS_PER_DECADE,
            tol=settings.SCAN_TOL,
        )

    def grid(self) -> np.ndarray:
        return log_grid(self.lo, self.hi, self.per_decade)

    def describe(self) -> dict[str, float]:
        return {"lo": self.lo, "hi": self.hi, "per_decade": self.per_decade, "tol": self.tol}


@dataclass(frozen=True, slots=True)
class Extremum:
    value: float
    at: float
    index: int
    at_boundary: bool
    refined: bool


def log_grid(lo: float, hi: float, per_decade: int) -> np.ndarray:
    """Geometric grid on [lo, hi] with `per_decade` points per factor of ten (endpoints included)."""
    if not (0.0 < lo < hi):
        raise ValueError(f"log_grid needs 0 < lo < hi, got lo={lo}, hi={hi}")
    num = max(2, int(math.ceil(math.log10(hi / lo) * per_decade)) + 1)
    return np.geomspace(lo, hi, num)


def drop_near(grid: np.ndarray, points: Iterable[float], rtol: float = KINK_RTOL) -> np.ndarray:
    keep = np.ones(grid.shape, dtype=bool)
    for point in points:
        keep &= np.abs(grid - point) > rtol * max(abs(point), 1e-300)
    return grid[keep]


def scan_extremum(
    func: Callable[[np.ndarray], np.ndarray],
    grid: np.ndarray,
    *,
    maximize: bool = True,
    exclude: Iterable[float] = (),
    refine: bool = True,
    values: np.ndarray | None = None,
) -> Extremum:
    """
    Locate the sup (or inf) of `func` on `grid`, then refine it between the neighbouring nodes.

    Non-finite samples are ignored. `exclude` lists kink locations: refinement never crosses them.
    """
    vals = np.asarray(func(grid) if values is None else values, dtype=float)
    sign = 1.0 if maximize else -1.0
    score = np.where(np.isfinite(vals), sign * vals, -np.inf)
    i = int(np.argmax(score))
    best_x, best_v = float(grid[i]), float(vals[i])
    at_boundary = i == 0 or i == len(grid) - 1
    if not refine or len(grid) < 3 or not math.isfinite(best_v):
        return Extremum(best_v, best_x, i, at_boundary, False)

    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, len(grid) - 1)])
    for kink in exclude:
        if lo < kink < hi:
            margin = KINK_RTOL * kink * 10
            if kink <= best_x:
                lo = kink + margin
            else:
                hi = kink - margin
    if not lo < hi:
        return Extremum(best_v, best_x, i, at_boundary, False)

    def objective(t: float) -> float:
        v = float(np.asarray(func(np.array([math.exp(t)])))[0])
        return -sign * v if math.isfinite(v) else math.inf

    res = minimize_scalar(
        objective,
        bounds=(math.log(lo), math.log(hi)),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if res.success and math.isfinite(res.fun) and -res.fun * sign > best_v * sign:
        return Extremum(float(-res.fun * sign), float(math.exp(res.x)), i, at_boundary, True)
    return Extremum(best_v, best_x, i, at_boundary, False)


def total_variation(values: np.ndarray) -> float:
    vals = np.asarray(values, dtype=float)
    vals = vals[np.isfinite(vals)]
    return float(np.sum(np.abs(np.diff(vals)))) if vals.size > 1 else 0.0


def end_slope(grid: np.ndarray, values: np.ndarray, end: str, decades: float = 2.0) -> float:
    """Least-squares slope of log|values| against log grid over the last `decades` decades at `end`."""
    x = np.log(np.asarray(grid, dtype=float))
    y = np.log(np.abs(np.asarray(values, dtype=float)))
    span = decades * math.log(10.0)
    mask = x <= x[0] + span if end == "zero" else x >= x[-1] - span
    mask &= np.isfinite(y)
    if mask.sum() < 2:
        return math.nan
    slope, _ = np.polyfit(x[mask], y[mask], 1)
    return float(slope)
