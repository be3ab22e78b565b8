"""
Explicit unbounded semitrivial solutions (w, 0) of the proportional system with phi = 1,
k(s) = s^p, g(s) = s^q:

    -w'' = -lam w^(p+q),  0 = 0.

    p + q < 1:  w(x) = c |x|^a,  a = 2 / (1 - p - q),  c^(1-p-q) = lam / (a (a - 1))
    p + q = 1:  w(x) = cosh(sqrt(lam) x) (whole line) or sinh(sqrt(lam) x) (half line, w(0) = 0)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ellab.criteria.exponents import Geometry
from ellab.exceptions import ParameterRangeError
from ellab.nonlin.presets import proportional_counterexample_system
from ellab.validators.numeric_validators import require_int_at_least, require_positive

logger = logging.getLogger(__name__)

# p + q within this of 1 uses the exponential profiles
SUM_ATOL = 1e-12
DEFAULT_XMAX = 2.0
DEFAULT_POINTS = 401


@dataclass(frozen=True)
class Counterexample:
    """
    residual: max over the grid of |w'' - lam w^(p+q)| and |f2(w, 0)|, relative to max(1, |w''|).
    boundary_value: w(0) (zero in the half-space case).
    """

    kind: str
    p: float
    q: float
    lam: float
    geometry: Geometry
    a: float | None
    c: float | None
    x: np.ndarray
    w: np.ndarray
    residual: float
    boundary_value: float | None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "q": self.q,
            "lam": self.lam,
            "geometry": self.geometry.value,
            "a": self.a,
            "c": self.c,
            "residual": self.residual,
            "boundary_value": self.boundary_value,
            "x_range": [float(self.x[0]), float(self.x[-1])],
        }

    def to_rows(self) -> tuple[list[str], list[tuple[float, float]]]:
        return ["x", "w"], [(float(x), float(w)) for x, w in zip(self.x, self.w)]


def proportional_counterexample(
    p: float,
    q: float,
    lam: float,
    geometry: Geometry | str = Geometry.WHOLE,
    *,
    x_max: float = DEFAULT_XMAX,
    points: int = DEFAULT_POINTS,
) -> Counterexample:
    """
    Build w and check the (w, 0) pair against the system nonlinearity on a grid.

    Raises:
        ParameterRangeError: outside q >= p > 0, p + q <= 1, lam > 0.
    """
    geometry = Geometry(geometry)
    p, q = float(require_positive(p, "p")), float(require_positive(q, "q"))
    lam = float(require_positive(lam, "lam"))
    x_max = float(require_positive(x_max, "x_max"))
    points = require_int_at_least(points, 3, "points")
    if q < p:
        raise ParameterRangeError(f"need q >= p, got p={p:g}, q={q:g}", fields=["p", "q"])
    total = p + q
    if total > 1.0 + SUM_ATOL:
        raise ParameterRangeError(f"need p + q <= 1, got {total:g}", fields=["p", "q"])

    lo = 0.0 if geometry == Geometry.HALF else -x_max
    x = np.linspace(lo, x_max, points)

    if abs(total - 1.0) <= SUM_ATOL:
        kind = "sinh" if geometry == Geometry.HALF else "cosh"
        root = math.sqrt(lam)
        if kind == "sinh":
            w, w2 = np.sinh(root * x), lam * np.sinh(root * x)
        else:
            w, w2 = np.cosh(root * x), lam * np.cosh(root * x)
        a = c = None
    else:
        kind = "power"
        a = 2.0 / (1.0 - total)
        c = (lam / (a * (a - 1.0))) ** (1.0 / (1.0 - total))
        ax = np.abs(x)
        w = c * ax**a
        w2 = c * a * (a - 1.0) * ax ** (a - 2.0)

    # residual against the actual system at (w, 0)
    system = proportional_counterexample_system(p, q, lam)
    F = system.evaluate(np.stack([w, np.zeros_like(w)]))
    scale = np.maximum(1.0, np.abs(w2))
    residual = float(max(np.max(np.abs(-w2 - F[0]) / scale), np.max(np.abs(F[1]) / scale)))

    result = Counterexample(
        kind=kind,
        p=p,
        q=q,
        lam=lam,
        geometry=geometry,
        a=a,
        c=c,
        x=x,
        w=w,
        residual=residual,
        boundary_value=float(w[0]) if geometry == Geometry.HALF else None,
    )
    logger.info("bounds.counterexample", extra={"kind": kind, "p": p, "q": q, "lam": lam, "residual": residual})
    return result
