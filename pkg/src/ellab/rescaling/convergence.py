"""
Uniform convergence of generalized rescalings.

Scalar:  e(lam) = max_{s in [0, S]} |f(lam s) / f(lam) - s^p|
System:  e(lam) = max_{xi in [0, S]^2} max_i |f_i(lam xi) / f+(lam) - f_lim,i(xi)|

with f_lim the normalized homogeneous limit towards the chosen end.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from ellab.exceptions import ParameterRangeError
from ellab.nonlin.regvar import f_plus, regvar_profile
from ellab.nonlin.scalar import ScalarNonlin
from ellab.nonlin.system import SystemNonlin
from ellab.validators.numeric_validators import require_int_at_least, require_positive

logger = logging.getLogger(__name__)

DEFAULT_S = 2.0
DEFAULT_POINTS = 1000
DIRECTIONS = ("inf", "zero")


def _require_direction(direction: str) -> str:
    if direction not in DIRECTIONS:
        raise ParameterRangeError(f"direction must be 'inf' or 'zero', got {direction!r}", fields=["direction"])
    return direction


def _approach_order(lams: Iterable[float], direction: str) -> list[float]:
    values = [float(require_positive(lam, "lam")) for lam in lams]
    if not values:
        raise ParameterRangeError("at least one lambda is needed", fields=["lams"])
    return sorted(values, reverse=direction == "zero")


@dataclass(frozen=True)
class ConvergenceTable:
    """
    errors[i] belongs to lams[i]; lams are ordered towards the limit (increasing towards infinity,
    decreasing towards zero).
    """

    direction: str
    S: float
    p: float | None
    lams: tuple[float, ...]
    errors: tuple[float, ...]
    points: int

    @property
    def nonincreasing(self) -> bool:
        return all(b <= a for a, b in zip(self.errors, self.errors[1:]))

    @property
    def strictly_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.errors, self.errors[1:]))

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "S": self.S,
            "p": self.p,
            "lams": list(self.lams),
            "errors": list(self.errors),
            "points": self.points,
            "nonincreasing": self.nonincreasing,
            "strictly_decreasing": self.strictly_decreasing,
        }

    def to_rows(self) -> tuple[list[str], list[tuple[float, float]]]:
        return ["lam", "error"], list(zip(self.lams, self.errors))


def uniform_convergence_check(
    f: ScalarNonlin | SystemNonlin,
    lams: Iterable[float],
    *,
    direction: str = "inf",
    S: float = DEFAULT_S,
    p: float | None = None,
    limit: Callable[[np.ndarray], np.ndarray] | None = None,
    points: int = DEFAULT_POINTS,
) -> ConvergenceTable:
    """
    Sup-errors of the rescaled nonlinearity against its homogeneous limit.

    Args:
        p: scalar limit exponent (default: the index of f towards `direction`).
        limit: explicit limit profile; for systems it maps xi of shape (m, k) to shape (m, k).
        points: samples of [0, S] (scalar) or total samples of the square [0, S]^2 (systems).
    """
    direction = _require_direction(direction)
    S = float(require_positive(S, "S"))
    points = require_int_at_least(points, 2, "points")
    ordered = _approach_order(lams, direction)

    if isinstance(f, SystemNonlin) and f.scalar is not None:
        f = f.scalar

    errors: list[float] = []
    if isinstance(f, ScalarNonlin):
        s = np.linspace(0.0, S, points)
        if limit is None:
            if p is None:
                p = regvar_profile(f).index(direction)  # type: ignore[arg-type]
            target = s**p
        else:
            target = np.asarray(limit(s), dtype=float)
        for lam in ordered:
            base = float(f.extended(lam))
            if base == 0.0:
                raise ParameterRangeError(f"f vanishes at lambda = {lam:g}", fields=["lams"])
            ratio = np.asarray(f.extended(lam * s), dtype=float) / base
            errors.append(float(np.max(np.abs(ratio - target))))
    else:
        side = max(2, int(math.isqrt(points)))
        axis = np.linspace(0.0, S, side)
        uu, vv = np.meshgrid(axis, axis, indexing="ij")
        xi = np.stack([uu.ravel(), vv.ravel()])
        if limit is None:
            target = regvar_profile(f).evaluate_limit(direction, xi)  # type: ignore[arg-type]
        else:
            target = np.asarray(limit(xi), dtype=float)
        p = None
        for lam in ordered:
            scale = f_plus(f, lam)
            if not scale > 0.0:
                raise ParameterRangeError(f"f+ vanishes at lambda = {lam:g}", fields=["lams"])
            ratio = f.evaluate(lam * xi) / scale
            errors.append(float(np.nanmax(np.abs(ratio - target))))
        points = side * side

    table = ConvergenceTable(
        direction=direction,
        S=S,
        p=p,
        lams=tuple(ordered),
        errors=tuple(errors),
        points=points,
    )
    logger.debug("rescaling.convergence", extra=table.to_dict())
    return table


# =====================================================================================================================
# Power envelope
# =====================================================================================================================


@dataclass(frozen=True)
class PowerEnvelope:
    """
    lam_theta: first grid lambda (in approach order) from which the envelope holds for every later
    grid point; None when it fails at the last one.
    """

    direction: str
    p: float
    theta: float
    lam_theta: float | None
    lams: tuple[float, ...]
    inside: tuple[bool, ...]

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "p": self.p,
            "theta": self.theta,
            "lam_theta": self.lam_theta,
            "lams": list(self.lams),
            "inside": list(self.inside),
        }


def power_envelope(
    f: ScalarNonlin | SystemNonlin,
    p: float,
    theta: float,
    lams: Iterable[float],
    *,
    direction: str = "inf",
) -> PowerEnvelope:
    """
    Where lam^(p-theta) <= f+(lam) <= lam^(p+theta) starts to hold for good (towards infinity);
    towards zero the powers swap, lam^(p+theta) <= f+(lam) <= lam^(p-theta).
    """
    direction = _require_direction(direction)
    theta = float(require_positive(theta, "theta"))
    ordered = _approach_order(lams, direction)
    inside = []
    for lam in ordered:
        value = f_plus(f, lam)
        low, high = lam ** (p - theta), lam ** (p + theta)
        if direction == "zero":
            low, high = high, low
        inside.append(bool(low <= value <= high))
    lam_theta = None
    for i in range(len(ordered) - 1, -1, -1):
        if not inside[i]:
            break
        lam_theta = ordered[i]
    return PowerEnvelope(direction, float(p), theta, lam_theta, tuple(ordered), tuple(inside))
