"""
Discrete doubling-point search.

Given points X with boundary distances dist(x) > 0 and values M(x) > 0, and k > 0: starting from
any y0 with M(y0) dist(y0) > 2k, return x with

    (a) M(x) >= M(y0)
    (b) M(x) dist(x) > 2k
    (c) M(z) <= 2 M(x) for every z in X with |z - x| <= k / M(x)

Each jump moves to a violator of (c), so M at least doubles and the iteration stops after at most
log2(max M / min M) + 1 jumps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ellab.exceptions import NonFiniteValueError, ParameterRangeError
from ellab.validators.numeric_validators import require_positive

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscreteField:
    """points: (N, d); dist, M: (N,)."""

    points: np.ndarray
    dist: np.ndarray
    M: np.ndarray

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        dist = np.asarray(self.dist, dtype=float).ravel()
        M = np.asarray(self.M, dtype=float).ravel()
        if points.ndim != 2 or points.shape[0] == 0:
            raise ParameterRangeError("points must be a non-empty (N, d) array", fields=["points"])
        if dist.shape != (points.shape[0],) or M.shape != dist.shape:
            raise ParameterRangeError(
                f"dist and M need one value per point ({points.shape[0]}), got {dist.shape} and {M.shape}",
                fields=["dist", "M"],
            )
        for name, values in (("points", points), ("dist", dist), ("M", M)):
            if not np.all(np.isfinite(values)):
                raise NonFiniteValueError(f"{name} has non-finite entries", fields=[name])
        for name, values in (("dist", dist), ("M", M)):
            if np.any(values <= 0.0):
                raise ParameterRangeError(f"{name} must be > 0 at every point", fields=[name])
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "M", M)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    @classmethod
    def on_ball_grid(cls, func: Callable[[np.ndarray], np.ndarray], spacing: float, dim: int = 2) -> "DiscreteField":
        """
        Cartesian grid of the open unit ball with dist = 1 - |x| and M = func(points).
        """
        spacing = float(require_positive(spacing, "spacing"))
        axis = np.arange(-1.0, 1.0 + 0.5 * spacing, spacing)
        mesh = np.meshgrid(*([axis] * dim), indexing="ij")
        points = np.stack([c.ravel() for c in mesh], axis=1)
        dist = 1.0 - np.linalg.norm(points, axis=1)
        points = points[dist > 0.0]
        return cls(points, 1.0 - np.linalg.norm(points, axis=1), np.asarray(func(points), dtype=float))


@dataclass(frozen=True)
class DoublingCheck:
    a: bool
    b: bool
    c: bool
    neighbours: int
    worst_ratio: float

    @property
    def ok(self) -> bool:
        return self.a and self.b and self.c

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "neighbours": self.neighbours,
            "worst_ratio": self.worst_ratio,
        }


@dataclass(frozen=True)
class DoublingResult:
    """
    found: a point was returned (index, point, M); otherwise `slack` = 2k / dist - M >= 0 at every
    point certifies that no start point exists.
    """

    k: float
    found: bool
    start: int | None
    index: int | None
    point: tuple[float, ...] | None
    M: float | None
    jumps: int
    jump_bound: int
    path: tuple[int, ...] = ()
    check: DoublingCheck | None = None
    slack: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "found": self.found,
            "start": self.start,
            "index": self.index,
            "point": list(self.point) if self.point is not None else None,
            "M": self.M,
            "jumps": self.jumps,
            "jump_bound": self.jump_bound,
            "path": list(self.path),
            "check": self.check.to_dict() if self.check else None,
            "min_slack": float(np.min(self.slack)) if self.slack is not None else None,
        }


def _jump_bound(F: DiscreteField) -> int:
    return int(math.floor(math.log2(float(F.M.max() / F.M.min())))) + 1


def _neighbourhood(F: DiscreteField, index: int, k: float) -> np.ndarray:
    radius = k / F.M[index]
    return np.flatnonzero(np.linalg.norm(F.points - F.points[index], axis=1) <= radius)


def verify_doubling(F: DiscreteField, k: float, index: int, start: int | None = None) -> DoublingCheck:
    """Evaluate (a)-(c) at points[index] by enumeration over the whole field."""
    k = float(require_positive(k, "k"))
    if not 0 <= index < F.size:
        raise ParameterRangeError(f"index {index} outside the field (size {F.size})", fields=["index"])
    M_x = float(F.M[index])
    a = start is None or M_x >= float(F.M[start])
    b = M_x * float(F.dist[index]) > 2.0 * k
    near = _neighbourhood(F, index, k)
    worst = float(F.M[near].max() / M_x)
    return DoublingCheck(a=bool(a), b=bool(b), c=bool(worst <= 2.0), neighbours=int(near.size), worst_ratio=worst)


def doubling_point(F: DiscreteField, k: float) -> DoublingResult:
    """
    Jump iteration from the start point maximizing M dist among those with M dist > 2k.

    Each jump goes to the largest-M violator of (c).
    """
    k = float(require_positive(k, "k"))
    bound = _jump_bound(F)
    slack = 2.0 * k / F.dist - F.M
    violators = np.flatnonzero(slack < 0.0)
    if violators.size == 0:
        logger.info("doubling.none", extra={"k": k, "points": F.size, "min_slack": float(slack.min())})
        return DoublingResult(k, False, None, None, None, None, 0, bound, slack=slack)

    start = int(violators[np.argmax(F.M[violators] * F.dist[violators])])
    x = start
    path = [x]
    while True:
        near = _neighbourhood(F, x, k)
        over = near[F.M[near] > 2.0 * F.M[x]]
        if over.size == 0:
            break
        x = int(over[np.argmax(F.M[over])])
        path.append(x)
        if len(path) - 1 > bound:
            # unreachable for positive finite M
            raise RuntimeError("doubling iteration exceeded its jump bound")

    check = verify_doubling(F, k, x, start)
    result = DoublingResult(
        k=k,
        found=True,
        start=start,
        index=x,
        point=tuple(float(c) for c in F.points[x]),
        M=float(F.M[x]),
        jumps=len(path) - 1,
        jump_bound=bound,
        path=tuple(path),
        check=check,
    )
    if not check.ok:
        logger.warning("doubling.check_failed", extra={"k": k, "index": x, **check.to_dict()})
    logger.debug("doubling.point", extra={"k": k, "index": x, "jumps": result.jumps, "M_value": result.M})
    return result
