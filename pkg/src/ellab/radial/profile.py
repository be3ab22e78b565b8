"""
Radial profiles r -> U(r) on [0, R] and their CSV rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from ellab.exceptions import DomainError, NonFiniteValueError, ParameterRangeError

if TYPE_CHECKING:
    from ellab.nonlin.scalar import ScalarNonlin

# |U'(0)| allowed relative to the profile scale
ORIGIN_SLOPE_RTOL = 1e-12

COMPONENT_NAMES = ("u", "v")

# dense evaluator: radii -> (values (m, k), derivatives (m, k))
DenseEval = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class CarriedVolume:
    """
    The volume term int_0^r s^(n-1) (2n F(u) - (n-2) u f(u)) ds integrated alongside the profile.

    Only meaningful for the nonlinearity `source` it was integrated with.
    """

    source: ScalarNonlin
    evaluate: Callable[[np.ndarray], np.ndarray]

    def matches(self, f: ScalarNonlin) -> bool:
        return f is self.source or (f.var == self.source.var and f.expr == self.source.expr)


class Provenance(StrEnum):
    SHOOTING = "shooting"
    CLOSED_FORM = "closed-form"
    FINITE_DIFFERENCE = "finite-difference"


@dataclass(frozen=True)
class RadialProfile:
    """
    Nodal values and radial derivatives of a radial solution.

    Attributes:
        n: space dimension.
        r: strictly increasing radii with r[0] = 0.
        values: shape (m, N).
        derivs: shape (m, N); derivs[:, 0] = 0.
        provenance: where the nodes come from.
        dense: optional high-order evaluator between the nodes (the integrator's dense output or
            the closed form); cubic Hermite interpolation of the nodes is used otherwise.
        volume: optional Pohozaev volume integral carried by the integrator.
    """

    n: int
    r: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    provenance: Provenance
    dense: DenseEval | None = field(default=None, repr=False, compare=False)
    volume: CarriedVolume | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        r = np.asarray(self.r, dtype=float)
        values = np.atleast_2d(np.asarray(self.values, dtype=float))
        derivs = np.atleast_2d(np.asarray(self.derivs, dtype=float))
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "derivs", derivs)

        if r.ndim != 1 or r.size < 2:
            raise ParameterRangeError("a profile needs at least two radii", fields=["r"])
        if values.shape != (values.shape[0], r.size) or derivs.shape != values.shape:
            raise ParameterRangeError(
                f"values {values.shape} and derivs {derivs.shape} do not match {r.size} radii",
                fields=["values", "derivs"],
            )
        if values.shape[0] > len(COMPONENT_NAMES):
            raise ParameterRangeError("at most two components are supported", fields=["values"])
        if r[0] != 0.0 or np.any(np.diff(r) <= 0.0):
            raise DomainError("radii must start at 0 and increase strictly", fields=["r"])
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(values)) and np.all(np.isfinite(derivs))):
            raise NonFiniteValueError("profile contains non-finite entries", fields=["values"])
        scale = 1.0 + float(np.max(np.abs(values)))
        if np.any(np.abs(derivs[:, 0]) > ORIGIN_SLOPE_RTOL * scale):
            raise DomainError("radial derivative at the origin must vanish", fields=["derivs"])

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def radius(self) -> float:
        return float(self.r[-1])

    @property
    def center(self) -> np.ndarray:
        return self.values[:, 0]

    @property
    def names(self) -> tuple[str, ...]:
        return COMPONENT_NAMES[: self.m]

    def sample(self, radii) -> tuple[np.ndarray, np.ndarray]:
        """U and U' at `radii` (within [0, radius]); shapes (m, k)."""
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        if np.any(radii < 0.0) or np.any(radii > self.radius * (1.0 + 1e-12)):
            raise ParameterRangeError(f"radii must lie in [0, {self.radius:g}]", fields=["radii"])
        if self.dense is not None:
            return self.dense(radii)
        values = np.empty((self.m, radii.size))
        derivs = np.empty((self.m, radii.size))
        for i in range(self.m):
            spline = CubicHermiteSpline(self.r, self.values[i], self.derivs[i])
            values[i] = spline(radii)
            derivs[i] = spline(radii, 1)
        return values, derivs

    def truncated(self, R: float) -> "RadialProfile":
        """The profile restricted to [0, R], with R added as the last node."""
        if not (0.0 < R <= self.radius):
            raise ParameterRangeError(f"R must lie in (0, {self.radius:g}], got {R!r}", fields=["R"])
        keep = self.r < R
        end_values, end_derivs = self.sample([R])
        return RadialProfile(
            n=self.n,
            r=np.append(self.r[keep], R),
            values=np.concatenate([self.values[:, keep], end_values], axis=1),
            derivs=np.concatenate([self.derivs[:, keep], end_derivs], axis=1),
            provenance=self.provenance,
            dense=self.dense,
            volume=self.volume,
        )


def profile_to_rows(profile: RadialProfile) -> tuple[list[str], list[tuple[float, ...]]]:
    """Header ``r, u[, v], du[, dv]`` and one row per node."""
    header = ["r", *profile.names, *(f"d{name}" for name in profile.names)]
    table = np.vstack([profile.r[None, :], profile.values, profile.derivs])
    rows = [tuple(float(x) for x in column) for column in table.T]
    return header, rows
