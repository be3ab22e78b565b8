"""
Pohozaev-type functionals.

    psi(s) = s f(s) - (p_S + 1) F(s),  F(s) = int_0^s f

and the radial Rellich-Pohozaev identity on B_R for -d_i Delta u_i = d_i F / d u_i:

    |S^(n-1)| int_0^R r^(n-1) (2n F(U) - (n-2) U . grad F(U)) dr
        = |S^(n-1)| R^n (2 F(U(R)) + sum_i d_i (u_i'(R)^2 + (n-2) R^-1 u_i(R) u_i'(R)))
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import gamma as gamma_fn
from scipy.special import roots_legendre

from ellab.criteria.exponents import sobolev_exponent
from ellab.exceptions import MissingPotentialError, ParameterRangeError
from ellab.nonlin.calculus import primitive, weighted_primitive_grid
from ellab.nonlin.scalar import ScalarNonlin
from ellab.nonlin.system import SystemKind, SystemNonlin
from ellab.utils.scans import ScanConfig
from ellab.validators.numeric_validators import require_int_at_least, require_positive

from .profile import RadialProfile

logger = logging.getLogger(__name__)

GAUSS_POINTS = 10
DEFAULT_PIECES = 256
RESIDUAL_FLOOR = 1e-30

_GL_NODES, _GL_WEIGHTS = roots_legendre(GAUSS_POINTS)


def surface_area(n: int) -> float:
    """|S^(n-1)| = 2 pi^(n/2) / Gamma(n/2)."""
    n = require_int_at_least(n, 1, "n")
    return float(2.0 * math.pi ** (n / 2.0) / gamma_fn(n / 2.0))


# =====================================================================================================================
# psi
# =====================================================================================================================


def _primitive_values(f: ScalarNonlin, u: np.ndarray) -> np.ndarray:
    """F(u+) for an arbitrary array, through one sorted primitive sweep."""
    u = np.maximum(np.asarray(u, dtype=float), 0.0)
    flat = u.ravel()
    out = np.zeros_like(flat)
    positive = flat > 0.0
    if positive.any():
        unique, inverse = np.unique(flat[positive], return_inverse=True)
        out[positive] = weighted_primitive_grid(f, 0.0, unique)[inverse]
    return out.reshape(u.shape)


def pohozaev_psi(f: ScalarNonlin, n: int, s):
    """psi(s) = s f(s) - (p_S + 1) F(s); scalar in, scalar out (n >= 3)."""
    pS = sobolev_exponent(require_int_at_least(n, 3, "n"))
    arr = np.asarray(s, dtype=float)
    if np.any(arr <= 0.0):
        raise ParameterRangeError("psi is evaluated at s > 0", fields=["s"])
    if arr.ndim == 0:
        return float(arr * f(float(arr)) - (pS + 1.0) * primitive(f, float(arr)))
    return arr * np.asarray(f(arr)) - (pS + 1.0) * _primitive_values(f, arr)


@dataclass(frozen=True, slots=True)
class PsiRange:
    """
    s0: largest s with psi >= 0 on (0, s] (None when psi < 0 already at the bottom of the scan).
    at_boundary: psi stays nonnegative up to the top of the scan range.
    """

    s0: float | None
    at_boundary: bool
    scan_lo: float
    scan_hi: float
    min_relative: float

    def to_dict(self) -> dict:
        return {
            "s0": self.s0,
            "at_boundary": self.at_boundary,
            "scan_lo": self.scan_lo,
            "scan_hi": self.scan_hi,
            "min_relative": self.min_relative,
        }


def psi_positive_range(f: ScalarNonlin, n: int, scan: ScanConfig | None = None) -> PsiRange:
    """
    Scan psi(s) / (s f(s)) on the log grid and bisect the first sign change.

    Values above -scan.tol count as nonnegative, so psi = 0 (f = u^p_S) reaches the boundary.
    """
    scan = scan or ScanConfig.from_settings()
    grid = scan.grid()
    sf = grid * np.asarray(f(grid), dtype=float)
    with np.errstate(all="ignore"):
        rel = np.asarray(pohozaev_psi(f, n, grid)) / np.abs(sf)
    rel = np.where(np.isfinite(rel), rel, 0.0)
    negative = rel < -scan.tol
    if not negative.any():
        return PsiRange(float(grid[-1]), True, float(grid[0]), float(grid[-1]), float(rel.min()))
    first = int(np.argmax(negative))
    if first == 0:
        return PsiRange(None, False, float(grid[0]), float(grid[-1]), float(rel.min()))

    def gap(s: float) -> float:
        return pohozaev_psi(f, n, s) / abs(s * float(f(s))) + scan.tol

    s0 = float(brentq(gap, float(grid[first - 1]), float(grid[first]), xtol=1e-300, rtol=1e-12, maxiter=200))
    logger.debug("radial.psi_range", extra={"expr": f.text, "n": n, "s0": s0})
    return PsiRange(s0, False, float(grid[0]), float(grid[-1]), float(rel.min()))


# =====================================================================================================================
# Rellich-Pohozaev identity
# =====================================================================================================================


@dataclass(frozen=True, slots=True)
class IdentityResidual:
    """pieces is 0 when the volume term was carried by the integrator."""

    lhs: float
    rhs: float
    residual: float
    R: float
    pieces: int

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "residual": self.residual, "R": self.R, "pieces": self.pieces}


def _carried_volume(profile: RadialProfile, S: ScalarNonlin | SystemNonlin):
    """The profile's own volume integral when it was integrated with this same scalar f, else None."""
    if profile.volume is None:
        return None
    f = S if isinstance(S, ScalarNonlin) else (S.scalar if S.kind == SystemKind.SCALAR else None)
    if f is None or not profile.volume.matches(f):
        return None
    return profile.volume.evaluate


def _potential_parts(S: ScalarNonlin | SystemNonlin):
    """(F(U), U . grad F(U)) evaluators and the diffusion coefficients."""
    if isinstance(S, ScalarNonlin):
        S = SystemNonlin.from_scalar(S)
    if S.kind == SystemKind.SCALAR and S.scalar is not None:
        f = S.scalar

        def potential(U: np.ndarray) -> np.ndarray:
            return _primitive_values(f, U[0])

        def virial(U: np.ndarray) -> np.ndarray:
            u = np.maximum(U[0], 0.0)
            return u * np.asarray(f.extended(u), dtype=float)

        return potential, virial, np.asarray(S.diffusion)

    if S.kind != SystemKind.GRADIENT or S.potential is None:
        raise MissingPotentialError(f"{S.describe()} is not a gradient system")
    system = S
    zero = float(np.asarray(system.potential_values(np.zeros((system.m, 1))))[0])

    def potential(U: np.ndarray) -> np.ndarray:
        return np.asarray(system.potential_values(np.maximum(U, 0.0)), dtype=float) - zero

    def virial(U: np.ndarray) -> np.ndarray:
        Up = np.maximum(U, 0.0)
        return np.sum(Up * system.extended(Up), axis=0)

    return potential, virial, np.asarray(system.diffusion)


def rellich_pohozaev_residual(
    profile: RadialProfile,
    S: ScalarNonlin | SystemNonlin,
    R: float | None = None,
    *,
    pieces: int = DEFAULT_PIECES,
) -> IdentityResidual:
    """
    Both sides of the radial identity on B_R and |LHS - RHS| / max(|LHS|, |RHS|, 1e-30).

    A shot carries the volume integral as an ODE state, so its error follows the shot's tolerance;
    that value is used when the profile was shot with the same f. Otherwise the volume integral
    uses `pieces` uniform cells on [0, R] with 10-point Gauss-Legendre each, U between the nodes
    coming from the profile's dense evaluator (or Hermite interpolation).

    Raises:
        MissingPotentialError: S is a system without a potential.
    """
    R = float(require_positive(R if R is not None else profile.radius, "R"))
    pieces = require_int_at_least(pieces, 1, "pieces")
    potential, virial, d = _potential_parts(S)
    if d.size != profile.m:
        raise ParameterRangeError(f"profile has {profile.m} components, nonlinearity has {d.size}", fields=["profile"])
    n = profile.n
    area = surface_area(n)

    U_R, dU_R = profile.sample([R])
    carried = _carried_volume(profile, S)
    if carried is not None:
        lhs = area * float(carried(np.array([R]))[0])
        pieces = 0
    else:
        edges = np.linspace(0.0, R, pieces + 1)
        a, b = edges[:-1, None], edges[1:, None]
        half = 0.5 * (b - a)
        nodes = (0.5 * (a + b) + half * _GL_NODES[None, :]).ravel()
        U, _ = profile.sample(nodes)
        integrand = nodes ** (n - 1) * (2.0 * n * potential(U) - (n - 2) * virial(U))
        lhs = area * float(np.sum(half[:, 0] * (integrand.reshape(pieces, GAUSS_POINTS) @ _GL_WEIGHTS)))

    U_R, dU_R = U_R[:, 0], dU_R[:, 0]
    gradient_terms = float(np.sum(d * (dU_R**2 + (n - 2) / R * U_R * dU_R)))
    rhs = area * R**n * (2.0 * float(potential(U_R[:, None])[0]) + gradient_terms)

    residual = abs(lhs - rhs) / max(abs(lhs), abs(rhs), RESIDUAL_FLOOR)
    result = IdentityResidual(lhs=lhs, rhs=rhs, residual=residual, R=R, pieces=pieces)
    logger.debug("radial.pohozaev_identity", extra=result.to_dict())
    return result
