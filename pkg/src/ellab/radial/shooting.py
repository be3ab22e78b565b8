"""
Radial shooting for the initial value problem

    -(r^(n-1) u')' = r^(n-1) f(u),   u(0) = s0,  u'(0) = 0,

with f extended by 0 to negative arguments.

The singular origin is stepped over with the Taylor series
u(r) = s0 - f(s0) r^2 / (2n) + f(s0) f'(s0) r^4 / (8n(n+2)); the integration then runs with
scipy's DOP853 and two terminal events (first zero of u, blow-up past BLOWUP_FACTOR * s0).

Two more states ride along under the same tolerances: F(u) through (F(u))' = f(u) u', and the
Pohozaev volume term int_0^r s^(n-1) (2n F(u) - (n-2) u f(u)) ds.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ellab.config import get_settings
from ellab.exceptions import IntegralDivergenceError, ParameterRangeError
from ellab.nonlin.calculus import primitive
from ellab.nonlin.scalar import ScalarNonlin
from ellab.validators.numeric_validators import require_int_at_least, require_positive

from .profile import CarriedVolume, Provenance, RadialProfile

logger = logging.getLogger(__name__)

R_START = 1e-4
# the start radius is shrunk until the r^2 term is at most this fraction of s0
SERIES_RTOL = 1e-4
ZERO_RTOL = 1e-12
# u' above this fraction of s0 counts as an increase of u
SLOPE_RTOL = 1e-9


class OutcomeTag(StrEnum):
    FIRST_ZERO = "first-zero"
    POSITIVE_ON_HORIZON = "positive-on-horizon"
    BLOW_UP = "blow-up"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, slots=True)
class ShootOutcome:
    """
    Classification of one shot.

    radius is R (first zero), R_max (horizon) or r_b (blow-up); value / derivative are u and u'
    there when they are meaningful.
    """

    tag: OutcomeTag
    radius: float | None = None
    value: float | None = None
    derivative: float | None = None
    reason: str | None = None

    @classmethod
    def first_zero(cls, R: float, u: float, du: float) -> "ShootOutcome":
        return cls(OutcomeTag.FIRST_ZERO, radius=R, value=u, derivative=du)

    @classmethod
    def positive_on_horizon(cls, R_max: float, u: float, du: float) -> "ShootOutcome":
        return cls(OutcomeTag.POSITIVE_ON_HORIZON, radius=R_max, value=u, derivative=du)

    @classmethod
    def blow_up(cls, r_b: float) -> "ShootOutcome":
        return cls(OutcomeTag.BLOW_UP, radius=r_b)

    @classmethod
    def inconclusive(cls, reason: str, radius: float | None = None) -> "ShootOutcome":
        return cls(OutcomeTag.INCONCLUSIVE, radius=radius, reason=reason)

    def to_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "radius": self.radius,
            "value": self.value,
            "derivative": self.derivative,
            "reason": self.reason,
        }


# =====================================================================================================================
# Origin series
# =====================================================================================================================


def _start_radius(n: int, s0: float, f0: float) -> float:
    if f0 == 0.0:
        return R_START
    return min(R_START, math.sqrt(2.0 * n * SERIES_RTOL * s0 / abs(f0)))


def _series(n: int, s0: float, f0: float, df0: float, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c2 = -f0 / (2.0 * n)
    c4 = f0 * df0 / (8.0 * n * (n + 2.0))
    return s0 + c2 * r**2 + c4 * r**4, 2.0 * c2 * r + 4.0 * c4 * r**3


# =====================================================================================================================
# Zero refinement
# =====================================================================================================================


def _refine_zero(sol, lo: float, R: float, s0: float) -> float:
    """
    Bisect u on the last step [lo, R] until |u| <= ZERO_RTOL * s0.

    The event location is normally already that accurate; the bracket is widened past R on the
    last dense segment when u(R) is still positive.
    """
    tol = ZERO_RTOL * s0
    u_R = float(sol.sol(R)[0])
    if abs(u_R) <= tol:
        return R
    hi = R
    step = max(R - lo, 1e-12 * R)
    for _ in range(60):
        if float(sol.sol(hi)[0]) < 0.0:
            break
        hi += step
        step *= 2.0
    r = float(brentq(lambda x: float(sol.sol(x)[0]), lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500))
    return r


# =====================================================================================================================
# Shooting
# =====================================================================================================================


def shoot(
    f: ScalarNonlin,
    n: int,
    s0: float,
    r_max: float | None = None,
    tol: float | None = None,
    *,
    through_zero: bool = False,
    blowup_factor: float | None = None,
) -> tuple[RadialProfile, ShootOutcome]:
    """
    Integrate the radial IVP from u(0) = s0 and classify the trajectory.

    Args:
        f: nonlinearity; evaluated through its extension by 0 for u < 0.
        n: dimension (n >= 1).
        s0: center value.
        r_max: horizon (default Settings.SHOOT_RMAX).
        tol: relative local error per step; the absolute tolerance on u and u' is tol * s0
            (default Settings.SHOOT_TOL).
        through_zero: keep integrating after the first zero; the outcome still reports it.
        blowup_factor: blow-up is declared once u > blowup_factor * s0 (default Settings.BLOWUP_FACTOR).

    Returns:
        The profile up to the stopping radius and the outcome. Failures of the integrator itself
        come back as an INCONCLUSIVE outcome, not an exception.
    """
    settings = get_settings()
    n = require_int_at_least(n, 1, "n")
    s0 = float(require_positive(s0, "s0"))
    r_max = float(require_positive(r_max if r_max is not None else settings.SHOOT_RMAX, "r_max"))
    tol = float(require_positive(tol if tol is not None else settings.SHOOT_TOL, "tol"))
    factor = float(require_positive(blowup_factor if blowup_factor is not None else settings.BLOWUP_FACTOR, "blowup_factor"))

    start = time.perf_counter()
    logger.debug("shoot.start", extra={"expr": f.text, "n": n, "s0": s0, "r_max": r_max, "tol": tol})

    # 1) Series start away from the origin
    f0 = float(f(s0))
    df0 = float(f.one_sided_derivative(s0, -1))
    if not math.isfinite(df0):
        df0 = 0.0
    r0 = min(_start_radius(n, s0, f0), 0.5 * r_max)
    u0, du0 = _series(n, s0, f0, df0, np.array(r0))
    try:
        F0, carried = primitive(f, s0), True
    except IntegralDivergenceError:
        F0, carried = 0.0, False
        logger.debug("shoot.volume_not_carried", extra={"expr": f.text, "s0": s0})
    virial0 = 2.0 * n * F0 - (n - 2) * s0 * f0
    # natural length and energy scales for the absolute tolerances of the carried integrals
    length = math.sqrt(s0 / abs(f0)) if f0 != 0.0 else 1.0
    energy = max(abs(F0), s0 * abs(f0)) or s0
    y0 = [float(u0), float(du0), F0 + f0 * (float(u0) - s0), r0**n / n * virial0]
    atol = [tol * s0, tol * s0, tol * energy, tol * energy * length**n]

    # 2) DOP853 with zero and blow-up events
    def rhs(r: float, y: np.ndarray) -> list[float]:
        fu = float(f.extended(y[0]))
        return [
            y[1],
            -(n - 1) / r * y[1] - fu,
            fu * y[1],
            r ** (n - 1) * (2.0 * n * y[2] - (n - 2) * max(y[0], 0.0) * fu),
        ]

    def zero(r: float, y: np.ndarray) -> float:
        return y[0]

    zero.terminal = not through_zero
    zero.direction = -1

    def blowup(r: float, y: np.ndarray) -> float:
        return y[0] - factor * s0

    blowup.terminal = True
    blowup.direction = 1

    sol = solve_ivp(
        rhs,
        (r0, r_max),
        y0,
        method="DOP853",
        rtol=tol,
        atol=atol,
        events=[zero, blowup],
        dense_output=True,
    )

    def dense(radii: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        radii = np.asarray(radii, dtype=float)
        inner = radii < r0
        values = np.empty(radii.shape)
        derivs = np.empty(radii.shape)
        if inner.any():
            values[inner], derivs[inner] = _series(n, s0, f0, df0, radii[inner])
        if (~inner).any():
            y = sol.sol(radii[~inner])
            values[~inner], derivs[~inner] = y[0], y[1]
        return values[None, :], derivs[None, :]

    def volume(radii: np.ndarray) -> np.ndarray:
        radii = np.asarray(radii, dtype=float)
        inner = radii < r0
        out = np.empty(radii.shape)
        out[inner] = radii[inner] ** n / n * virial0
        if (~inner).any():
            out[~inner] = sol.sol(radii[~inner])[3]
        return out

    r_nodes = np.concatenate([[0.0], sol.t])
    u_nodes = np.concatenate([[s0], sol.y[0]])
    du_nodes = np.concatenate([[0.0], sol.y[1]])

    # 3) Classification
    zeros = sol.t_events[0]
    if sol.status == -1:
        outcome = ShootOutcome.inconclusive(f"integrator failed: {sol.message}", radius=float(sol.t[-1]))
    elif zeros.size:
        R = float(zeros[0])
        before = sol.t[sol.t < R]
        lo = float(before[-1]) if before.size else r0
        R = _refine_zero(sol, lo, R, s0)
        y_R = sol.sol(R)
        outcome = ShootOutcome.first_zero(R, float(y_R[0]), float(y_R[1]))
        if not through_zero:
            keep = r_nodes < R
            r_nodes = np.append(r_nodes[keep], R)
            u_nodes = np.append(u_nodes[keep], y_R[0])
            du_nodes = np.append(du_nodes[keep], y_R[1])
    elif sol.t_events[1].size:
        outcome = ShootOutcome.blow_up(float(sol.t_events[1][0]))
    elif np.any(du_nodes[1:] > SLOPE_RTOL * s0):
        at = float(r_nodes[1:][np.argmax(du_nodes[1:] > SLOPE_RTOL * s0)])
        outcome = ShootOutcome.inconclusive(
            f"u positive up to the horizon but u' changes sign (first at r={at:.6g})", radius=r_max
        )
    else:
        outcome = ShootOutcome.positive_on_horizon(r_max, float(u_nodes[-1]), float(du_nodes[-1]))

    profile = RadialProfile(
        n=n,
        r=r_nodes,
        values=u_nodes[None, :],
        derivs=du_nodes[None, :],
        provenance=Provenance.SHOOTING,
        dense=dense,
        volume=CarriedVolume(f, volume) if carried else None,
    )
    logger.info(
        "shoot.outcome",
        extra={
            "expr": f.text,
            "n": n,
            "s0": s0,
            "tag": outcome.tag.value,
            "radius": outcome.radius,
            "nfev": int(sol.nfev),
            "steps": int(sol.t.size),
            "duration_ms": round((time.perf_counter() - start) * 1000, 1),
        },
    )
    return profile, outcome


# =====================================================================================================================
# Ground states on a given ball
# =====================================================================================================================

# s0 is scaled by this factor per bracketing step, at most BRACKET_STEPS times
BRACKET_FACTOR = 4.0
BRACKET_STEPS = 40
RADIUS_RTOL = 1e-10


def shoot_to_radius(
    f: ScalarNonlin,
    n: int,
    R: float,
    s0: float = 1.0,
    tol: float | None = None,
) -> tuple[RadialProfile, ShootOutcome, float]:
    """
    Center value whose first zero sits at R: bracket log s0 by geometric steps, then brentq on
    log(R(s0) / R). A trajectory still positive at the horizon counts as R(s0) = horizon.

    Returns:
        (profile, outcome, s0) of the final shot.

    Raises:
        ParameterRangeError: no bracket (blow-up, inconclusive shots, or R(s0) never crosses R).
    """
    R = float(require_positive(R, "R"))
    horizon = max(4.0 * R, get_settings().SHOOT_RMAX)

    def gap(log_s: float) -> float:
        _, outcome = shoot(f, n, math.exp(log_s), r_max=horizon, tol=tol)
        match outcome.tag:
            case OutcomeTag.FIRST_ZERO:
                return math.log(outcome.radius / R)
            case OutcomeTag.POSITIVE_ON_HORIZON:
                return math.log(horizon / R)
        raise ParameterRangeError(
            f"shot from s0={math.exp(log_s):.6g} is {outcome.tag.value}, cannot aim at R={R:g}", fields=["s0"]
        )

    lo = hi = math.log(float(require_positive(s0, "s0")))
    g_lo = g_hi = gap(lo)
    step = math.log(BRACKET_FACTOR)
    for _ in range(BRACKET_STEPS):
        if g_lo >= 0.0 and g_hi <= 0.0:
            break
        if g_hi >= 0.0:
            hi += step
            g_hi = gap(hi)
        if g_lo <= 0.0:
            lo -= step
            g_lo = gap(lo)
    if not (g_lo >= 0.0 and g_hi <= 0.0):
        raise ParameterRangeError(f"no center value found whose first zero lies at R={R:g}", fields=["R"])
    if g_lo == 0.0 or g_hi == 0.0:
        best = lo if g_lo == 0.0 else hi
    else:
        best = brentq(gap, lo, hi, xtol=RADIUS_RTOL, rtol=RADIUS_RTOL, maxiter=200)
    s_best = math.exp(best)
    profile, outcome = shoot(f, n, s_best, r_max=horizon, tol=tol)
    logger.debug("shoot.to_radius", extra={"R": R, "s0": s_best, "tag": outcome.tag.value})
    return profile, outcome, s_best
