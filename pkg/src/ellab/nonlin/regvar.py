"""
Regular variation: indices, slowly varying factors, rescaling limits f0 / f_inf and f+.

Indices are read off the power-log structure where possible (see `asymptotics.leading`); scalar
nonlinearities outside that family fall back to a least-squares log-log slope on
lam in {1e2, ..., 1e8} (or the reciprocals towards zero).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import minimize_scalar

from ellab.exceptions import ParameterRangeError, RegularVariationError

from .asymptotics import Term, Unresolved, leading
from .expr import Const, Expr, Var, make_product, power
from .scalar import ScalarNonlin
from .system import SystemNonlin

logger = logging.getLogger(__name__)

End = Literal["zero", "inf"]

FALLBACK_EXPONENTS = np.arange(2, 9, dtype=float)
SLOPE_VARIATION_TOL = 1e-3
# boundary samples of the unit max-norm sphere per edge (two outer edges of the square)
SPHERE_POINTS_PER_EDGE = 1024


@dataclass(frozen=True, slots=True)
class NumericIndex:
    slope: float
    converged: bool
    variation: float


@dataclass(frozen=True, slots=True)
class SlowFactor:
    """L(s) = s^{-p} f(s) ~ coefficient * log(s or 1/s)^log_exponent at one end."""

    end: str
    coefficient: float
    log_exponent: float

    def describe(self) -> str:
        if self.log_exponent == 0.0:
            return f"{self.coefficient:.17g}"
        arg = "log(s)" if self.end == "inf" else "log(1/s)"
        return f"{self.coefficient:.17g}*{arg}^{self.log_exponent:.17g}"


@dataclass(frozen=True)
class RegVarProfile:
    index_inf: float
    index_zero: float
    f_inf: tuple[Expr, ...]
    f_zero: tuple[Expr, ...]
    slow_inf: tuple[SlowFactor, ...]
    slow_zero: tuple[SlowFactor, ...]
    variables: tuple[str, ...]
    method: str  # structural | numeric

    def index(self, end: End) -> float:
        return self.index_inf if end == "inf" else self.index_zero

    def limit(self, end: End) -> tuple[Expr, ...]:
        return self.f_inf if end == "inf" else self.f_zero

    def evaluate_limit(self, end: End, U) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        env = {name: U[i] for i, name in enumerate(self.variables)}
        shape = np.shape(U[0])
        with np.errstate(all="ignore"):
            return np.stack([np.broadcast_to(np.asarray(e.evaluate(env), dtype=float), shape) for e in self.limit(end)])


# =====================================================================================================================
# Indices
# =====================================================================================================================


def numeric_index(f: ScalarNonlin, end: End) -> NumericIndex:
    """
    Least-squares slope of log f(lam) against log lam on lam = 10^2 .. 10^8 (or reciprocals).

    Convergence means the two last one-decade slopes differ by less than 1e-3.
    """
    exps = FALLBACK_EXPONENTS if end == "inf" else -FALLBACK_EXPONENTS
    lam = 10.0**exps
    values = np.abs(f.raw(lam))
    if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
        return NumericIndex(math.nan, False, math.inf)
    x, y = np.log(lam), np.log(values)
    local = np.diff(y) / np.diff(x)
    variation = float(abs(local[-1] - local[-2]))
    slope, _ = np.polyfit(x[-3:], y[-3:], 1)
    converged = variation < SLOPE_VARIATION_TOL
    logger.debug(
        "regvar.numeric_index",
        extra={"end": end, "slope": float(slope), "variation": variation, "converged": converged},
    )
    return NumericIndex(float(slope), converged, variation)


def local_index(f: ScalarNonlin, end: End) -> tuple[float, float]:
    """(index, log exponent) at `end`, structural first, numeric otherwise."""
    try:
        term = f.leading(end)
    except Unresolved:
        term = None
        structural = False
    else:
        structural = True
    if structural:
        if term is None:
            raise RegularVariationError(f"{f.text} vanishes identically", end=end)
        return term.index, term.slow
    estimate = numeric_index(f, end)
    if not estimate.converged:
        raise RegularVariationError(
            f"log-log slope of {f.text} does not stabilise towards {end} (variation {estimate.variation:.3g})",
            end=end,
        )
    return estimate.slope, 0.0


# =====================================================================================================================
# Profiles
# =====================================================================================================================


def regvar_profile(f: ScalarNonlin | SystemNonlin) -> RegVarProfile:
    """
    Indices at 0 and infinity plus the homogeneous rescaling limits.

    For systems the limits are normalized by the max-norm sphere maximum of the leading part,
    so that f(lam xi) / f+(lam) -> f_lim(xi).

    Raises:
        RegularVariationError: no readable index and the numeric slope does not settle.
    """
    if isinstance(f, SystemNonlin):
        if f.scalar is not None:
            return regvar_profile(f.scalar)
        return _system_profile(f)
    return _scalar_profile(f)


def _scalar_profile(f: ScalarNonlin) -> RegVarProfile:
    s = Var(f.var)
    parts: dict[str, tuple[float, SlowFactor]] = {}
    method = "structural"
    for end in ("inf", "zero"):
        try:
            term = f.leading(end)
        except Unresolved:
            term = None
        if term is not None:
            coefficient = float(np.asarray(term.hom.evaluate({f.var: 1.0})))
            parts[end] = (term.index, SlowFactor(end, coefficient, term.slow))
            continue
        method = "numeric"
        index, _ = local_index(f, end)
        lam = 10.0 ** (8.0 if end == "inf" else -8.0)
        coefficient = float(f.raw(np.array(lam))) * lam ** (-index)
        parts[end] = (index, SlowFactor(end, coefficient, 0.0))

    p_inf, slow_inf = parts["inf"]
    p_zero, slow_zero = parts["zero"]
    profile = RegVarProfile(
        index_inf=p_inf,
        index_zero=p_zero,
        f_inf=(power(s, p_inf),),
        f_zero=(power(s, p_zero),),
        slow_inf=(slow_inf,),
        slow_zero=(slow_zero,),
        variables=(f.var,),
        method=method,
    )
    logger.debug("regvar.profile", extra={"expr": f.text, "p_inf": p_inf, "p_zero": p_zero, "method": method})
    return profile


def _system_profile(F: SystemNonlin) -> RegVarProfile:
    limits: dict[str, tuple[float, tuple[Expr, ...], tuple[SlowFactor, ...]]] = {}
    for end in ("inf", "zero"):
        try:
            terms = [leading(c, end) for c in F.components]
        except Unresolved as exc:
            raise RegularVariationError(f"cannot read the order of {F.describe()} towards {end}: {exc}", end=end) from exc
        present = [t for t in terms if t is not None]
        if not present:
            raise RegularVariationError(f"{F.describe()} vanishes identically", end=end)
        best = _dominant(present, end)
        homs = tuple(
            t.hom if t is not None and _same_order(t, best) else Const(0.0) for t in terms
        )
        scale, _ = sphere_max(homs, F.variables, 1.0)
        if not (scale > 0.0 and math.isfinite(scale)):
            raise RegularVariationError(f"degenerate leading part of {F.describe()} towards {end}", end=end)
        normalized = tuple(make_product([Const(1.0 / scale), h]) for h in homs)
        slow = tuple(SlowFactor(end, scale, best.slow) for _ in homs)
        limits[end] = (best.index, normalized, slow)

    return RegVarProfile(
        index_inf=limits["inf"][0],
        index_zero=limits["zero"][0],
        f_inf=limits["inf"][1],
        f_zero=limits["zero"][1],
        slow_inf=limits["inf"][2],
        slow_zero=limits["zero"][2],
        variables=F.variables,
        method="structural",
    )


def _same_order(a: Term, b: Term) -> bool:
    return abs(a.index - b.index) <= 1e-12 and abs(a.slow - b.slow) <= 1e-12


def _dominant(terms: list[Term], end: str) -> Term:
    # larger |f| wins: highest order towards infinity, lowest towards zero, then the log exponent
    def key(t: Term):
        return (t.index if end == "inf" else -t.index, t.slow)

    return max(terms, key=key)


# =====================================================================================================================
# f+
# =====================================================================================================================


def sphere_max(components, variables, lam: float) -> tuple[float, tuple[float, ...]]:
    """
    max over {U in K : |U|_inf = lam} of max_i |f_i(U)|.

    For m = 2 the set is the two outer edges of the square [0, lam]^2; each is sampled densely and
    the best sample is refined by a bounded scalar search on its neighbouring cells.
    """
    m = len(components)

    def magnitude(U: np.ndarray) -> np.ndarray:
        env = {name: U[i] for i, name in enumerate(variables)}
        shape = np.shape(U[0])
        with np.errstate(all="ignore"):
            vals = np.stack([np.broadcast_to(np.abs(np.asarray(c.evaluate(env), dtype=float)), shape) for c in components])
        vals = np.where(np.isfinite(vals), vals, -np.inf)
        return vals.max(axis=0)

    if m == 1:
        value = float(magnitude(np.array([[lam]]))[0])
        return value, (lam,)

    t = np.linspace(0.0, 1.0, SPHERE_POINTS_PER_EDGE)
    best_value, best_point = -math.inf, (lam, lam)
    for edge in (0, 1):
        def point(tt, edge=edge):
            tt = np.asarray(tt, dtype=float)
            fixed = np.full_like(tt, lam)
            return np.stack([fixed, lam * tt]) if edge == 0 else np.stack([lam * tt, fixed])

        vals = magnitude(point(t))
        j = int(np.argmax(vals))
        value, where = float(vals[j]), float(t[j])
        lo, hi = t[max(j - 1, 0)], t[min(j + 1, len(t) - 1)]
        if hi > lo:
            res = minimize_scalar(
                lambda x: -float(magnitude(point(np.array([x])))[0]),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-12},
            )
            if res.success and -res.fun > value:
                value, where = float(-res.fun), float(res.x)
        if value > best_value:
            U = point(np.array([where]))
            best_value, best_point = value, (float(U[0, 0]), float(U[1, 0]))
    return best_value, best_point


def f_plus(F: SystemNonlin | ScalarNonlin, lam: float) -> float:
    """f+(lam) = max_{|U| = lam, U in K} |f(U)| (max-norm)."""
    if not (math.isfinite(lam) and lam > 0.0):
        raise ParameterRangeError(f"lambda must be finite and > 0, got {lam!r}", fields=["lam"])
    if isinstance(F, ScalarNonlin):
        return float(abs(F.extended(lam)))
    value, _ = sphere_max(F.components, F.variables, lam)
    return value
