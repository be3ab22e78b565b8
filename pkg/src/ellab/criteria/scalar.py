"""
Scalar Liouville criteria for -Delta u = f(u) in R^n.

Every checker scans a log-spaced grid (see `ellab.utils.scans.ScanConfig`), adds the one-sided
values at the min/max kinks of f as extra candidates and returns a `CheckVerdict`.

Logging:
    - DEBUG: per-checker sup values and argsup.
    - INFO: verdicts that are not YES (emitted by `aggregate`).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ellab.exceptions import IntegralDivergenceError, RegularVariationError
from ellab.nonlin.calculus import weighted_primitive, weighted_primitive_grid
from ellab.nonlin.expr import monomial
from ellab.nonlin.regvar import local_index
from ellab.nonlin.scalar import ScalarNonlin
from ellab.utils.scans import ScanConfig, drop_near, scan_extremum, total_variation
from ellab.validators.numeric_validators import require_int_at_least

from .exponents import kappa_exponent, sobolev_exponent
from .verdict import CheckVerdict, ConditionResult, Holds, TheoremId, Witness, aggregate, condition

logger = logging.getLogger(__name__)

__all__ = [
    "KappaBar",
    "SupPoint",
    "check_gs_modified",
    "check_theorem_A",
    "check_theorem_B",
    "check_theorem_C_hyp",
    "check_thm1_scalar",
    "monotone_kappa_bar",
    "gs_ratio",
    "log_derivative_sup",
]

# relative total variation below which s^-p_S f counts as constant
NONCONSTANT_RTOL = 1e-9
# smallest admissible step above 1 when a growth exponent has to be pushed into (1, p_S)
EXPONENT_NUDGE = 1e-9


@dataclass(frozen=True, slots=True)
class SupPoint:
    """A sup located by a grid scan; side is -1 / +1 when it is a one-sided kink value, else 0."""

    value: float
    at: float
    side: int = 0
    at_boundary: bool = False


@dataclass(frozen=True, slots=True)
class KappaBar:
    p: float | None
    p_prime: float | None
    kappa_bar: float | None
    Q: float
    confirmed: bool


# =====================================================================================================================
# Scan helpers
# =====================================================================================================================


def _scan(scan: ScanConfig | None) -> ScanConfig:
    return scan or ScanConfig.from_settings()


def _sup_with_kinks(
    func: Callable[[np.ndarray], np.ndarray],
    grid: np.ndarray,
    kinks: list[float],
    at_kink: Callable[[float, int], float] | None = None,
    values: np.ndarray | None = None,
) -> SupPoint:
    ext = scan_extremum(func, grid, maximize=True, exclude=kinks, values=values)
    best = SupPoint(ext.value, ext.at, 0, ext.at_boundary and not ext.refined)
    for k in kinks:
        sides = (-1, 1) if at_kink is not None else (0,)
        for side in sides:
            v = at_kink(k, side) if at_kink is not None else float(np.asarray(func(np.array([k])))[0])
            if math.isfinite(v) and (not math.isfinite(best.value) or v > best.value):
                best = SupPoint(float(v), float(k), side)
    return best


def _positivity(f: ScalarNonlin, grid: np.ndarray, tol: float) -> ConditionResult:
    values = f.raw(grid)
    bad = ~(values > 0.0)
    if bad.any():
        i = int(np.argmax(bad))
        return condition(
            "positive",
            float(values[i]),
            tol,
            witness=Witness((float(grid[i]),), float(values[i]), "f(s) > 0"),
        )
    scale = float(np.max(values))
    return condition("positive", float(np.min(values)) / scale if scale > 0 else 0.0, 0.0)


def log_derivative_sup(f: ScalarNonlin, scan: ScanConfig | None = None) -> SupPoint:
    """sup of s f'(s) / f(s) over the scan grid, one-sided at every kink."""
    scan = _scan(scan)
    kinks = f.kinks(scan.lo, scan.hi)
    grid = drop_near(scan.grid(), kinks)
    d = f.derivative()

    def ratio(s: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return s * d.raw(s) / f.raw(s)

    def at_kink(k: float, side: int) -> float:
        with np.errstate(all="ignore"):
            return float(k * d.raw(np.array(k), side) / f.raw(np.array(k), side))

    sup = _sup_with_kinks(ratio, grid, kinks, at_kink)
    logger.debug("criteria.log_derivative_sup", extra={"expr": f.text, "sup": sup.value, "at": sup.at, "side": sup.side})
    return sup


def gs_ratio(f: ScalarNonlin, n: int, scan: ScanConfig | None = None) -> SupPoint:
    """
    Q = sup f(s) / (s^(kappa-1) phi(s)) with phi(s) = int_0^s sigma^-kappa f(sigma) d sigma.

    Raises:
        IntegralDivergenceError: phi is infinite (the condition then holds vacuously).
    """
    scan = _scan(scan)
    kappa = kappa_exponent(n)
    grid = scan.grid()
    kinks = f.kinks(scan.lo, scan.hi)
    phi = weighted_primitive_grid(f, -kappa, grid)

    with np.errstate(all="ignore"):
        values = f.raw(grid) / (grid ** (kappa - 1.0) * phi)

    def ratio(s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        phis = np.array([weighted_primitive(f, -kappa, float(x)) for x in s])
        with np.errstate(all="ignore"):
            return f.raw(s) / (s ** (kappa - 1.0) * phis)

    sup = _sup_with_kinks(ratio, grid, kinks, values=values)
    logger.debug("criteria.gs_ratio", extra={"expr": f.text, "n": n, "Q": sup.value, "at": sup.at})
    return sup


# =====================================================================================================================
# Checkers
# =====================================================================================================================


def check_theorem_A(f: ScalarNonlin, n: int, scan: ScanConfig | None = None) -> CheckVerdict:
    """Pure power c u^p with c > 0 and 1 < p < p_S; anything else is indeterminate."""
    scan = _scan(scan)
    n = require_int_at_least(n, 1, "n")
    p_S = sobolev_exponent(n)
    mono = monomial(f.expr)
    if mono is None:
        cond = ConditionResult("pure-power", Holds.INDETERMINATE, math.nan, detail={"expr": f.text})
        return aggregate(TheoremId.A, [cond], scan=scan.describe(), values={"p_S": p_S})
    c, p = mono
    conds = [
        condition("coefficient", c, 0.0, witness=Witness((1.0,), c, "c > 0")),
        condition("p > 1", p - 1.0, scan.tol, witness=Witness((), p, "p > 1")),
        condition("p < p_S", p_S - p, scan.tol, witness=Witness((), p, "p < p_S")),
    ]
    return aggregate(
        TheoremId.A,
        conds,
        scan=scan.describe(),
        values={"p": p, "c": c, "p_S": p_S},
        margin=min(p - 1.0, p_S - p),
    )


def check_theorem_B(f: ScalarNonlin, n: int, scan: ScanConfig | None = None) -> CheckVerdict:
    """
    s^-p_S f(s) nonincreasing and nonconstant.

    The margin is p_S - sup s f'(s) / f(s); nonconstancy is decided by the total variation of
    s^-p_S f(s) on the grid relative to its maximum.
    """
    scan = _scan(scan)
    n = require_int_at_least(n, 3, "n")
    p_S = sobolev_exponent(n)
    grid = scan.grid()

    positive = _positivity(f, grid, scan.tol)
    if positive.holds is not Holds.YES:
        return aggregate(TheoremId.B, [positive], scan=scan.describe(), values={"p_S": p_S})

    sup = log_derivative_sup(f, scan)
    margin = p_S - sup.value
    note = {-1: "left limit at kink", 1: "right limit at kink"}.get(sup.side, "")
    monotone = condition(
        "s^-p_S f nonincreasing",
        margin,
        scan.tol,
        witness=Witness((sup.at,), sup.value, "s f'(s)/f(s) <= p_S", note),
    )

    with np.errstate(all="ignore"):
        L = grid ** (-p_S) * f.raw(grid)
    finite = L[np.isfinite(L)]
    scale = float(np.max(np.abs(finite))) if finite.size else 0.0
    rel = total_variation(L) / scale if scale > 0.0 else 0.0
    nonconstant = condition(
        "s^-p_S f nonconstant",
        rel - NONCONSTANT_RTOL,
        0.0,
        witness=Witness((float(grid[0]),), float(L[0]), "s^-p_S f(s) not constant"),
    )
    return aggregate(
        TheoremId.B,
        [positive, monotone, nonconstant],
        scan=scan.describe(),
        values={
            "p_S": p_S,
            "sup_log_derivative": sup.value,
            "argsup": sup.at,
            "side": sup.side,
            "total_variation_rel": rel,
        },
        margin=margin,
    )


def _index_window(f: ScalarNonlin, p_S: float, tol: float) -> tuple[ConditionResult, dict[str, float]]:
    try:
        p1, _ = local_index(f, "zero")
        p2, _ = local_index(f, "inf")
    except RegularVariationError as exc:
        cond = ConditionResult("indices in (1, p_S)", Holds.INDETERMINATE, math.nan, detail={"error": exc.message})
        return cond, {"p1": math.nan, "p2": math.nan}
    margin = min(p1 - 1.0, p_S - p1, p2 - 1.0, p_S - p2)
    bad = p1 if min(p1 - 1.0, p_S - p1) <= min(p2 - 1.0, p_S - p2) else p2
    cond = condition(
        "indices in (1, p_S)",
        margin,
        tol,
        witness=Witness((), bad, "1 < index < p_S", "index at 0" if bad == p1 else "index at infinity"),
    )
    return cond, {"p1": p1, "p2": p2}


def check_gs_modified(f: ScalarNonlin, n: int, scan: ScanConfig | None = None) -> CheckVerdict:
    """
    Modified Gidas-Spruck condition Q < kappa. The verdict rests on Q alone; whether the local
    indices lie in (1, p_S) is reported in `values` only.

    A divergent phi makes the condition vacuous: YES with margin +inf.
    """
    scan = _scan(scan)
    n = require_int_at_least(n, 3, "n")
    kappa = kappa_exponent(n)
    p_S = sobolev_exponent(n)
    grid = scan.grid()

    positive = _positivity(f, grid, scan.tol)
    if positive.holds is not Holds.YES:
        return aggregate(TheoremId.GS_MODIFIED, [positive], scan=scan.describe(), values={"kappa": kappa})

    window, indices = _index_window(f, p_S, scan.tol)
    reported = {"indices_in_window": window.holds is Holds.YES, **indices}
    try:
        sup = gs_ratio(f, n, scan)
    except IntegralDivergenceError as exc:
        logger.info("criteria.gs_vacuous", extra={"expr": f.text, "n": n, "local_index": exc.local_index})
        cond = ConditionResult("phi finite", Holds.YES, math.inf, detail={"vacuous": True})
        return aggregate(
            TheoremId.GS_MODIFIED,
            [positive, cond],
            scan=scan.describe(),
            values={"kappa": kappa, "Q": math.inf, "vacuous": True, **reported},
            margin=math.inf,
        )

    margin = kappa - sup.value
    ratio = condition(
        "Q < kappa",
        margin,
        scan.tol,
        witness=Witness((sup.at,), sup.value, "f(s) / (s^(kappa-1) phi(s)) < kappa"),
    )
    return aggregate(
        TheoremId.GS_MODIFIED,
        [positive, ratio],
        scan=scan.describe(),
        values={"kappa": kappa, "Q": sup.value, "argsup": sup.at, **reported},
        margin=margin,
    )


def monotone_kappa_bar(f: ScalarNonlin, n: int, scan: ScanConfig | None = None) -> KappaBar:
    """
    kappa_bar implied by a nonincreasing s^-p f(s) with p in (1, p_S).

    p is the smallest admissible exponent, sup s f'/f (pushed above 1); p' = max(p, kappa - 1 + 1e-9)
    and kappa_bar = p' + 1 - kappa. The scanned Q must not exceed kappa_bar.
    """
    scan = _scan(scan)
    n = require_int_at_least(n, 3, "n")
    kappa = kappa_exponent(n)
    p_S = sobolev_exponent(n)
    try:
        Q = gs_ratio(f, n, scan).value
    except IntegralDivergenceError:
        Q = 0.0
    sup = log_derivative_sup(f, scan).value
    if not sup < p_S - scan.tol:
        return KappaBar(None, None, None, Q, False)
    p = max(sup, 1.0 + EXPONENT_NUDGE)
    p_prime = max(p, kappa - 1.0 + EXPONENT_NUDGE)
    kappa_bar = p_prime + 1.0 - kappa
    confirmed = Q <= kappa_bar + scan.tol
    logger.debug("criteria.kappa_bar", extra={"p": p, "kappa_bar": kappa_bar, "Q": Q, "confirmed": confirmed})
    return KappaBar(p, p_prime, kappa_bar, Q, confirmed)


def check_thm1_scalar(f: ScalarNonlin, n: int, scan: ScanConfig | None = None) -> CheckVerdict:
    """Scalar growth condition s f(s) <= (p_S + 1 - eps) F(s): margin p_S + 1 - sup s f / F."""
    scan = _scan(scan)
    n = require_int_at_least(n, 3, "n")
    p_S = sobolev_exponent(n)
    grid = scan.grid()
    kinks = f.kinks(scan.lo, scan.hi)

    positive = _positivity(f, grid, scan.tol)
    if positive.holds is not Holds.YES:
        return aggregate(TheoremId.THM1, [positive], scan=scan.describe(), values={"p_S": p_S})

    F = weighted_primitive_grid(f, 0.0, grid)
    with np.errstate(all="ignore"):
        values = grid * f.raw(grid) / F

    def ratio(s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        Fs = np.array([weighted_primitive(f, 0.0, float(x)) for x in s])
        with np.errstate(all="ignore"):
            return s * f.raw(s) / Fs

    sup = _sup_with_kinks(ratio, grid, kinks, values=values)
    margin = p_S + 1.0 - sup.value
    cond = condition(
        "s f / F < p_S + 1",
        margin,
        scan.tol,
        witness=Witness((sup.at,), sup.value, "s f(s) <= (p_S + 1 - eps) F(s)"),
    )
    return aggregate(
        TheoremId.THM1,
        [positive, cond],
        scan=scan.describe(),
        values={"p_S": p_S, "sup_sf_over_F": sup.value, "argsup": sup.at},
        margin=margin,
    )


def check_theorem_C_hyp(f: ScalarNonlin, n: int, scan: ScanConfig | None = None) -> CheckVerdict:
    """
    Regular variation at both ends with indices in (1, p_S), plus a certified Liouville property.

    The Liouville part is taken from whichever of the Theorem B and modified Gidas-Spruck checks
    holds; when neither does, the better margin is reported.
    """
    scan = _scan(scan)
    n = require_int_at_least(n, 3, "n")
    p_S = sobolev_exponent(n)
    window, indices = _index_window(f, p_S, scan.tol)

    b = check_theorem_B(f, n, scan)
    gs = check_gs_modified(f, n, scan)
    passing = [v for v in (b, gs) if v.holds is Holds.YES]
    if passing:
        best = max(passing, key=lambda v: v.margin)
    else:
        best = max((b, gs), key=lambda v: (v.holds is Holds.INDETERMINATE, v.margin))
    liouville = ConditionResult(
        "liouville",
        best.holds,
        best.margin,
        best.witnesses[0] if best.witnesses else None,
        {"source": str(best.theorem)},
    )
    margin = min(window.margin, liouville.margin) if not math.isnan(window.margin) else math.nan
    return aggregate(
        TheoremId.C_HYP,
        [window, liouville],
        scan=scan.describe(),
        values={"p_S": p_S, "liouville_source": str(best.theorem), **indices},
        margin=margin,
    )
