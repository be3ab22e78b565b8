"""
General Gidas-Spruck integral-estimate criterion and the search over its free parameters.

For q >= -2, k != -1 and the auxiliary exponents m_i, gamma_i the criterion asks for

    f(s) <= C s^p on (0, 1] with p >= 0, q > -p              (f-Lip)
    s^q f(s) <= c_q F_q(s),  F_q(s) = int_0^s sigma^(q-1) f    (c_q = sup of the ratio)
    s^((1 - q/2) m_i) F_q^(2 m_i - 1) <= C f  on omega_i        (growth, m_i)
    s^((2 + q) gamma_i) <= C f F_q             on omega_i        (q > -2 only)
    alpha > 0 and -beta + c_q gamma > 0

with omega_1 = (0, 1], omega_2 = (1, inf). Boundedness of the two ratio conditions is decided from
the regular-variation indices of f and F_q at the corresponding end; the measured sups over the
scan grid are reported alongside.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ellab.exceptions import IntegralDivergenceError, ParameterRangeError, RegularVariationError
from ellab.nonlin.calculus import weighted_primitive, weighted_primitive_grid
from ellab.nonlin.regvar import local_index
from ellab.nonlin.scalar import ScalarNonlin
from ellab.utils.scans import ScanConfig, scan_extremum
from ellab.validators.numeric_validators import require_finite, require_int_at_least

from .exponents import kappa_exponent
from .verdict import CheckVerdict, ConditionResult, Holds, TheoremId, Witness, aggregate, condition

logger = logging.getLogger(__name__)

__all__ = [
    "GSCoefficients",
    "GSParams",
    "check_gs_general",
    "gs_coefficients",
    "gs_param_ranges",
    "ratio_constant",
    "search_gs_params",
]

# stand-in for an unbounded upper end of the gamma window
GAMMA_CAP = 1e3
# relative inset from the ends of the open m / gamma windows
WINDOW_INSET = 1e-3
# q grid of the parameter search
Q_GRID = np.linspace(-2.0, 4.0, 25)
# k = -1 is excluded; searches stay at least this far from it
K_EXCLUSION = 1e-6


@dataclass(frozen=True, slots=True)
class GSCoefficients:
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True, slots=True)
class GSParams:
    q: float
    k: float
    m1: float
    m2: float
    gamma1: float | None = None
    gamma2: float | None = None

    def to_dict(self) -> dict[str, float | None]:
        return {
            "q": self.q,
            "k": self.k,
            "m1": self.m1,
            "m2": self.m2,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
        }


def gs_coefficients(n: int, q: float, k: float) -> GSCoefficients:
    a = (n - 1.0) / n
    alpha = -a * k * k + (q - 1.0) * k - q * (q - 1.0) / 2.0
    beta = (n + 2.0) / n * k - 1.5 * q
    return GSCoefficients(alpha=alpha, beta=beta, gamma=-a)


def gs_param_ranges(n: int) -> tuple[tuple[float, float], tuple[float, float]]:
    """Open windows (2/3, 2n/(3n-4)) for m_i and (1, n/(n-4)_+) for gamma_i (inf when n <= 4)."""
    m_hi = 2.0 * n / (3.0 * n - 4.0)
    gamma_hi = math.inf if n <= 4 else n / (n - 4.0)
    return (2.0 / 3.0, m_hi), (1.0, gamma_hi)


def _require_params(n: int, params: GSParams) -> None:
    (m_lo, m_hi), (g_lo, g_hi) = gs_param_ranges(n)
    if params.k == -1.0:
        raise ParameterRangeError("k must differ from -1", fields=["k"])
    if params.q < -2.0:
        raise ParameterRangeError(f"q must be >= -2, got {params.q!r}", fields=["q"])
    if params.q == -2.0 and n != 3:
        raise ParameterRangeError("q = -2 is only admissible for n = 3", fields=["q", "n"])
    for name in ("m1", "m2"):
        value = getattr(params, name)
        if not (m_lo < value < m_hi):
            raise ParameterRangeError(f"{name} must lie in ({m_lo:g}, {m_hi:g}), got {value!r}", fields=[name])
    if params.q > -2.0:
        for name in ("gamma1", "gamma2"):
            value = getattr(params, name)
            if value is None or not (g_lo < value < g_hi):
                raise ParameterRangeError(
                    f"{name} must lie in ({g_lo:g}, {g_hi:g}) when q > -2, got {value!r}", fields=[name]
                )


# =====================================================================================================================
# c_q and the end indices
# =====================================================================================================================


def ratio_constant(f: ScalarNonlin, q: float, scan: ScanConfig | None = None) -> tuple[float, float]:
    """
    (c_q, argsup) with c_q = sup s^q f(s) / F_q(s).

    Raises:
        IntegralDivergenceError: F_q is infinite.
    """
    scan = scan or ScanConfig.from_settings()
    grid = scan.grid()
    Fq = weighted_primitive_grid(f, q - 1.0, grid)
    with np.errstate(all="ignore"):
        values = grid**q * f.raw(grid) / Fq

    def ratio(s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        F = np.array([weighted_primitive(f, q - 1.0, float(x)) for x in s])
        with np.errstate(all="ignore"):
            return s**q * f.raw(s) / F

    ext = scan_extremum(ratio, grid, exclude=f.kinks(scan.lo, scan.hi), values=values)
    return ext.value, ext.at


def _primitive_index(q_f: float, slow_f: float, q: float, end: str) -> tuple[float, float]:
    """(index, log exponent) of F_q at `end` from those of f."""
    total = q_f + q
    if end == "zero":
        return total, slow_f
    if total > 0.0:
        return total, slow_f
    if total == 0.0 and slow_f > -1.0:
        return 0.0, slow_f + 1.0
    return 0.0, 0.0


def _bounded_at(index: float, slow: float, end: str, tol: float, name: str, value: float) -> ConditionResult:
    """s^index log^slow bounded near `end`: index > 0 at zero, index < 0 at infinity (ties by slow)."""
    signed = index if end == "zero" else -index
    witness = Witness((), index, f"ratio index at {end}", f"{name}={value:g}")
    if abs(signed) <= tol:
        holds = Holds.YES if slow <= 0.0 else Holds.NO
        return ConditionResult(f"{name} bound at {end}", holds, signed, witness, {"log_exponent": slow})
    return condition(f"{name} bound at {end}", signed, 0.0, witness=witness, log_exponent=slow)


def _grid_sup(grid: np.ndarray, values: np.ndarray, mask: np.ndarray) -> float:
    sel = values[mask & np.isfinite(values)]
    return float(np.max(sel)) if sel.size else math.nan


# =====================================================================================================================
# Checker
# =====================================================================================================================


def check_gs_general(
    f: ScalarNonlin,
    n: int,
    q: float,
    k: float,
    m1: float,
    m2: float,
    gamma1: float | None = None,
    gamma2: float | None = None,
    scan: ScanConfig | None = None,
) -> CheckVerdict:
    """
    Evaluate every condition of the general criterion at one parameter point.

    Raises:
        ParameterRangeError: the parameters leave their admissible windows.
    """
    scan = scan or ScanConfig.from_settings()
    n = require_int_at_least(n, 3, "n")
    params = GSParams(
        q=require_finite(q, "q"),
        k=require_finite(k, "k"),
        m1=float(m1),
        m2=float(m2),
        gamma1=None if gamma1 is None else float(gamma1),
        gamma2=None if gamma2 is None else float(gamma2),
    )
    _require_params(n, params)
    coeffs = gs_coefficients(n, params.q, params.k)
    values: dict[str, object] = {"params": params.to_dict(), "alpha": coeffs.alpha, "beta": coeffs.beta, "gamma": coeffs.gamma}

    # 1) F_q finite and c_q
    try:
        c_q, argsup = ratio_constant(f, params.q, scan)
    except IntegralDivergenceError as exc:
        cond = ConditionResult(
            "F_q finite",
            Holds.NO,
            -math.inf,
            Witness((0.0,), math.inf, "int_0^s sigma^(q-1) f < inf", f"local index {exc.local_index}"),
        )
        return aggregate(TheoremId.GS_GENERAL, [cond], scan=scan.describe(), values=values)
    values.update({"c_q": c_q, "argsup": argsup})

    conds: list[ConditionResult] = [
        condition("alpha > 0", coeffs.alpha, scan.tol, witness=Witness((), coeffs.alpha, "alpha > 0")),
        condition(
            "-beta + c_q gamma > 0",
            -coeffs.beta + c_q * coeffs.gamma,
            scan.tol,
            witness=Witness((argsup,), c_q, "-beta + c_q gamma > 0"),
        ),
    ]

    # 2) end indices of f and F_q
    try:
        q0, slow0 = local_index(f, "zero")
        q_inf, slow_inf = local_index(f, "inf")
    except RegularVariationError as exc:
        conds.append(ConditionResult("end indices", Holds.INDETERMINATE, math.nan, detail={"error": exc.message}))
        return aggregate(TheoremId.GS_GENERAL, conds, scan=scan.describe(), values=values)

    conds += [
        condition(
            "f-Lip p >= 0",
            q0,
            scan.tol,
            strict=False,
            witness=Witness((), q0, "f(s) <= C s^p on (0,1] with p >= 0"),
        ),
        condition(
            "f-Lip q > -p",
            q0 + params.q,
            scan.tol,
            witness=Witness((), q0 + params.q, "q > -p"),
        ),
    ]
    Fq0 = _primitive_index(q0, slow0, params.q, "zero")
    Fqi = _primitive_index(q_inf, slow_inf, params.q, "inf")
    values.update({"index_zero": q0, "index_inf": q_inf, "F_q_index_zero": Fq0[0], "F_q_index_inf": Fqi[0]})

    # 3) growth conditions, decided per end from the ratio index
    for m, end, (iF, lF), (iF_f, lF_f) in (
        (params.m1, "zero", Fq0, (q0, slow0)),
        (params.m2, "inf", Fqi, (q_inf, slow_inf)),
    ):
        index = (1.0 - params.q / 2.0) * m + (2.0 * m - 1.0) * iF - iF_f
        slow = (2.0 * m - 1.0) * lF - lF_f
        conds.append(_bounded_at(index, slow, end, scan.tol, "m", m))
    if params.q > -2.0:
        for g, end, (iF, lF), (iF_f, lF_f) in (
            (params.gamma1, "zero", Fq0, (q0, slow0)),
            (params.gamma2, "inf", Fqi, (q_inf, slow_inf)),
        ):
            index = (2.0 + params.q) * g - iF_f - iF
            slow = -lF_f - lF
            conds.append(_bounded_at(index, slow, end, scan.tol, "gamma", g))

    # 4) measured sups on omega_1 / omega_2
    grid = scan.grid()
    Fq = weighted_primitive_grid(f, params.q - 1.0, grid)
    fv = f.raw(grid)
    inner = grid <= 1.0
    with np.errstate(all="ignore"):
        gs4 = [grid ** ((1.0 - params.q / 2.0) * m) * Fq ** (2.0 * m - 1.0) / fv for m in (params.m1, params.m2)]
        measured = {
            "growth_m_sup_omega1": _grid_sup(grid, gs4[0], inner),
            "growth_m_sup_omega2": _grid_sup(grid, gs4[1], ~inner),
        }
        if params.q > -2.0:
            gs3 = [grid ** ((2.0 + params.q) * g) / (fv * Fq) for g in (params.gamma1, params.gamma2)]
            measured["growth_gamma_sup_omega1"] = _grid_sup(grid, gs3[0], inner)
            measured["growth_gamma_sup_omega2"] = _grid_sup(grid, gs3[1], ~inner)
    values.update(measured)

    return aggregate(TheoremId.GS_GENERAL, conds, scan=scan.describe(), values=values)


# =====================================================================================================================
# Parameter search
# =====================================================================================================================


def _best_k(n: int, q: float, c_q: float) -> tuple[float, float]:
    """Maximize min(alpha(k), -beta(k) + c_q gamma) over k; returns (k, margin)."""
    a = (n - 1.0) / n

    def margin(k: float) -> float:
        c = gs_coefficients(n, q, k)
        return min(c.alpha, -c.beta + c_q * c.gamma)

    vertex = (q - 1.0) / (2.0 * a)
    disc = (q - 1.0) ** 2 - 2.0 * a * q * (q - 1.0)
    half = math.sqrt(disc) / (2.0 * a) if disc > 0.0 else 1.0
    lo, hi = vertex - half - 1.0, vertex + half + 1.0
    res = minimize_scalar(lambda k: -margin(k), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    k = float(res.x)
    if abs(k + 1.0) < K_EXCLUSION:
        k = -1.0 + math.copysign(K_EXCLUSION, k + 1.0 if k != -1.0 else 1.0)
    return k, margin(k)


def _window_point(lo: float, hi: float, towards_hi: bool) -> float:
    hi_eff = GAMMA_CAP if math.isinf(hi) else hi
    inset = WINDOW_INSET * (hi_eff - lo)
    return hi_eff - inset if towards_hi else lo + inset


def _choose_auxiliary(n: int, q: float, f: ScalarNonlin) -> tuple[float, float, float | None, float | None]:
    """Pick m_i and gamma_i at the ends of their windows that favour each boundedness condition."""
    (m_lo, m_hi), (g_lo, g_hi) = gs_param_ranges(n)
    try:
        q0, slow0 = local_index(f, "zero")
        q_inf, slow_inf = local_index(f, "inf")
        iF0 = _primitive_index(q0, slow0, q, "zero")[0]
        iFi = _primitive_index(q_inf, slow_inf, q, "inf")[0]
    except RegularVariationError:
        iF0 = iFi = 0.0
    # the m-ratio index is linear in m with slope (1 - q/2) + 2 * index(F_q)
    m1 = _window_point(m_lo, m_hi, towards_hi=(1.0 - q / 2.0) + 2.0 * iF0 >= 0.0)
    m2 = _window_point(m_lo, m_hi, towards_hi=(1.0 - q / 2.0) + 2.0 * iFi < 0.0)
    if q <= -2.0:
        return m1, m2, None, None
    return m1, m2, _window_point(g_lo, g_hi, towards_hi=True), _window_point(g_lo, g_hi, towards_hi=False)


def search_gs_params(f: ScalarNonlin, n: int, scan: ScanConfig | None = None) -> CheckVerdict:
    """
    Grid-plus-refinement search over (q, k, m_i, gamma_i); returns the verdict with the largest margin.

    q runs over [-2, 4] (25 points) plus 1 - kappa, k is optimized in closed-interval Brent search for
    each q, and the auxiliary exponents are placed at the favourable ends of their windows. The best
    q is then polished between its grid neighbours.
    """
    scan = scan or ScanConfig.from_settings()
    n = require_int_at_least(n, 3, "n")
    kappa = kappa_exponent(n)
    try:
        q0, _ = local_index(f, "zero")
    except RegularVariationError:
        q0 = math.nan

    candidates = sorted(set(np.round(Q_GRID, 12).tolist()) | {1.0 - kappa})
    candidates = [q for q in candidates if (q > -2.0 or n == 3) and not (q0 + q <= 0.0)]

    def score(q: float) -> tuple[float, float, float]:
        try:
            c_q, _ = ratio_constant(f, q, scan)
        except IntegralDivergenceError:
            return -math.inf, math.nan, math.nan
        k, margin = _best_k(n, q, c_q)
        return margin, k, c_q

    scored = [(q, *score(q)) for q in candidates]
    scored = [row for row in scored if math.isfinite(row[1])]
    if not scored:
        cond = ConditionResult("feasible q", Holds.NO, -math.inf, Witness((), q0, "q0 + q > 0 for some admissible q"))
        return aggregate(TheoremId.GS_GENERAL, [cond], scan=scan.describe(), values={"searched": len(candidates)})

    best_q, best_margin, best_k, best_c = max(scored, key=lambda row: row[1])

    # 1) polish q between neighbouring candidates
    i = [row[0] for row in scored].index(best_q)
    lo = scored[max(i - 1, 0)][0]
    hi = scored[min(i + 1, len(scored) - 1)][0]
    if lo < hi:
        res = minimize_scalar(lambda q: -score(q)[0], bounds=(lo, hi), method="bounded", options={"xatol": 1e-6})
        if res.success and math.isfinite(res.fun) and -res.fun > best_margin:
            best_q = float(res.x)
            best_margin, best_k, best_c = score(best_q)

    # 2) full verdict at the optimum
    m1, m2, g1, g2 = _choose_auxiliary(n, best_q, f)
    verdict = check_gs_general(f, n, best_q, best_k, m1, m2, g1, g2, scan)
    logger.info(
        "criteria.gs_search",
        extra={"expr": f.text, "n": n, "q": best_q, "k": best_k, "c_q": best_c, "margin": best_margin, "holds": str(verdict.holds)},
    )
    return aggregate(
        TheoremId.GS_GENERAL,
        verdict.conditions,
        scan=verdict.scan,
        values={**verdict.values, "searched": len(candidates), "coefficient_margin": best_margin},
    )
