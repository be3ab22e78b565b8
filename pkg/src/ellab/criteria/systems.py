"""
Criteria for systems: Pohozaev growth conditions, the two gradient-system corollaries, proportional
systems and the Lane-Emden region.

Growth conditions are evaluated on [0, M]^2 sampled as {0} U geomspace(1e-6 M, M, 129) per axis.
Norms are max-norms, so the sample points fall on "rings" |U| = const; the innermost rings decide
whether a sup / inf is genuinely attained or keeps moving towards U = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ellab.exceptions import DomainError, MissingPotentialError, ParameterRangeError
from ellab.nonlin.expr import make_product
from ellab.nonlin.presets import mixed_power_potential
from ellab.nonlin.scalar import ScalarNonlin
from ellab.nonlin.special import theta
from ellab.nonlin.system import SystemKind, SystemNonlin
from ellab.utils.scans import ScanConfig, end_slope, scan_extremum
from ellab.validators.numeric_validators import require_finite, require_int_at_least, require_positive

from .exponents import Geometry, exponents
from .scalar import check_theorem_B
from .verdict import CheckVerdict, ConditionResult, Holds, TheoremId, Witness, aggregate, condition

logger = logging.getLogger(__name__)

__all__ = [
    "Cor0Params",
    "SquareGrid",
    "check_mixed_power",
    "check_coupled_log",
    "check_proportional",
    "check_sum_positivity",
    "check_thm1_conditions",
    "cor0_params",
    "default_epsilon",
    "growth_D_value",
    "lane_emden_region",
    "square_grid",
]

AXIS_POINTS = 129
AXIS_FLOOR = 1e-6
XI_POINTS = 64
# decades next to U = 0 used for the ring-slope test
INNER_DECADES = 2.0
CONVEXITY_RTOL = 1e-9


# =====================================================================================================================
# Sampling of [0, M]^2
# =====================================================================================================================


@dataclass(frozen=True)
class SquareGrid:
    """Sample points of [0, M]^2 without the origin, with their max-norm ring index."""

    U: np.ndarray  # (2, P)
    norm: np.ndarray  # (P,)
    ring: np.ndarray  # (P,), 1-based
    radii: np.ndarray  # (N,)

    def ring_extremum(self, values: np.ndarray, *, maximize: bool) -> np.ndarray:
        fill = -np.inf if maximize else np.inf
        out = np.full(self.radii.size + 1, fill)
        vals = np.where(np.isfinite(values), values, fill)
        (np.maximum if maximize else np.minimum).at(out, self.ring, vals)
        return out[1:]


def square_grid(M: float, points: int = AXIS_POINTS) -> SquareGrid:
    M = require_positive(float(M), "M")
    axis = np.concatenate([[0.0], np.geomspace(AXIS_FLOOR * M, M, points)])
    I, J = np.meshgrid(np.arange(axis.size), np.arange(axis.size), indexing="ij")
    I, J = I.ravel(), J.ravel()
    keep = (I > 0) | (J > 0)
    I, J = I[keep], J[keep]
    ring = np.maximum(I, J)
    return SquareGrid(U=np.stack([axis[I], axis[J]]), norm=axis[ring], ring=ring, radii=axis[1:])


def _inner_slope(grid: SquareGrid, ring_values: np.ndarray) -> float:
    ok = np.isfinite(ring_values) & (ring_values > 0.0)
    if ok.sum() < 2:
        return math.nan
    return end_slope(grid.radii[ok], ring_values[ok], "zero", INNER_DECADES)


def _argext(values: np.ndarray, *, maximize: bool) -> int:
    score = np.where(np.isfinite(values), values if maximize else -values, -np.inf)
    return int(np.argmax(score))


def _point(grid: SquareGrid, i: int) -> tuple[float, float]:
    return float(grid.U[0, i]), float(grid.U[1, i])


# =====================================================================================================================
# Pohozaev growth conditions
# =====================================================================================================================


def growth_D_value(
    S: SystemNonlin, xi, M: float, p: float, points: int = AXIS_POINTS
) -> tuple[float, tuple[float, float]]:
    """(inf, argmin) of xi . f(U) / |U|^p over [0, M]^2 without the origin, for a fixed (unnormalized) xi."""
    grid = square_grid(M, points)
    with np.errstate(all="ignore"):
        values = np.tensordot(np.asarray(xi, dtype=float), S.evaluate(grid.U), axes=1) / grid.norm**p
    i = _argext(values, maximize=False)
    return float(values[i]), _point(grid, i)


def _growth_D(S: SystemNonlin, grid: SquareGrid, f: np.ndarray, p: float, tol: float) -> ConditionResult:
    t = np.linspace(0.0, 1.0, XI_POINTS + 2)[1:-1]
    xis = np.stack([t, 1.0 - t], axis=1)
    scaled = f / grid.norm**p
    best = (-math.inf, xis[0], 0)
    for xi in xis:
        values = xi @ scaled
        i = _argext(values, maximize=False)
        if values[i] > best[0]:
            best = (float(values[i]), xi, i)
    c, xi, i = best
    ring_inf = grid.ring_extremum(np.asarray(xi @ scaled), maximize=False)
    slope = _inner_slope(grid, ring_inf)
    witness = Witness(_point(grid, i), c, "xi . f(U) >= c_M |U|^p", f"xi=({xi[0]:.6g}, {xi[1]:.6g})")
    if math.isfinite(slope) and slope > tol:
        # xi . f / |U|^p decays towards U = 0: no positive lower bound
        return ConditionResult("D: xi . f >= c_M |U|^p", Holds.NO, -slope, witness, {"c_M": c, "inner_slope": slope})
    return condition("D: xi . f >= c_M |U|^p", c, tol, witness=witness, c_M=c, xi=list(map(float, xi)), inner_slope=slope)


def check_thm1_conditions(
    S: SystemNonlin,
    n: int,
    geometry: Geometry | str = Geometry.WHOLE,
    M: float = 1.0,
    p: float = 2.0,
    q: float = 2.0,
    scan: ScanConfig | None = None,
) -> CheckVerdict:
    """
    Growth conditions of the Pohozaev method on [0, M]^2 for a gradient system f = grad F.

        (B) |f(U)| <= C_M |U|^q
        (C) 2n F(U) - (n-2) U . grad F(U) >= c_M |U|^(p+1)
        (D) xi . f(U) >= c_M |U|^p for some xi in the open simplex (64 candidates)

    plus the exponent window 1 < q <= p < p**. The window margin reports the measured gap p - q;
    whether it is small enough for the theorem is not decided here.

    Raises:
        MissingPotentialError: S has no potential.
        ParameterRangeError: q > p, q <= 1 or S is not a two-component system.
    """
    scan = scan or ScanConfig.from_settings()
    n = require_int_at_least(n, 1, "n")
    if S.potential is None:
        raise MissingPotentialError()
    if S.m != 2:
        raise ParameterRangeError(f"growth conditions are evaluated for two-component systems, got m={S.m}", fields=["m"])
    p, q = float(require_finite(p, "p")), float(require_finite(q, "q"))
    if not (1.0 < q <= p):
        raise ParameterRangeError(f"need 1 < q <= p, got p={p!r}, q={q!r}", fields=["p", "q"])
    ex = exponents(n, geometry)
    grid = square_grid(M)

    f = S.evaluate(grid.U)
    F = S.potential_values(grid.U)
    bad = ~np.all(np.isfinite(f), axis=0) | ~np.isfinite(F)
    if bad.any():
        logger.debug("criteria.thm1_nonfinite", extra={"system": S.describe(), "count": int(bad.sum())})

    conds: list[ConditionResult] = []

    # (B)
    ratio_B = np.max(np.abs(f), axis=0) / grid.norm**q
    i = _argext(ratio_B, maximize=True)
    C_M = float(ratio_B[i])
    ring_sup = grid.ring_extremum(ratio_B, maximize=True)
    slope_B = _inner_slope(grid, ring_sup)
    at_boundary = bool(ring_sup[0] > np.max(ring_sup[1:]) * (1.0 + scan.tol))
    witness = Witness(_point(grid, i), C_M, "|f(U)| <= C_M |U|^q")
    if at_boundary:
        logger.warning("criteria.grid_boundary", extra={"condition": "B", "system": S.describe(), "point": _point(grid, i)})
    if math.isfinite(slope_B) and slope_B < -scan.tol:
        conds.append(ConditionResult("B: |f| <= C_M |U|^q", Holds.NO, slope_B, witness, {"C_M": C_M, "inner_slope": slope_B}))
    elif at_boundary and not math.isfinite(slope_B):
        conds.append(ConditionResult("B: |f| <= C_M |U|^q", Holds.INDETERMINATE, math.nan, witness, {"C_M": C_M}))
    else:
        margin = slope_B if math.isfinite(slope_B) else 0.0
        conds.append(condition("B: |f| <= C_M |U|^q", margin, scan.tol, strict=False, witness=witness, C_M=C_M, inner_slope=slope_B, at_boundary=bool(at_boundary)))

    # (C)
    pohozaev = 2.0 * n * F - (n - 2.0) * (grid.U[0] * f[0] + grid.U[1] * f[1])
    ratio_C = pohozaev / grid.norm ** (p + 1.0)
    i = _argext(ratio_C, maximize=False)
    c_M = float(ratio_C[i])
    slope_C = _inner_slope(grid, grid.ring_extremum(ratio_C, maximize=False))
    witness = Witness(_point(grid, i), c_M, "2nF - (n-2) U.grad F >= c_M |U|^(p+1)")
    if c_M > 0.0 and math.isfinite(slope_C) and slope_C > scan.tol:
        conds.append(ConditionResult("C: Pohozaev lower bound", Holds.NO, -slope_C, witness, {"c_M": c_M, "inner_slope": slope_C}))
    else:
        conds.append(condition("C: Pohozaev lower bound", c_M, scan.tol, witness=witness, c_M=c_M, inner_slope=slope_C))

    # (D)
    conds.append(_growth_D(S, grid, f, p, scan.tol))

    # exponent window
    window = min(q - 1.0, ex.p_star_star - p)
    conds.append(
        condition(
            "exponent window",
            window,
            scan.tol,
            witness=Witness((p, q), p, "1 < q <= p < p**"),
            p_star_star=ex.p_star_star,
            gap=p - q,
        )
    )
    return aggregate(
        TheoremId.THM1,
        conds,
        scan={**scan.describe(), "M": float(M), "axis_points": AXIS_POINTS, "axis_floor": AXIS_FLOOR * float(M)},
        values={"p": p, "q": q, "gap": p - q, "exponents": ex.to_dict(), "system": S.describe()},
    )


# =====================================================================================================================
# Gradient-system corollaries
# =====================================================================================================================


def check_mixed_power(
    alpha: float,
    beta: float,
    lam: float,
    mu: float,
    b: float,
    n: int,
    geometry: Geometry | str = Geometry.WHOLE,
    *,
    mixed: bool = False,
    M: float | None = None,
    scan: ScanConfig | None = None,
) -> CheckVerdict:
    """Parameter window of the multi-power Schroedinger-type potential; with M the growth conditions are evaluated too."""
    scan = scan or ScanConfig.from_settings()
    ex = exponents(n, geometry)
    conds = [
        condition("alpha > 1", alpha - 1.0, scan.tol, witness=Witness((), alpha, "alpha > 1")),
        condition("alpha < beta", beta - alpha, scan.tol, witness=Witness((), beta, "alpha < beta")),
        condition("beta <= p_S", ex.p_S - beta, scan.tol, strict=False, witness=Witness((), beta, "beta <= p_S")),
        condition("alpha < p**", ex.p_star_star - alpha, scan.tol, witness=Witness((), alpha, "alpha < p**")),
        condition("lam > -1", lam + 1.0, scan.tol, witness=Witness((), lam, "lam > -1")),
        condition("mu >= -1", mu + 1.0, scan.tol, strict=False, witness=Witness((), mu, "mu >= -1")),
        condition("b >= 0", b, scan.tol, strict=False, witness=Witness((), b, "b >= 0")),
    ]
    values: dict[str, object] = {"alpha": alpha, "beta": beta, "lam": lam, "mu": mu, "b": b, "mixed": mixed}
    if M is not None:
        S = mixed_power_potential(alpha, beta, lam, mu, b, mixed)
        growth = check_thm1_conditions(S, n, geometry, M, p=alpha, q=alpha, scan=scan)
        conds.append(
            ConditionResult(
                "growth conditions",
                growth.holds,
                growth.margin,
                growth.witnesses[0] if growth.witnesses else None,
                {"conditions": [c.to_dict() for c in growth.conditions]},
            )
        )
        values["M"] = float(M)
    return aggregate(TheoremId.COR_POWER, conds, scan=scan.describe(), values=values)


@dataclass(frozen=True, slots=True)
class Cor0Params:
    a0: float
    p_star_star: float
    p_S: float
    K: float
    sigma: int

    @staticmethod
    def lambda0(rho):
        """2 sqrt(1 - rho) / (2 - rho) for rho = |a| / a0 in [0, 1]."""
        rho = np.asarray(rho, dtype=float)
        if np.any((rho < 0.0) | (rho > 1.0)):
            raise DomainError("rho must lie in [0, 1]", fields=["rho"])
        out = 2.0 * np.sqrt(1.0 - rho) / (2.0 - rho)
        return float(out) if out.ndim == 0 else out

    def curve(self, points: int = 11) -> list[tuple[float, float]]:
        rho = np.linspace(0.0, 1.0, points)
        return [(float(r), float(v)) for r, v in zip(rho, self.lambda0(rho))]


def cor0_params(p0: float, K: float, sigma: int, n: int, geometry: Geometry | str = Geometry.WHOLE) -> Cor0Params:
    """
    a0 and the lambda0(rho) curve of the log-family gradient system.

        K = 1, sigma = -1:  a0 = (p_S - p0) / 2
        K = 1, sigma = +1:  a0 = (p** - p0) / 2
        K > 1:              a0 = (p** - p0) / 2 * theta(K)
    """
    ex = exponents(n, geometry)
    if sigma not in (-1, 1):
        raise ParameterRangeError(f"sigma must be -1 or +1, got {sigma!r}", fields=["sigma"])
    if not (math.isfinite(K) and K >= 1.0):
        raise DomainError(f"K must be >= 1, got {K!r}", fields=["K"])
    if not (1.0 < p0 < ex.p_star_star):
        raise DomainError(f"p0 must lie in (1, p**) = (1, {ex.p_star_star:g}), got {p0!r}", fields=["p0"])
    if K == 1.0:
        a0 = (ex.p_S - p0) / 2.0 if sigma == -1 else (ex.p_star_star - p0) / 2.0
    else:
        a0 = (ex.p_star_star - p0) / 2.0 * theta(K)
    return Cor0Params(a0=a0, p_star_star=ex.p_star_star, p_S=ex.p_S, K=float(K), sigma=int(sigma))


def check_coupled_log(
    p0: float,
    a: float,
    K: float,
    sigma: int,
    lam: float,
    n: int,
    geometry: Geometry | str = Geometry.WHOLE,
    scan: ScanConfig | None = None,
) -> CheckVerdict:
    """sigma a > 0, |a| < a0 and 0 < lam < lambda0(|a| / a0)."""
    scan = scan or ScanConfig.from_settings()
    params = cor0_params(p0, K, sigma, n, geometry)
    rho = abs(a) / params.a0 if params.a0 > 0.0 else math.inf
    lam0 = params.lambda0(rho) if rho <= 1.0 else 0.0
    conds = [
        condition("sigma a > 0", sigma * a, scan.tol, witness=Witness((), a, "sigma a > 0")),
        condition("|a| < a0", params.a0 - abs(a), scan.tol, witness=Witness((), a, "|a| < a0")),
        condition("lam > 0", lam, scan.tol, witness=Witness((), lam, "lam > 0")),
        condition("lam < lambda0", lam0 - lam, scan.tol, witness=Witness((rho,), lam, "lam < lambda0(rho)")),
    ]
    return aggregate(
        TheoremId.COR_LOG,
        conds,
        scan=scan.describe(),
        values={"a0": params.a0, "rho": rho, "lambda0": lam0, "curve": params.curve()},
    )


def check_sum_positivity(g: ScalarNonlin, lam: float, M: float, scan: ScanConfig | None = None) -> CheckVerdict:
    """
    For f = grad(g(u)^2 + g(v)^2 - 2 lam g(u) g(v)) on [0, M]^2:

        f1 + f2 >= 2(1 - lam)(g'(u) g(u) + g'(v) g(v)) >= 0
        u f1 + v f2 >= 2(1 - lam)(u g'(u) g(u) + v g'(v) g(v))
    """
    scan = scan or ScanConfig.from_settings()
    grid = square_grid(M)
    u, v = grid.U
    dg = g.derivative()
    with np.errstate(all="ignore"):
        gu, gv = g.extended(u), g.extended(v)
        du = np.where(u > 0.0, dg.raw(np.where(u > 0.0, u, 1.0)), dg.value_at_zero)
        dv = np.where(v > 0.0, dg.raw(np.where(v > 0.0, v, 1.0)), dg.value_at_zero)
        f1 = 2.0 * du * (gu - lam * gv)
        f2 = 2.0 * dv * (gv - lam * gu)
        diag = du * gu + dv * gv
        weighted = u * du * gu + v * dv * gv
        scale = np.maximum(np.abs(f1) + np.abs(f2), 1e-300)
        checks = {
            "f1 + f2 >= 2(1-lam)(g'g)(u) + (g'g)(v)": (f1 + f2 - 2.0 * (1.0 - lam) * diag) / scale,
            "(g'g)(u) + (g'g)(v) >= 0": diag / np.maximum(np.abs(diag), 1e-300),
            "u f1 + v f2 >= 2(1-lam)(u g'g(u) + v g'g(v))": (u * f1 + v * f2 - 2.0 * (1.0 - lam) * weighted)
            / np.maximum(u * np.abs(f1) + v * np.abs(f2), 1e-300),
        }
    conds = []
    for name, values in checks.items():
        i = _argext(values, maximize=False)
        conds.append(
            condition(name, float(values[i]), scan.tol, strict=False, witness=Witness(_point(grid, i), float(values[i]), name))
        )
    return aggregate(TheoremId.COR_LOG, conds, scan={**scan.describe(), "M": float(M)}, values={"g": g.text, "lam": lam})


# =====================================================================================================================
# Proportional systems
# =====================================================================================================================


def default_epsilon(S: SystemNonlin) -> float:
    """0 when lam > 0; otherwise half of k(0) when that is positive, else 1e-3."""
    parts = _proportional_parts(S)
    if parts.lam > 0.0:
        return 0.0
    k0 = parts.k.value_at_zero
    return 0.5 * k0 if k0 > 0.0 else 1e-3


def _proportional_parts(S: SystemNonlin):
    if S.kind is not SystemKind.PROPORTIONAL or S.proportional is None:
        raise DomainError(f"system {S.describe()} is not of proportional type", fields=["kind"])
    return S.proportional


def _diagonal(S: SystemNonlin) -> ScalarNonlin:
    """h(s) = phi(s, s) k(s) g(s)."""
    parts = _proportional_parts(S)
    expr = make_product([parts.phi.rename({"v": "u"}), parts.k.expr, parts.g.expr])
    return ScalarNonlin.from_expr(expr, var="u")


def _convexity_margin(h: ScalarNonlin, grid: np.ndarray) -> tuple[float, float]:
    """min over the grid of the second divided difference scaled by s^2 / |h|; returns (margin, at)."""
    s0, s1, s2 = grid[:-2], grid[1:-1], grid[2:]
    h0, h1, h2 = h.raw(s0), h.raw(s1), h.raw(s2)
    with np.errstate(all="ignore"):
        dd2 = 2.0 * ((h2 - h1) / (s2 - s1) - (h1 - h0) / (s1 - s0)) / (s2 - s0)
        rel = dd2 * s1**2 / np.maximum(np.abs(h1), 1e-300)
    i = _argext(rel, maximize=False)
    return float(rel[i]), float(s1[i])


def check_proportional(
    S: SystemNonlin,
    eps: float | None = None,
    geometry: Geometry | str = Geometry.WHOLE,
    n: int = 3,
    M: float = 1.0,
    scan: ScanConfig | None = None,
) -> CheckVerdict:
    """
    Hypotheses of the proportionality method and of the resulting Liouville theorem.

    Args:
        eps: the shift in k~ = k - eps; must be 0 when lam > 0 and positive when lam = 0
            (None picks `default_epsilon`).
    """
    scan = scan or ScanConfig.from_settings()
    parts = _proportional_parts(S)
    geometry = Geometry(geometry)
    n = require_int_at_least(n, 1, "n")
    lam = parts.lam
    eps = default_epsilon(S) if eps is None else float(eps)
    if lam > 0.0 and eps != 0.0:
        raise ParameterRangeError(f"eps must be 0 when lam > 0, got {eps!r}", fields=["eps"])
    if lam == 0.0 and not eps > 0.0:
        raise ParameterRangeError(f"eps must be > 0 when lam = 0, got {eps!r}", fields=["eps"])

    grid = scan.grid()
    k, g = parts.k, parts.g
    conds: list[ConditionResult] = []

    # 1) phi >= c_M > 0 on [0, M]^2
    square = square_grid(M, 65)
    env = {"u": square.U[0], "v": square.U[1]}
    with np.errstate(all="ignore"):
        phi = np.broadcast_to(np.asarray(parts.phi.evaluate(env), dtype=float), square.norm.shape)
    i = _argext(phi, maximize=False)
    conds.append(condition("phi >= c_M > 0", float(phi[i]), scan.tol, witness=Witness(_point(square, i), float(phi[i]), "phi(u, v) >= c_M > 0")))

    # 2) g(0) = 0 and g > 0
    conds.append(
        condition("g(0) = 0", -abs(g.value_at_zero), scan.tol, strict=False, witness=Witness((0.0,), g.value_at_zero, "g(0) = 0"))
    )
    gv = g.raw(grid)
    i = _argext(gv, maximize=False)
    conds.append(condition("g > 0", float(gv[i]), 0.0, witness=Witness((float(grid[i]),), float(gv[i]), "g(s) > 0")))

    # 3) varphi = k g (lam > 0) or g (lam = 0) strictly increasing
    kv = k.raw(grid)
    dk, dg = k.derivative().raw(grid), g.derivative().raw(grid)
    with np.errstate(all="ignore"):
        if lam > 0.0:
            log_slope = grid * (dk * gv + kv * dg) / np.abs(kv * gv)
        else:
            log_slope = grid * dg / np.abs(gv)
    i = _argext(log_slope, maximize=False)
    conds.append(
        condition("varphi' > 0", float(log_slope[i]), scan.tol, witness=Witness((float(grid[i]),), float(log_slope[i]), "s varphi'(s) / varphi(s) > 0"))
    )

    # 4) k~(0) >= 0 and k~ / g nonincreasing
    k0 = k.value_at_zero - eps
    conds.append(condition("k~(0) >= 0", k0, scan.tol, strict=False, witness=Witness((0.0,), k0, "k(0) - eps >= 0")))

    def normalized_slope(s: np.ndarray) -> np.ndarray:
        kt = k.raw(s) - eps
        dks = k.derivative().raw(s)
        gs, dgs = g.raw(s), g.derivative().raw(s)
        with np.errstate(all="ignore"):
            return s * (dks * gs - kt * dgs) / (gs * np.maximum(np.maximum(np.abs(kt), s * np.abs(dks)), 1e-300))

    sup = scan_extremum(normalized_slope, grid, maximize=True, exclude=sorted(set(k.kink_points) | set(g.kink_points)))
    conds.append(
        condition(
            "k~ / g nonincreasing",
            -sup.value,
            scan.tol,
            strict=False,
            witness=Witness((sup.at,), sup.value, "(k - eps) / g nonincreasing"),
        )
    )

    # 5) k > 0 and lam != 1
    i = _argext(kv, maximize=False)
    conds.append(condition("k > 0", float(kv[i]), 0.0, witness=Witness((float(grid[i]),), float(kv[i]), "k(s) > 0")))
    conds.append(condition("lam != 1", abs(lam - 1.0), scan.tol, witness=Witness((), lam, "lam != 1")))

    # 6) extra hypothesis on h(s) = phi(s, s) k(s) g(s) for lam < 1
    values: dict[str, object] = {"lam": lam, "eps": eps, "geometry": str(geometry), "M": float(M)}
    if lam < 1.0:
        h = _diagonal(S)
        values["h"] = h.text
        if geometry is Geometry.WHOLE:
            if n >= 3:
                b = check_theorem_B(h, n, scan)
                conds.append(
                    ConditionResult(
                        "s^-p_S h nonincreasing nonconstant",
                        b.holds,
                        b.margin,
                        b.witnesses[0] if b.witnesses else None,
                        {"sup_log_derivative": b.values.get("sup_log_derivative")},
                    )
                )
            else:
                conds.append(ConditionResult("s^-p_S h nonincreasing nonconstant", Holds.INDETERMINATE, math.nan, detail={"reason": "needs n >= 3"}))
        elif n >= 2:
            margin, at = _convexity_margin(h, grid)
            conds.append(
                condition("h convex", margin, CONVEXITY_RTOL, strict=False, witness=Witness((at,), margin, "h'' >= 0"))
            )
        else:
            conds.append(ConditionResult("h convex", Holds.INDETERMINATE, math.nan, detail={"reason": "needs n >= 2"}))

    return aggregate(TheoremId.PROPORTIONAL, conds, scan=scan.describe(), values=values)


# =====================================================================================================================
# Lane-Emden region
# =====================================================================================================================


def lane_emden_region(p: float, q: float, n: int, scan: ScanConfig | None = None) -> CheckVerdict:
    """
    Position of (p, q) relative to the Lane-Emden hyperbola 1/(p+1) + 1/(q+1) = (n-2)/n.

    Scaling exponents alpha = 2(p+1)/(pq-1), beta = 2(q+1)/(pq-1). Nonexistence is certified by
    p, q <= p_S (not both equal to p_S), by max(alpha, beta) >= n - 2, or, below the hyperbola,
    for n <= 4. On or above the hyperbola positive solutions exist.
    """
    scan = scan or ScanConfig.from_settings()
    n = require_int_at_least(n, 1, "n")
    p, q = float(require_positive(p, "p")), float(require_positive(q, "q"))
    if not p * q > 1.0:
        raise ParameterRangeError(f"need pq > 1, got p={p!r}, q={q!r}", fields=["p", "q"])
    ex = exponents(n)
    lhs = 1.0 / (p + 1.0) + 1.0 / (q + 1.0)
    rhs = (n - 2.0) / n
    margin = lhs - rhs
    alpha = 2.0 * (p + 1.0) / (p * q - 1.0)
    beta = 2.0 * (q + 1.0) / (p * q - 1.0)
    if margin > scan.tol:
        status = "subcritical"
    elif margin < -scan.tol:
        status = "supercritical"
    else:
        status = "critical"
    sobolev_flag = p <= ex.p_S and q <= ex.p_S and not (p == ex.p_S and q == ex.p_S)
    scaling_flag = max(alpha, beta) >= n - 2.0

    witness = Witness((p, q), lhs, "1/(p+1) + 1/(q+1) > (n-2)/n", status)
    hyperbola = ConditionResult("below hyperbola", Holds.YES if status == "subcritical" else Holds.NO, margin, witness)
    if sobolev_flag or scaling_flag or n <= 4:
        known = ConditionResult("nonexistence known", Holds.YES, margin, detail={"sobolev": sobolev_flag, "scaling": scaling_flag})
    else:
        known = ConditionResult("nonexistence known", Holds.INDETERMINATE, math.nan, detail={"sobolev": False, "scaling": False})
    return aggregate(
        TheoremId.LANE_EMDEN_REGION,
        [hyperbola, known] if status == "subcritical" else [hyperbola],
        scan=scan.describe(),
        values={
            "alpha": alpha,
            "beta": beta,
            "alpha_plus_beta": alpha + beta,
            "hyperbola_lhs": lhs,
            "hyperbola_rhs": rhs,
            "status": status,
            "sobolev_flag": sobolev_flag,
            "scaling_flag": scaling_flag,
        },
        margin=margin,
    )
