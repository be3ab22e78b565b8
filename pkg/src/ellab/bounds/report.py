"""
Universal-bound measurements on families of Dirichlet solutions, and decay scans.

Tested quantities (d = distance to the boundary, interior nodes only):

    scalar       f(u) d^2 / u                        on {u > 0}
    system       |f(U)| d^2 / |U|                    on {|U| >= Lambda}
    lane-emden   f2(u) d^2 / (h1^-1 o h2)(u)         on {u >= s0}
                 f1(v) d^2 / (h2^-1 o h1)(v)         on {v >= s0}

|.| is the max-norm over components, as in f+(Lambda) and the admissibility threshold of decay scans.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import Iterable, Sequence

import numpy as np

from ellab.config import get_settings
from ellab.exceptions import NewtonDivergenceError, ParameterRangeError, SingularJacobianError
from ellab.nonlin.scalar import ScalarNonlin
from ellab.nonlin.system import SystemKind, SystemNonlin
from ellab.validators.numeric_validators import require_int_at_least, require_nonnegative, require_positive

from .fd import DEFAULT_CELLS, BVPSolution, InitialGuess, solve_ball
from .hcalc import HCalculus, h_calculus

logger = logging.getLogger(__name__)


class BoundMode(StrEnum):
    SCALAR = "scalar"
    SYSTEM = "system"
    LANE_EMDEN = "lane-emden"


QUANTITIES = {
    BoundMode.SCALAR: "f(u) d^2 / u",
    BoundMode.SYSTEM: "|f(U)| d^2 / |U|",
    BoundMode.LANE_EMDEN: "f2(u) d^2 / (h1^-1 o h2)(u), f1(v) d^2 / (h2^-1 o h1)(v)",
}


@dataclass(frozen=True, slots=True)
class DomainBound:
    size: float
    sup: float
    at: float | None
    component: str | None
    nodes: int

    def to_dict(self) -> dict:
        return {"size": self.size, "sup": self.sup, "at": self.at, "component": self.component, "nodes": self.nodes}


@dataclass(frozen=True)
class BoundReport:
    """Per-domain sups of the tested quantity and the family ratio max / min."""

    mode: BoundMode
    quantity: str
    domains: tuple[DomainBound, ...]
    ratio: float
    lam: float | None = None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "quantity": self.quantity,
            "domains": [d.to_dict() for d in self.domains],
            "ratio": self.ratio,
            "lam": self.lam,
        }

    def to_rows(self) -> tuple[list[str], list[tuple]]:
        return ["size", "sup", "at", "nodes"], [(d.size, d.sup, d.at, d.nodes) for d in self.domains]


def _family_ratio(sups: Sequence[float]) -> float:
    positive = [s for s in sups if s > 0.0]
    if not positive:
        return 1.0
    if len(positive) < len(sups):
        return math.inf
    return max(positive) / min(positive)


def _sup(values: np.ndarray, mask: np.ndarray, r: np.ndarray) -> tuple[float, float | None, int]:
    count = int(mask.sum())
    if count == 0:
        return 0.0, None, 0
    masked = np.where(mask, values, -np.inf)
    i = int(np.argmax(masked))
    return float(masked[i]), float(r[i]), count


def _scalar_sup(solution: BVPSolution, f: ScalarNonlin) -> DomainBound:
    u = solution.values[0]
    d = solution.distance
    mask = (u > 0.0) & (d > 0.0)
    with np.errstate(all="ignore"):
        q = np.asarray(f.extended(u), dtype=float) * d**2 / np.where(mask, u, 1.0)
    value, at, count = _sup(q, mask, solution.r)
    return DomainBound(solution.size, value, at, "u" if count else None, count)


def _max_norm(U: np.ndarray) -> np.ndarray:
    return np.max(np.abs(U), axis=0)


def _system_sup(solution: BVPSolution, S: SystemNonlin, lam: float) -> DomainBound:
    U = solution.values
    d = solution.distance
    norm = _max_norm(U)
    mask = (norm >= lam) & (norm > 0.0) & (d > 0.0)
    with np.errstate(all="ignore"):
        fnorm = _max_norm(S.extended(U))
        q = fnorm * d**2 / np.where(mask, norm, 1.0)
    value, at, count = _sup(q, mask, solution.r)
    return DomainBound(solution.size, value, at, "U" if count else None, count)


def _lane_emden_sup(solution: BVPSolution, hcal: HCalculus) -> DomainBound:
    u, v = solution.values
    d = solution.distance
    with np.errstate(all="ignore"):
        q_u = np.asarray(hcal.bound_quantity_u(u), dtype=float) * d**2
        q_v = np.asarray(hcal.bound_quantity_v(v), dtype=float) * d**2
    mask_u = (u >= hcal.s0) & (d > 0.0) & np.isfinite(q_u)
    mask_v = (v >= hcal.s0) & (d > 0.0) & np.isfinite(q_v)
    value_u, at_u, count_u = _sup(q_u, mask_u, solution.r)
    value_v, at_v, count_v = _sup(q_v, mask_v, solution.r)
    if count_u == 0 and count_v == 0:
        return DomainBound(solution.size, 0.0, None, None, 0)
    if count_v == 0 or (count_u and value_u >= value_v):
        return DomainBound(solution.size, value_u, at_u, "u", count_u + count_v)
    return DomainBound(solution.size, value_v, at_v, "v", count_u + count_v)


def bound_report(
    solutions: Iterable[BVPSolution],
    mode: BoundMode | str,
    S: ScalarNonlin | SystemNonlin,
    hcal: HCalculus | None = None,
    lam: float | None = None,
) -> BoundReport:
    """
    Sup of the tested quantity on every solution of the family.

    Args:
        mode: scalar, system or lane-emden.
        S: the nonlinearity the solutions solve.
        hcal: h-calculus for lane-emden mode (built from S when omitted).
        lam: Omega_Lambda threshold for system mode (default Settings.OMEGA_LAMBDA).
    """
    mode = BoundMode(mode)
    solutions = list(solutions)
    if not solutions:
        raise ParameterRangeError("bound_report needs at least one solution", fields=["solutions"])

    match mode:
        case BoundMode.SCALAR:
            if isinstance(S, SystemNonlin):
                if S.scalar is None:
                    raise ParameterRangeError("scalar mode needs a scalar nonlinearity", fields=["mode"])
                S = S.scalar
            domains = [_scalar_sup(s, S) for s in solutions]
            lam = None
        case BoundMode.SYSTEM:
            system = SystemNonlin.from_scalar(S) if isinstance(S, ScalarNonlin) else S
            lam = float(require_nonnegative(lam if lam is not None else get_settings().OMEGA_LAMBDA, "lam"))
            domains = [_system_sup(s, system, lam) for s in solutions]
        case BoundMode.LANE_EMDEN:
            if hcal is None:
                if not isinstance(S, SystemNonlin) or S.kind != SystemKind.LANE_EMDEN or S.lane_emden is None:
                    raise ParameterRangeError("lane-emden mode needs a Lane-Emden pair", fields=["mode"])
                hcal = h_calculus(*S.lane_emden)
            domains = [_lane_emden_sup(s, hcal) for s in solutions]
            lam = None

    for domain in domains:
        if domain.nodes == 0:
            logger.warning(
                "bounds.empty_region",
                extra={"mode": mode.value, "size": domain.size, "lam": lam},
            )
    report = BoundReport(
        mode=mode,
        quantity=QUANTITIES[mode],
        domains=tuple(domains),
        ratio=_family_ratio([d.sup for d in domains]),
        lam=lam,
    )
    logger.info(
        "bounds.report",
        extra={"mode": mode.value, "sups": [d.sup for d in domains], "ratio": report.ratio},
    )
    return report


# =====================================================================================================================
# Decay scan
# =====================================================================================================================


class DecayStatus(StrEnum):
    ADMISSIBLE = "admissible"
    BRANCH_JUMP = "branch-jump"
    NO_SOLUTION = "no-solution"


@dataclass(frozen=True, slots=True)
class DecayRow:
    """
    center / max are those of the converged solution (NaN when Newton failed).

    eta is the empirical contribution to eta(R): the center value for admissible solutions
    (max |U| <= Lambda), 0 otherwise (sup over the empty set).
    """

    R: float
    status: DecayStatus
    center: float
    max: float
    eta: float
    iterations: int | None

    def to_dict(self) -> dict:
        return {
            "R": self.R,
            "status": self.status.value,
            "center": self.center,
            "max": self.max,
            "eta": self.eta,
            "iterations": self.iterations,
        }


@dataclass(frozen=True)
class DecayTable:
    lam: float
    boundary: float
    rows: tuple[DecayRow, ...]

    @property
    def eta(self) -> list[float]:
        return [row.eta for row in self.rows]

    def to_dict(self) -> dict:
        return {"lam": self.lam, "boundary": self.boundary, "rows": [row.to_dict() for row in self.rows]}

    def to_rows(self) -> tuple[list[str], list[tuple]]:
        return (
            ["R", "status", "center", "max", "eta"],
            [(row.R, row.status.value, row.center, row.max, row.eta) for row in self.rows],
        )


def decay_scan(
    S: ScalarNonlin | SystemNonlin,
    n: int,
    lam: float,
    boundary: float,
    radii: Iterable[float],
    *,
    cells: int = DEFAULT_CELLS,
) -> DecayTable:
    """
    Small-branch Dirichlet solutions on B_R with constant boundary value, R in decreasing order.

    Newton starts from the boundary lift. A converged solution with max |U| > lam is a branch jump
    (logged as a warning); a Newton failure means no admissible solution was found.
    """
    lam = float(require_positive(lam, "lam"))
    boundary = float(require_nonnegative(boundary, "boundary"))
    if boundary > lam:
        raise ParameterRangeError(f"boundary value must lie in [0, {lam:g}], got {boundary!r}", fields=["boundary"])
    n = require_int_at_least(n, 1, "n")
    radii = sorted((float(require_positive(R, "R")) for R in radii), reverse=True)

    rows = []
    for R in radii:
        try:
            solution = solve_ball(S, n, R, boundary, InitialGuess.zero(), cells=cells)
        except (NewtonDivergenceError, SingularJacobianError) as exc:
            rows.append(DecayRow(R, DecayStatus.NO_SOLUTION, math.nan, math.nan, 0.0, getattr(exc, "iterations", None)))
            continue
        norm = _max_norm(solution.values)
        center, top = float(norm[0]), float(np.max(norm))
        if top > lam:
            logger.warning("bounds.branch_jump", extra={"R": R, "max": top, "lam": lam})
            rows.append(DecayRow(R, DecayStatus.BRANCH_JUMP, center, top, 0.0, solution.iterations))
        else:
            rows.append(DecayRow(R, DecayStatus.ADMISSIBLE, center, top, center, solution.iterations))

    table = DecayTable(lam=lam, boundary=boundary, rows=tuple(rows))
    logger.info("bounds.decay_scan", extra={"radii": radii, "eta": table.eta})
    return table
