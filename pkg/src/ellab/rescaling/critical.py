"""
Critical limit of the u_k family.

    v_k(y) = M_k^-1 u_k(M_k^((1-q_k)/2) y)

solves -Delta v = M_k^(p_k-q_k) v^p_k + v^q_k with v_k(0) = 1; as k grows the first term
vanishes and q_k -> n+2 / n-2, so v_k approaches the critical bubble (1 + c y^2)^(-(n-2)/2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import curve_fit

from ellab.criteria.exponents import sobolev_exponent
from ellab.exceptions import ParameterRangeError
from ellab.nonlin.presets import power_nonlin
from ellab.radial.closed_forms import ClosedForm, uk_family, verify_closed_form
from ellab.validators.numeric_validators import require_int_at_least, require_positive

logger = logging.getLogger(__name__)

DEFAULT_KS = (10, 30, 100, 300)
DEFAULT_YMAX = 10.0
DEFAULT_POINTS = 2001


@dataclass(frozen=True, slots=True)
class BubbleFit:
    """Least-squares c of (1 + c y^2)^(-(n-2)/2) and the max deviation on the grid."""

    n: int
    c: float
    max_deviation: float
    exact_c: float

    def to_dict(self) -> dict:
        return {"n": self.n, "c": self.c, "max_deviation": self.max_deviation, "exact_c": self.exact_c}


def fit_bubble(values, y, n: int = 3) -> BubbleFit:
    y = np.asarray(y, dtype=float)
    values = np.asarray(values, dtype=float)
    n = require_int_at_least(n, 3, "n")
    if y.shape != values.shape or y.size < 2:
        raise ParameterRangeError("values and y must be matching arrays of at least two points", fields=["values", "y"])
    decay = (n - 2) / 2.0
    exact = 1.0 / (n * (n - 2))

    def model(x, c):
        return (1.0 + c * x**2) ** (-decay)

    (c,), _ = curve_fit(model, y, values, p0=[exact], bounds=([0.0], [np.inf]))
    deviation = float(np.max(np.abs(model(y, c) - values)))
    return BubbleFit(n=n, c=float(c), max_deviation=deviation, exact_c=exact)


@dataclass(frozen=True, slots=True)
class CriticalRow:
    k: int
    p: float
    q: float
    M: float
    v0: float
    residual: float
    fit: BubbleFit

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "p": self.p,
            "q": self.q,
            "M": self.M,
            "v0": self.v0,
            "residual": self.residual,
            "fit": self.fit.to_dict(),
        }


@dataclass(frozen=True)
class CriticalLimitTable:
    n: int
    y_max: float
    points: int
    rows: tuple[CriticalRow, ...]

    @property
    def residual_decreasing(self) -> bool:
        res = [row.residual for row in self.rows]
        return all(b < a for a, b in zip(res, res[1:]))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "y_max": self.y_max,
            "points": self.points,
            "rows": [row.to_dict() for row in self.rows],
            "residual_decreasing": self.residual_decreasing,
        }

    def to_rows(self) -> tuple[list[str], list[tuple]]:
        return (
            ["k", "v0", "residual", "c", "max_deviation"],
            [(row.k, row.v0, row.residual, row.fit.c, row.fit.max_deviation) for row in self.rows],
        )


def rescaled_uk(n: int, k: int) -> ClosedForm:
    """v_k as a closed form: amplitude 1, lam = M^(1-q) / xi^2, same decay exponent as u_k."""
    family = uk_family(n, k)
    form = family.profile
    return ClosedForm(
        name="v_k",
        n=form.n,
        amplitude=form.amplitude / family.M,
        lam=form.lam * family.M ** (1.0 - family.q),
        beta=form.beta,
        params={**form.params, "M": family.M},
    )


def critical_limit_check(
    n: int = 3,
    ks: Iterable[int] = DEFAULT_KS,
    *,
    y_max: float = DEFAULT_YMAX,
    points: int = DEFAULT_POINTS,
) -> CriticalLimitTable:
    """Residual of v_k in -Delta v = v^((n+2)/(n-2)) on [0, y_max] and the bubble fit, per k."""
    n = require_int_at_least(n, 3, "n")
    y_max = float(require_positive(y_max, "y_max"))
    points = require_int_at_least(points, 2, "points")
    ks = sorted({require_int_at_least(k, 1, "k") for k in ks})
    if not ks:
        raise ParameterRangeError("at least one k is needed", fields=["ks"])

    critical = power_nonlin(sobolev_exponent(n))
    y = np.linspace(0.0, y_max, points)
    rows = []
    for k in ks:
        family = uk_family(n, k)
        v = rescaled_uk(n, k)
        residual = verify_closed_form(v, critical, r_max=y_max, points=points)
        rows.append(
            CriticalRow(
                k=k,
                p=family.p,
                q=family.q,
                M=family.M,
                v0=float(v.center),
                residual=residual.max_abs,
                fit=fit_bubble(v.value(y), y, n),
            )
        )
    table = CriticalLimitTable(n=n, y_max=y_max, points=points, rows=tuple(rows))
    logger.info(
        "rescaling.critical_limit",
        extra={"n": n, "ks": ks, "residuals": [row.residual for row in rows]},
    )
    return table
