"""
Explicit radial solutions of the form u(r) = A (1 + lam r^2)^(-beta) and their ODE residuals.

Three families are shipped:

    bubble(n)                 A = 1, lam = 1/(n(n-2)), beta = (n-2)/2        f = u^p_S
    benchmark_solution(n, p)  A = 1, lam = (p-1)^2/(4p), beta = 1/(p-1)      f = (K0 + min(1, u^(p-1))) u^p
    uk_family(n, k)           u_k^(p_k-1) = (2k p_k/(n-2)) xi_k^2/(xi_k^2 + r^2)  f = u^p_k + u^q_k

All derivatives are analytic; u'/r is evaluated in closed form so the Laplacian is regular at r = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ellab.nonlin.presets import benchmark, power_nonlin, uk_nonlinearity
from ellab.nonlin.scalar import ScalarNonlin
from ellab.validators.numeric_validators import require_int_at_least, require_nonnegative, require_positive

from .profile import Provenance, RadialProfile

logger = logging.getLogger(__name__)

DEFAULT_RMAX = 10.0
DEFAULT_POINTS = 2001


@dataclass(frozen=True)
class ClosedForm:
    """u(r) = amplitude * (1 + lam r^2)^(-beta) in dimension n."""

    name: str
    n: int
    amplitude: float
    lam: float
    beta: float
    params: dict[str, float] = field(default_factory=dict)

    @classmethod
    def zero(cls, n: int) -> "ClosedForm":
        return cls(name="zero", n=n, amplitude=0.0, lam=0.0, beta=0.0)

    def _w(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return 1.0 + self.lam * r * r

    def value(self, r) -> np.ndarray:
        return self.amplitude * self._w(r) ** (-self.beta)

    def derivative_over_r(self, r) -> np.ndarray:
        """u'(r) / r, finite at r = 0."""
        return -2.0 * self.amplitude * self.beta * self.lam * self._w(r) ** (-self.beta - 1.0)

    def derivative(self, r) -> np.ndarray:
        return np.asarray(r, dtype=float) * self.derivative_over_r(r)

    def second_derivative(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        w = self._w(r)
        A, b, lam = self.amplitude, self.beta, self.lam
        return -2.0 * A * b * lam * w ** (-b - 1.0) + 4.0 * A * b * (b + 1.0) * lam**2 * r**2 * w ** (-b - 2.0)

    def laplacian(self, r) -> np.ndarray:
        return self.second_derivative(r) + (self.n - 1) * self.derivative_over_r(r)

    @property
    def center(self) -> float:
        return self.amplitude

    def profile(self, radii) -> RadialProfile:
        radii = np.asarray(radii, dtype=float)

        def dense(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            return self.value(x)[None, :], self.derivative(x)[None, :]

        return RadialProfile(
            n=self.n,
            r=radii,
            values=self.value(radii)[None, :],
            derivs=self.derivative(radii)[None, :],
            provenance=Provenance.CLOSED_FORM,
            dense=dense,
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "amplitude": self.amplitude,
            "lam": self.lam,
            "beta": self.beta,
            "params": dict(self.params),
        }


# =====================================================================================================================
# Families
# =====================================================================================================================


def bubble(n: int) -> ClosedForm:
    """Critical bubble (1 + r^2/(n(n-2)))^(-(n-2)/2), a solution of -Delta u = u^((n+2)/(n-2))."""
    n = require_int_at_least(n, 3, "n")
    return ClosedForm(name="bubble", n=n, amplitude=1.0, lam=1.0 / (n * (n - 2)), beta=(n - 2) / 2.0)


def bubble_nonlinearity(n: int) -> ScalarNonlin:
    n = require_int_at_least(n, 3, "n")
    return power_nonlin((n + 2) / (n - 2))


@dataclass(frozen=True)
class BenchmarkSolution:
    """(1 + lam r^2)^(-1/(p-1)) together with the K0 at which it solves the benchmark equation."""

    profile: ClosedForm
    K0: float

    def nonlinearity(self) -> ScalarNonlin:
        return benchmark(self.profile.params["p"], self.K0)


def benchmark_solution(n: int, p: float) -> BenchmarkSolution:
    """
    Explicit solution of -Delta u = (K0 + min(1, u^(p-1))) u^p with u(0) = 1.

    K0 = n(p-1)/(2p) - 1 must be positive, i.e. p > n/(n-2).
    """
    n = require_int_at_least(n, 3, "n")
    p = float(require_positive(p, "p"))
    K0 = n * (p - 1.0) / (2.0 * p) - 1.0
    require_positive(K0, "K0")
    form = ClosedForm(
        name="benchmark",
        n=n,
        amplitude=1.0,
        lam=(p - 1.0) ** 2 / (4.0 * p),
        beta=1.0 / (p - 1.0),
        params={"p": p, "K0": K0},
    )
    return BenchmarkSolution(profile=form, K0=K0)


@dataclass(frozen=True)
class UkFamily:
    profile: ClosedForm
    k: int
    p: float
    q: float
    xi: float
    M: float

    @property
    def M_power(self) -> float:
        """M_k^(p_k - 1) = 2 k p_k / (n - 2)."""
        return self.M ** (self.p - 1.0)

    def nonlinearity(self) -> ScalarNonlin:
        return uk_nonlinearity(self.profile.n, self.k)

    def to_dict(self) -> dict:
        return {"k": self.k, "p": self.p, "q": self.q, "xi": self.xi, "M": self.M, "M_power": self.M_power}


def uk_family(n: int, k: int) -> UkFamily:
    """
    u_k with p_k = n/(n-2) + 1/k and q_k = 2 p_k - 1, solving -Delta u = u^p_k + u^q_k.

    xi_k = (n-2) / (k sqrt(p_k) (p_k - 1)); M_k = u_k(0).
    """
    n = require_int_at_least(n, 3, "n")
    k = require_int_at_least(k, 1, "k")
    p = n / (n - 2) + 1.0 / k
    q = 2.0 * p - 1.0
    xi = (n - 2) / (k * math.sqrt(p) * (p - 1.0))
    M_power = 2.0 * k * p / (n - 2)
    M = M_power ** (1.0 / (p - 1.0))
    form = ClosedForm(
        name="u_k",
        n=n,
        amplitude=M,
        lam=1.0 / xi**2,
        beta=1.0 / (p - 1.0),
        params={"k": float(k), "p": p, "q": q, "xi": xi},
    )
    return UkFamily(profile=form, k=k, p=p, q=q, xi=xi, M=M)


@dataclass(frozen=True, slots=True)
class UkBound:
    """Threshold on u^(p_k - 1) below which -Delta u = f_k has no nontrivial solution."""

    n: int
    k: int
    eps: float
    bound: float
    asymptotic: float
    M_power: float


def uk_nonexistence_bound(n: int, k: int, eps: float = 0.0) -> UkBound:
    """
    (2n/(p_k+1) - (n-2) - eps) / (n - 2 - 2n/(q_k+1)).

    `asymptotic` is the large-k behaviour of the same expression at eps = 0, n k/((n-1)(n-2)).
    The form 2n k/((n-2)(n-1)) that is sometimes quoted for it carries a spurious factor 2; expanding
    the ratio in 1/k gives the one used here.
    `M_power` is M_k^(p_k - 1) of the explicit solution, which always lies above the bound.
    """
    family = uk_family(n, k)
    eps = float(require_nonnegative(eps, "eps"))
    numerator = 2.0 * n / (family.p + 1.0) - (n - 2) - eps
    denominator = (n - 2) - 2.0 * n / (family.q + 1.0)
    return UkBound(
        n=n,
        k=family.k,
        eps=eps,
        bound=numerator / denominator,
        asymptotic=n * family.k / ((n - 1) * (n - 2)),
        M_power=family.M_power,
    )


# =====================================================================================================================
# Residuals
# =====================================================================================================================


@dataclass(frozen=True, slots=True)
class ResidualReport:
    """
    max_abs: max |-u'' - (n-1)u'/r - f(u)| over the grid.
    max_rel: the same pointwise residual divided by max(1, |f(u)|, |Delta u|).
    """

    max_abs: float
    at: float
    max_rel: float
    r_max: float
    points: int

    def to_dict(self) -> dict:
        return {"max_abs": self.max_abs, "at": self.at, "max_rel": self.max_rel, "r_max": self.r_max, "points": self.points}


def verify_closed_form(
    candidate: ClosedForm,
    f: ScalarNonlin,
    r_max: float = DEFAULT_RMAX,
    points: int = DEFAULT_POINTS,
) -> ResidualReport:
    """ODE residual of a closed-form profile on a uniform grid over [0, r_max] (r = 0 included)."""
    r_max = float(require_positive(r_max, "r_max"))
    points = require_int_at_least(points, 2, "points")
    r = np.linspace(0.0, r_max, points)
    lap = candidate.laplacian(r)
    rhs = np.asarray(f.extended(candidate.value(r)), dtype=float)
    residual = np.abs(-lap - rhs)
    scale = np.maximum(1.0, np.maximum(np.abs(rhs), np.abs(lap)))
    i = int(np.argmax(residual))
    report = ResidualReport(
        max_abs=float(residual[i]),
        at=float(r[i]),
        max_rel=float(np.max(residual / scale)),
        r_max=r_max,
        points=points,
    )
    logger.debug("radial.closed_form_residual", extra={"form": candidate.name, "expr": f.text, **report.to_dict()})
    return report
