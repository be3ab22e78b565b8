"""
Critical exponents and the benchmark thresholds.

    p_S  = (n+2)/(n-2)                         Sobolev exponent (+inf for n <= 2)
    p*   = p_S if n <= 4, (n-1)/(n-3) if n >= 5
    p**  = p* (whole space), n/(n-2) (half-space)
    kappa = n/(n-2)

For the benchmark f(u) = (K + min(1, u^(p-1))) u^p with kappa < p < p_S:

    K0 = ((n-2)p - n) / (2p)                          explicit solution exists
    K1 = 2((n-2)p - n) / ((n+2) - (n-2)p)             s^-p_S f nonincreasing
    K2 = (p+1)/(2p) K1                                scalar growth condition
    K3 = ((n-2)p - 2) / (2(n-2)p - n) K1              modified Gidas-Spruck condition
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import StrEnum

from ellab.exceptions import ParameterRangeError
from ellab.validators.numeric_validators import require_int_at_least


class Geometry(StrEnum):
    WHOLE = "whole"
    HALF = "half"


@dataclass(frozen=True, slots=True)
class Exponents:
    n: int
    geometry: Geometry
    p_S: float
    p_star: float
    p_star_star: float
    kappa: float

    def to_dict(self) -> dict:
        return asdict(self)


def sobolev_exponent(n: int) -> float:
    return math.inf if n <= 2 else (n + 2.0) / (n - 2.0)


def kappa_exponent(n: int) -> float:
    return math.inf if n <= 2 else n / (n - 2.0)


def exponents(n: int, geometry: Geometry | str = Geometry.WHOLE) -> Exponents:
    n = require_int_at_least(n, 1, "n")
    geometry = Geometry(geometry)
    p_S = sobolev_exponent(n)
    p_star = p_S if n <= 4 else (n - 1.0) / (n - 3.0)
    kappa = kappa_exponent(n)
    p_star_star = p_star if geometry is Geometry.WHOLE else kappa
    return Exponents(n=n, geometry=geometry, p_S=p_S, p_star=p_star, p_star_star=p_star_star, kappa=kappa)


@dataclass(frozen=True, slots=True)
class BenchmarkThresholds:
    n: int
    p: float
    K0: float
    K1: float
    K2: float
    K3: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.K0, self.K1, self.K2, self.K3)


def require_benchmark_window(n: int, p: float) -> None:
    n = require_int_at_least(n, 3, "n")
    lo, hi = kappa_exponent(n), sobolev_exponent(n)
    if not (lo < p < hi):
        raise ParameterRangeError(f"benchmark needs n/(n-2) < p < (n+2)/(n-2), i.e. p in ({lo:g}, {hi:g}); got {p!r}", fields=["p"])


def benchmark_thresholds(n: int, p: float) -> BenchmarkThresholds:
    require_benchmark_window(n, p)
    m = n - 2.0
    K0 = (m * p - n) / (2.0 * p)
    K1 = 2.0 * (m * p - n) / ((n + 2.0) - m * p)
    K2 = (p + 1.0) / (2.0 * p) * K1
    K3 = (m * p - 2.0) / (2.0 * m * p - n) * K1
    return BenchmarkThresholds(n=int(n), p=float(p), K0=K0, K1=K1, K2=K2, K3=K3)
