"""
Named nonlinearity families.

Each preset is a constructor taking real parameters and returning a ScalarNonlin or a
SystemNonlin. `PRESETS` maps the CLI name to the constructor and its default parameters;
`build_preset(name, params)` overlays user bindings (``--param K=1.5``) on the defaults.

Most families are written in the expression language and go through `parse_expr`, so what the
CLI prints is exactly what the parser accepts.
"""

from __future__ import annotations

import inspect
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from ellab.exceptions import ParameterRangeError, UnknownPresetError
from ellab.validators.numeric_validators import require_int_at_least, require_positive

from .expr import Const, make_product, make_sum, power
from .parser import parse_expr
from .scalar import ScalarNonlin
from .special import log_family
from .system import SystemNonlin

logger = logging.getLogger(__name__)


def _scalar(text: str, **params: float) -> ScalarNonlin:
    # the canonical printout (parameters substituted) doubles as the source text
    return ScalarNonlin.from_expr(parse_expr(text, params))


def _bind(text: str, params: Mapping[str, float]) -> str:
    """Human-readable source with the parameter values listed after it."""
    if not params:
        return text
    bound = ", ".join(f"{k}={v:.17g}" for k, v in sorted(params.items()))
    return f"{text} [{bound}]"


# =====================================================================================================================
# Scalar families
# =====================================================================================================================


def power_nonlin(p: float) -> ScalarNonlin:
    """u^p."""
    return _scalar("u^p", p=p)


def benchmark(p: float, K: float) -> ScalarNonlin:
    """(K + min(1, u^(p-1))) u^p."""
    require_positive(K, "K")
    return _scalar("(K + min(1, u^(p-1))) * u^p", p=p, K=K)


def benchmark_normalized(p: float, a: float) -> ScalarNonlin:
    """(1 + a min(1, u^(p-1))) u^p; the benchmark with K = 1/a after x -> x / sqrt(K)."""
    return _scalar("(1 + a*min(1, u^(p-1))) * u^p", p=p, a=a)


def power_log(p: float, a: float, K: float, sigma: int = 1) -> ScalarNonlin:
    """u^p log^a(K + u^sigma)."""
    text = "u^p * log(K + u)^a" if sigma == 1 else "u^p * log(K + u^-1)^a"
    return _scalar(text, p=p, a=a, K=K)


def uk_nonlinearity(n: int, k: int) -> ScalarNonlin:
    """u^p_k + u^q_k with p_k = n/(n-2) + 1/k, q_k = 2 p_k - 1."""
    n = require_int_at_least(n, 3, "n")
    k = require_int_at_least(k, 1, "k")
    p_k = n / (n - 2.0) + 1.0 / k
    return _scalar("u^pk + u^qk", pk=p_k, qk=2.0 * p_k - 1.0)


def coupled_log_scalar(p0: float, a: float, K: float, sigma: int, lam: float) -> ScalarNonlin:
    """Diagonal reduction f = 2 (1 - lam) g g' of the log-family gradient system."""
    g = log_family(p0, a, K, sigma)
    expr = make_product([Const(2.0 * (1.0 - lam)), g.expr, g.derivative().expr])
    return ScalarNonlin.from_expr(expr)


# =====================================================================================================================
# Systems
# =====================================================================================================================


def mixed_power_potential(
    alpha: float, beta: float, lam: float, mu: float, b: float, mixed: bool = False
) -> SystemNonlin:
    """
    Gradient system f = grad(G + H) with

        G = (u^(alpha+1) + v^(alpha+1) + 2 lam u^((alpha+1)/2) v^((alpha+1)/2)) / (alpha+1)
        H = b/(beta+1) (u^(beta+1) + v^(beta+1) + 2 mu u^((beta+1)/2) v^((beta+1)/2))
          | b u^((beta+1)/2) v^((beta+1)/2)                                          (mixed)
    """
    G = "(u^(alpha+1) + v^(alpha+1) + 2*lam*u^((alpha+1)/2)*v^((alpha+1)/2)) / (alpha+1)"
    if mixed:
        H = "b*u^((beta+1)/2)*v^((beta+1)/2)"
    else:
        H = "b/(beta+1) * (u^(beta+1) + v^(beta+1) + 2*mu*u^((beta+1)/2)*v^((beta+1)/2))"
    params = {"alpha": alpha, "beta": beta, "lam": lam, "mu": mu, "b": b}
    F = parse_expr(f"{G} + {H}", params)
    return SystemNonlin.gradient(F, label=_bind("grad(G + H)", {**params, "mixed": float(mixed)}))


def example_cubic_quintic(p: float, q: float, lam: float, mu: float, b: float) -> SystemNonlin:
    """grad(H1 + H2) with degrees p+1 and q+1; f0 ~ grad H1 at zero, f_inf ~ grad H2 at infinity."""
    return mixed_power_potential(p, q, lam, mu, b, mixed=False)


def coupled_log_system(p0: float, a: float, K: float, sigma: int, lam: float) -> SystemNonlin:
    """grad F with F = g(u)^2 + g(v)^2 - 2 lam g(u) g(v), g = s^((p0+1)/2) log^a(K + s^sigma)."""
    g_u = log_family(p0, a, K, sigma, var="u").expr
    g_v = g_u.rename({"u": "v"})
    F = make_sum([power(g_u, 2.0), power(g_v, 2.0), make_product([Const(-2.0 * lam), g_u, g_v])])
    label = _bind("grad(g(u)^2 + g(v)^2 - 2*lam*g(u)*g(v))", {"p0": p0, "a": a, "K": K, "sigma": sigma, "lam": lam})
    return SystemNonlin.gradient(F, label=label)


def example_log_system(p: float, a: float, K: float, lam: float, sigma: int = 1) -> SystemNonlin:
    """(2 g'(u)[g(u) - lam g(v)], 2 g'(v)[g(v) - lam g(u)]) with g = s^((p+1)/2) log^a(K + s^sigma); f+ = 2 g g'."""
    return coupled_log_system(p, a, K, sigma, lam)


def example_proportional_power(r: float, q: float, p: float, b: float, lam: float) -> SystemNonlin:
    """phi = 1, k = s^r + b s^q, g = s^p."""
    k = _scalar("u^r + b*u^q", r=r, q=q, b=b) if r != 0.0 else _scalar("1 + b*u^q", q=q, b=b)
    g = power_nonlin(p)
    return SystemNonlin.proportional_system(Const(1.0), k, g, lam)


def example_proportional_log(r: float, p: float, a: float, b: float, d: float, K: float, lam: float) -> SystemNonlin:
    """k = s^r log^a(K+s), g = s^p log^b(K+s), phi = log^-d(K + u + v)."""
    k = _scalar("u^r * log(K + u)^a", r=r, a=a, K=K) if r != 0.0 else _scalar("log(K + u)^a", a=a, K=K)
    g = _scalar("u^p * log(K + u)^b", p=p, b=b, K=K)
    phi = parse_expr("log(K + u + v)^(-d)", {"K": K, "d": d})
    return SystemNonlin.proportional_system(phi, k, g, lam)


def proportional_counterexample_system(p: float, q: float, lam: float) -> SystemNonlin:
    """phi = 1, k = s^p, g = s^q (the unbounded-solution family with p + q <= 1)."""
    return SystemNonlin.proportional_system(Const(1.0), power_nonlin(p), power_nonlin(q), lam)


def lane_emden_pair(p: float, q: float) -> SystemNonlin:
    """-Delta u = v^p, -Delta v = u^q."""
    return SystemNonlin.lane_emden_pair(power_nonlin(p), power_nonlin(q))


def lane_emden_log_pair(p: float, q: float, a: float, b: float, K: float, sigma: int = 1) -> SystemNonlin:
    """f1(v) = v^p log^a(K + v^sigma), f2(u) = u^q log^b(K + u^sigma)."""
    return SystemNonlin.lane_emden_pair(power_log(p, a, K, sigma), power_log(q, b, K, sigma))


# =====================================================================================================================
# Registry
# =====================================================================================================================


@dataclass(frozen=True)
class Preset:
    name: str
    build: Callable[..., ScalarNonlin | SystemNonlin]
    defaults: Mapping[str, float] = field(default_factory=dict)
    integer_params: frozenset[str] = frozenset()

    @property
    def help(self) -> str:
        doc = inspect.getdoc(self.build) or ""
        return doc.splitlines()[0] if doc else self.name


PRESETS: dict[str, Preset] = {
    preset.name: preset
    for preset in (
        Preset("power", power_nonlin, {"p": 3.0}),
        Preset("benchmark", benchmark, {"p": 2.5, "K": 0.2}),
        Preset("benchmark-normalized", benchmark_normalized, {"p": 2.5, "a": 5.0}),
        Preset("power-log", power_log, {"p": 2.0, "a": 0.5, "K": 2.0, "sigma": 1}, frozenset({"sigma"})),
        Preset("uk", uk_nonlinearity, {"n": 3, "k": 10}, frozenset({"n", "k"})),
        Preset(
            "coupled-log-scalar",
            coupled_log_scalar,
            {"p0": 2.0, "a": 0.5, "K": 1.0, "sigma": 1, "lam": 0.5},
            frozenset({"sigma"}),
        ),
        Preset("mixed-power", mixed_power_potential, {"alpha": 2.0, "beta": 3.0, "lam": 0.5, "mu": 0.5, "b": 1.0, "mixed": 0}),
        Preset("cubic-quintic", example_cubic_quintic, {"p": 3.0, "q": 5.0, "lam": 0.5, "mu": 0.5, "b": 1.0}),
        Preset(
            "coupled-log-system",
            coupled_log_system,
            {"p0": 2.0, "a": 0.5, "K": 1.0, "sigma": 1, "lam": 0.5},
            frozenset({"sigma"}),
        ),
        Preset("log-system", example_log_system, {"p": 2.0, "a": 0.5, "K": 2.0, "lam": 0.5, "sigma": 1}, frozenset({"sigma"})),
        Preset("proportional-power", example_proportional_power, {"r": 0.5, "q": 1.0, "p": 2.0, "b": 1.0, "lam": 0.5}),
        Preset(
            "proportional-log",
            example_proportional_log,
            {"r": 0.5, "p": 2.0, "a": 0.5, "b": 1.0, "d": 2.0, "K": 2.0, "lam": 0.5},
        ),
        Preset("proportional-counterexample", proportional_counterexample_system, {"p": 0.4, "q": 0.4, "lam": 1.0}),
        Preset("lane-emden", lane_emden_pair, {"p": 2.0, "q": 3.0}),
        Preset(
            "lane-emden-log",
            lane_emden_log_pair,
            {"p": 2.0, "q": 3.0, "a": 0.5, "b": 0.5, "K": 2.0, "sigma": 1},
            frozenset({"sigma"}),
        ),
    )
}


def build_preset(name: str, params: Mapping[str, float] | None = None) -> ScalarNonlin | SystemNonlin:
    """
    Instantiate preset `name` with `params` overriding its defaults.

    Raises:
        UnknownPresetError: no preset of that name.
        ParameterRangeError: a binding names a parameter the preset does not take, or an integer
            parameter gets a non-integral value.
    """
    preset = PRESETS.get(name)
    if preset is None:
        raise UnknownPresetError(name, PRESETS)
    params = dict(params or {})
    unknown = sorted(set(params) - set(preset.defaults))
    if unknown:
        raise ParameterRangeError(
            f"preset {name!r} takes {sorted(preset.defaults)}, got unknown {unknown}", fields=unknown
        )
    kwargs: dict[str, Any] = {**preset.defaults, **params}
    for key in preset.integer_params:
        value = float(kwargs[key])
        if not value.is_integer():
            raise ParameterRangeError(f"{key} must be an integer, got {value!r}", fields=[key])
        kwargs[key] = int(value)
    if "mixed" in kwargs:
        kwargs["mixed"] = bool(kwargs["mixed"])
    if "sigma" in kwargs and kwargs["sigma"] not in (-1, 1):
        raise ParameterRangeError(f"sigma must be -1 or +1, got {kwargs['sigma']!r}", fields=["sigma"])
    for key, value in kwargs.items():
        if isinstance(value, float) and not math.isfinite(value):
            raise ParameterRangeError(f"{key} must be finite", fields=[key])
    logger.debug("preset.build", extra={"preset": name, "params": kwargs})
    return preset.build(**kwargs)
