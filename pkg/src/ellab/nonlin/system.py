"""
Vector nonlinearities f: K -> R^m (m = 1 or 2) with structural templates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property

import numpy as np

from ellab.exceptions import DomainError, ParameterRangeError
from ellab.validators.numeric_validators import require_nonnegative, require_positive

from .expr import Const, Expr, make_product, make_sum
from .scalar import ScalarNonlin

logger = logging.getLogger(__name__)

VARIABLES = ("u", "v")

# sample points used by the construction checks
_CHECK_AXIS = np.geomspace(1e-3, 1e3, 7)
_SYMMETRY_RTOL = 1e-5


class SystemKind(StrEnum):
    SCALAR = "scalar"
    GENERIC = "generic"
    GRADIENT = "gradient"
    LANE_EMDEN = "lane-emden"
    PROPORTIONAL = "proportional"


@dataclass(frozen=True)
class ProportionalParts:
    """phi(u, v), k, g and lambda of the proportional template."""

    phi: Expr
    k: ScalarNonlin
    g: ScalarNonlin
    lam: float


@dataclass(frozen=True)
class SystemNonlin:
    """
    f(U) = (f_1(U), ..., f_m(U)) with diagonal diffusion D = diag(d_i).

    Use the classmethod constructors; they run the template checks.
    """

    kind: SystemKind
    components: tuple[Expr, ...]
    variables: tuple[str, ...]
    diffusion: tuple[float, ...]
    potential: Expr | None = None
    scalar: ScalarNonlin | None = None
    lane_emden: tuple[ScalarNonlin, ScalarNonlin] | None = None
    proportional: ProportionalParts | None = None
    label: str | None = field(default=None, compare=False)

    # =================================================================================================================
    # Constructors
    # =================================================================================================================

    @classmethod
    def from_scalar(cls, f: ScalarNonlin, *, d: float = 1.0) -> "SystemNonlin":
        f = f.renamed("u")
        return cls(
            kind=SystemKind.SCALAR,
            components=(f.expr,),
            variables=("u",),
            diffusion=(require_positive(d, "d"),),
            scalar=f,
            label=f.text,
        )

    @classmethod
    def generic(cls, f1: Expr, f2: Expr, *, diffusion=(1.0, 1.0), label: str | None = None) -> "SystemNonlin":
        system = cls(
            kind=SystemKind.GENERIC,
            components=(f1, f2),
            variables=VARIABLES,
            diffusion=_diffusion(diffusion, 2),
            label=label,
        )
        system._check_finite()
        return system

    @classmethod
    def gradient(cls, F: Expr, *, m: int = 2, diffusion=None, label: str | None = None) -> "SystemNonlin":
        """Components are the symbolic partial derivatives of the potential F."""
        variables = VARIABLES[:m]
        extra = F.variables() - set(variables)
        if extra:
            raise DomainError(f"potential uses unknown variables {sorted(extra)}", fields=sorted(extra))
        system = cls(
            kind=SystemKind.GRADIENT,
            components=tuple(F.diff(x) for x in variables),
            variables=variables,
            diffusion=_diffusion(diffusion or (1.0,) * m, m),
            potential=F,
            label=label,
        )
        system._check_finite()
        if m == 2:
            system._check_symmetry()
        return system

    @classmethod
    def lane_emden_pair(cls, f1: ScalarNonlin, f2: ScalarNonlin, *, diffusion=(1.0, 1.0)) -> "SystemNonlin":
        """-Delta u = f1(v), -Delta v = f2(u)."""
        f1 = f1.renamed("v")
        f2 = f2.renamed("u")
        return cls(
            kind=SystemKind.LANE_EMDEN,
            components=(f1.expr, f2.expr),
            variables=VARIABLES,
            diffusion=_diffusion(diffusion, 2),
            lane_emden=(f1, f2),
            label=f"({f1.text}, {f2.text})",
        )

    @classmethod
    def proportional_system(
        cls, phi: Expr, k: ScalarNonlin, g: ScalarNonlin, lam: float, *, diffusion=(1.0, 1.0)
    ) -> "SystemNonlin":
        """
        f1 = phi(u, v) k(u) (g(v) - lam g(u)),  f2 = phi(u, v) k(v) (g(u) - lam g(v)).
        """
        require_nonnegative(lam, "lam")
        k_u, g_u = k.renamed("u"), g.renamed("u")
        k_v, g_v = k_u.expr.rename({"u": "v"}), g_u.expr.rename({"u": "v"})
        f1 = make_product([phi, k_u.expr, make_sum([g_v, make_product([Const(-lam), g_u.expr])])])
        f2 = make_product([phi, k_v, make_sum([g_u.expr, make_product([Const(-lam), g_v])])])
        system = cls(
            kind=SystemKind.PROPORTIONAL,
            components=(f1, f2),
            variables=VARIABLES,
            diffusion=_diffusion(diffusion, 2),
            proportional=ProportionalParts(phi=phi, k=k_u, g=g_u, lam=float(lam)),
        )
        system._check_finite()
        return system

    # =================================================================================================================
    # Evaluation
    # =================================================================================================================

    @property
    def m(self) -> int:
        return len(self.components)

    def env(self, U) -> dict[str, np.ndarray]:
        U = np.asarray(U, dtype=float)
        if U.shape[0] != self.m:
            raise ParameterRangeError(f"expected {self.m} components, got {U.shape[0]}", fields=["U"])
        return {name: U[i] for i, name in enumerate(self.variables)}

    def evaluate(self, U, side: int = 0) -> np.ndarray:
        """f(U) for U of shape (m, ...); returns shape (m, ...)."""
        env = self.env(U)
        shape = np.shape(env[self.variables[0]])
        with np.errstate(all="ignore"):
            return np.stack([np.broadcast_to(np.asarray(c.evaluate(env, side), dtype=float), shape) for c in self.components])

    def extended(self, U) -> np.ndarray:
        """f(U+), the extension by zero used for Newton iterates leaving the cone K."""
        U = np.maximum(np.asarray(U, dtype=float), 0.0)
        out = self.evaluate(U)
        return np.where(np.isfinite(out), out, 0.0)

    @cached_property
    def jacobian(self) -> tuple[tuple[Expr, ...], ...]:
        return tuple(tuple(c.diff(x) for x in self.variables) for c in self.components)

    def jacobian_values(self, U) -> np.ndarray:
        """Array of shape (m, m, ...) with d f_i / d u_j at U+."""
        U = np.maximum(np.asarray(U, dtype=float), 0.0)
        env = self.env(U)
        shape = np.shape(env[self.variables[0]])
        with np.errstate(all="ignore"):
            rows = [
                np.stack([np.broadcast_to(np.asarray(d.evaluate(env), dtype=float), shape) for d in row])
                for row in self.jacobian
            ]
        out = np.stack(rows)
        return np.where(np.isfinite(out), out, 0.0)

    def potential_values(self, U) -> np.ndarray:
        if self.potential is None:
            raise DomainError("system has no potential", fields=["potential"])
        env = self.env(U)
        shape = np.shape(env[self.variables[0]])
        with np.errstate(all="ignore"):
            return np.broadcast_to(np.asarray(self.potential.evaluate(env), dtype=float), shape)

    def describe(self) -> str:
        if self.label:
            return self.label
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    # =================================================================================================================
    # Checks
    # =================================================================================================================

    def _sample_points(self) -> np.ndarray:
        if self.m == 1:
            return _CHECK_AXIS[None, :]
        uu, vv = np.meshgrid(_CHECK_AXIS, _CHECK_AXIS, indexing="ij")
        return np.stack([uu.ravel(), vv.ravel()])

    def _check_finite(self) -> None:
        values = self.evaluate(self._sample_points())
        if not np.all(np.isfinite(values)):
            raise DomainError(f"system {self.describe()} is not finite on the sample grid", fields=list(self.variables))

    def _check_symmetry(self) -> None:
        """d f1 / dv and d f2 / du agree by central differences (f is a gradient)."""
        U = self._sample_points()
        h = 1e-6 * np.maximum(1.0, np.abs(U))
        e_u = np.stack([h[0], np.zeros_like(h[0])])
        e_v = np.stack([np.zeros_like(h[1]), h[1]])
        d1_dv = (self.evaluate(U + e_v)[0] - self.evaluate(U - e_v)[0]) / (2 * h[1])
        d2_du = (self.evaluate(U + e_u)[1] - self.evaluate(U - e_u)[1]) / (2 * h[0])
        scale = np.maximum(np.maximum(np.abs(d1_dv), np.abs(d2_du)), 1e-12)
        rel = np.abs(d1_dv - d2_du) / scale
        ok = np.isfinite(rel)
        if ok.any() and float(np.max(rel[ok])) > _SYMMETRY_RTOL:
            worst = int(np.argmax(np.where(ok, rel, -1.0)))
            raise DomainError(
                f"gradient symmetry check failed at U=({U[0, worst]:.4g}, {U[1, worst]:.4g})",
                fields=["potential"],
            )


def _diffusion(values, m: int) -> tuple[float, ...]:
    values = tuple(float(v) for v in values)
    if len(values) != m:
        raise ParameterRangeError(f"need {m} diffusion entries, got {len(values)}", fields=["diffusion"])
    return tuple(require_positive(v, f"d{i + 1}") for i, v in enumerate(values))
