"""
Finite-difference Dirichlet solves for -d_i Delta u_i = f_i(U) on balls (radial) and slabs.

Discretization on r_j = j h, j = 0..N, h = R / N:

    j >= 1:  -(u_{j+1} - 2u_j + u_{j-1}) / h^2 - (n-1)/r_j (u_{j+1} - u_{j-1}) / (2h)
    j = 0:   -2n (u_1 - u_0) / h^2                       (ghost node u_{-1} = u_1)
    j = N:   u_N = b

Newton steps are solved with scipy.sparse (block matrix, spsolve) and damped by halving until
the residual max-norm decreases. A slab of height H is the n = 1 problem on its half height.
"""

from __future__ import annotations

import logging
import time
import warnings
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Sequence

import numpy as np
from scipy.sparse import bmat, diags
from scipy.sparse.linalg import MatrixRankWarning, spsolve

from ellab.config import get_settings
from ellab.exceptions import NewtonDivergenceError, ParameterRangeError, SingularJacobianError
from ellab.nonlin.scalar import ScalarNonlin
from ellab.nonlin.system import SystemNonlin
from ellab.radial.profile import Provenance, RadialProfile
from ellab.validators.numeric_validators import require_int_at_least, require_nonnegative, require_positive

logger = logging.getLogger(__name__)

MIN_CELLS = 64
DEFAULT_CELLS = 256
# smallest damping factor tried before giving up
MIN_STEP = 2.0**-30
# residuals below this many ulps of the stencil magnitude are round-off
ROUNDOFF_ULPS = 64.0


class GuessKind(StrEnum):
    ZERO = "zero"
    CONSTANT = "constant"
    BUMP = "bump"
    PROFILE = "profile"


@dataclass(frozen=True)
class InitialGuess:
    """
    Newton starting point. Several solutions usually exist (zero vs ground state), so the guess
    selects the branch.

        zero       the boundary value everywhere (boundary lift)
        constant   c in the interior
        bump       b + amplitude (1 - (r / (width R))^2)^2 inside width * R
        profile    a supplied radial profile, stretched onto [0, R]
    """

    kind: GuessKind = GuessKind.ZERO
    amplitude: float = 0.0
    width: float = 1.0
    profile: RadialProfile | None = field(default=None, repr=False)

    @classmethod
    def zero(cls) -> "InitialGuess":
        return cls()

    @classmethod
    def constant(cls, c: float) -> "InitialGuess":
        return cls(kind=GuessKind.CONSTANT, amplitude=float(c))

    @classmethod
    def bump(cls, amplitude: float, width: float = 1.0) -> "InitialGuess":
        return cls(kind=GuessKind.BUMP, amplitude=float(amplitude), width=float(require_positive(width, "width")))

    @classmethod
    def from_profile(cls, profile: RadialProfile) -> "InitialGuess":
        return cls(kind=GuessKind.PROFILE, profile=profile)

    @classmethod
    def parse(cls, text: str) -> "InitialGuess":
        """'zero', 'const:C', 'bump:A' or 'bump:A,W'."""
        kind, _, args = text.strip().partition(":")
        try:
            numbers = [float(x) for x in args.split(",")] if args else []
        except ValueError:
            raise ParameterRangeError(f"malformed initial guess {text!r}", fields=["guess"]) from None
        if kind == "zero" and not numbers:
            return cls.zero()
        if kind in ("const", "constant") and len(numbers) == 1:
            return cls.constant(numbers[0])
        if kind == "bump" and len(numbers) in (1, 2):
            return cls.bump(*numbers)
        raise ParameterRangeError(
            f"initial guess must be 'zero', 'const:C', 'bump:A' or 'bump:A,W', got {text!r}", fields=["guess"]
        )

    def nodal(self, r: np.ndarray, R: float, boundary: np.ndarray) -> np.ndarray:
        m = boundary.size
        lift = np.repeat(boundary[:, None], r.size, axis=1)
        match self.kind:
            case GuessKind.ZERO:
                return lift
            case GuessKind.CONSTANT:
                out = np.full((m, r.size), self.amplitude)
                out[:, -1] = boundary
                return out
            case GuessKind.BUMP:
                x = r / (self.width * R)
                shape = np.where(x < 1.0, (1.0 - x**2) ** 2, 0.0)
                return lift + self.amplitude * shape[None, :]
            case GuessKind.PROFILE:
                assert self.profile is not None
                if self.profile.m != m:
                    raise ParameterRangeError(
                        f"guess profile has {self.profile.m} components, expected {m}", fields=["guess"]
                    )
                values, _ = self.profile.sample(r * (self.profile.radius / R))
                values[:, -1] = boundary
                return values
        raise ParameterRangeError(f"unknown guess kind {self.kind!r}", fields=["guess"])


@dataclass(frozen=True)
class BVPSolution:
    """
    Converged nodal solution on [0, R] (ball radius, or half height of a slab).

    r is the distance to the center; d = R - r is the distance to the boundary.
    """

    n: int
    R: float
    h: float
    r: np.ndarray
    values: np.ndarray
    boundary: tuple[float, ...]
    iterations: int
    residual: float
    geometry: str = "ball"
    label: str = ""

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def distance(self) -> np.ndarray:
        return self.R - self.r

    @property
    def center(self) -> np.ndarray:
        return self.values[:, 0]

    @property
    def size(self) -> float:
        """Ball radius, or slab height."""
        return 2.0 * self.R if self.geometry == "slab" else self.R

    def to_profile(self) -> RadialProfile:
        derivs = np.gradient(self.values, self.r, axis=1, edge_order=2)
        derivs[:, 0] = 0.0
        return RadialProfile(
            n=self.n,
            r=self.r,
            values=self.values,
            derivs=derivs,
            provenance=Provenance.FINITE_DIFFERENCE,
        )

    def to_rows(self) -> tuple[list[str], list[tuple[float, ...]]]:
        names = ("u", "v")[: self.m]
        header = ["r", "d", *names]
        table = np.vstack([self.r[None, :], self.distance[None, :], self.values])
        return header, [tuple(float(x) for x in column) for column in table.T]

    def to_dict(self) -> dict:
        return {
            "geometry": self.geometry,
            "n": self.n,
            "size": self.size,
            "h": self.h,
            "cells": int(self.r.size - 1),
            "boundary": list(self.boundary),
            "center": [float(x) for x in self.center],
            "max": [float(x) for x in np.max(np.abs(self.values), axis=1)],
            "iterations": self.iterations,
            "residual": self.residual,
            "label": self.label,
        }


# =====================================================================================================================
# Discrete operator
# =====================================================================================================================


def _radial_operator(n: int, N: int, h: float):
    """
    Sparse -Delta on the interior unknowns u_0..u_{N-1} and the coefficient coupling u_{N-1}
    to the boundary value.
    """
    j = np.arange(N, dtype=float)
    r = j * h
    main = np.full(N, 2.0 / h**2)
    main[0] = 2.0 * n / h**2
    with np.errstate(divide="ignore"):
        drift = np.where(j > 0, (n - 1) / (2.0 * h * np.where(j > 0, r, 1.0)), 0.0)
    upper = -1.0 / h**2 - drift
    upper[0] = -2.0 * n / h**2
    lower = -1.0 / h**2 + drift
    L = diags([lower[1:], main, upper[:-1]], [-1, 0, 1], shape=(N, N), format="csr")
    return L, float(upper[-1])


def _as_system(S: ScalarNonlin | SystemNonlin) -> SystemNonlin:
    return SystemNonlin.from_scalar(S) if isinstance(S, ScalarNonlin) else S


def _boundary(boundary, m: int) -> np.ndarray:
    values = np.atleast_1d(np.asarray(boundary, dtype=float))
    if values.size == 1 and m > 1:
        values = np.repeat(values, m)
    if values.size != m:
        raise ParameterRangeError(f"expected {m} boundary values, got {values.size}", fields=["boundary"])
    for i, b in enumerate(values):
        require_nonnegative(float(b), f"boundary[{i}]")
    return values


# =====================================================================================================================
# Newton
# =====================================================================================================================


def _newton(
    system: SystemNonlin,
    n: int,
    R: float,
    N: int,
    boundary: np.ndarray,
    U0: np.ndarray,
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, int, float]:
    m = system.m
    h = R / N
    L, couple = _radial_operator(n, N, h)
    d = np.asarray(system.diffusion, dtype=float)

    def residual(U: np.ndarray) -> tuple[np.ndarray, float]:
        f = system.extended(U)
        F = np.empty_like(U)
        for i in range(m):
            F[i] = d[i] * (L @ U[i]) - f[i]
            F[i, -1] += d[i] * couple * boundary[i]
        return F, float(np.max(np.abs(f))) if f.size else 0.0

    def jacobian(U: np.ndarray):
        J = system.jacobian_values(U)
        blocks = [[(d[i] * L if i == k else None) for k in range(m)] for i in range(m)]
        for i in range(m):
            for k in range(m):
                D = diags(-J[i, k], 0, shape=(N, N), format="csr")
                blocks[i][k] = D if blocks[i][k] is None else blocks[i][k] + D
        return bmat(blocks, format="csc")

    stencil = ROUNDOFF_ULPS * np.finfo(float).eps * float(np.max(d)) * 4.0 * n / h**2

    def accepted(U: np.ndarray, norm: float, fmax: float) -> bool:
        return norm <= max(tol * (1.0 + fmax), stencil * (1.0 + float(np.max(np.abs(U)))))

    U = U0.copy()
    F, fmax = residual(U)
    norm = float(np.max(np.abs(F)))
    for iteration in range(max_iter + 1):
        if accepted(U, norm, fmax):
            return U, iteration, norm
        if iteration == max_iter:
            break

        # 1) Newton direction
        with warnings.catch_warnings():
            warnings.simplefilter("error", MatrixRankWarning)
            try:
                delta = spsolve(jacobian(U), -F.ravel()).reshape(m, N)
            except MatrixRankWarning:
                raise SingularJacobianError(f"singular Jacobian at Newton iteration {iteration}") from None
        if not np.all(np.isfinite(delta)):
            raise SingularJacobianError(f"non-finite Newton step at iteration {iteration}")

        # 2) Damping: halve until the residual decreases
        step = 1.0
        while True:
            trial = U + step * delta
            F_trial, f_trial = residual(trial)
            norm_trial = float(np.max(np.abs(F_trial)))
            if np.isfinite(norm_trial) and norm_trial < norm:
                break
            step *= 0.5
            if step < MIN_STEP:
                raise NewtonDivergenceError(
                    f"damping exhausted at iteration {iteration} (residual {norm:.3e})",
                    last_iterate=U,
                    residual=norm,
                    iterations=iteration,
                )
        U, F, fmax, norm = trial, F_trial, f_trial, norm_trial
        logger.debug("newton.iteration", extra={"iteration": iteration + 1, "residual": norm, "step": step})

    raise NewtonDivergenceError(
        f"Newton did not converge after {max_iter} damped iterations (residual {norm:.3e})",
        last_iterate=U,
        residual=norm,
        iterations=max_iter,
    )


def solve_ball(
    S: ScalarNonlin | SystemNonlin,
    n: int,
    R: float,
    boundary: float | Sequence[float] = 0.0,
    guess: InitialGuess | None = None,
    *,
    cells: int = DEFAULT_CELLS,
    tol: float | None = None,
    max_iter: int | None = None,
    geometry: str = "ball",
) -> BVPSolution:
    """
    Radial Dirichlet problem -d_i Delta u_i = f_i(U) in B_R, U = boundary on the sphere.

    Args:
        cells: number of mesh cells N (h = R / N, at least 64).
        tol: acceptance threshold, max |residual| <= tol (1 + max |f(U)|) (default Settings.NEWTON_TOL);
            residuals at the round-off level of the stencil are accepted too.
        max_iter: damped Newton iterations (default Settings.NEWTON_MAX_ITER).

    Raises:
        NewtonDivergenceError: no convergence; carries the last iterate.
        SingularJacobianError: the sparse Newton system could not be solved.
    """
    settings = get_settings()
    system = _as_system(S)
    n = require_int_at_least(n, 1, "n")
    R = float(require_positive(R, "R"))
    N = require_int_at_least(cells, MIN_CELLS, "cells")
    tol = float(require_positive(tol if tol is not None else settings.NEWTON_TOL, "tol"))
    max_iter = require_int_at_least(max_iter if max_iter is not None else settings.NEWTON_MAX_ITER, 1, "max_iter")
    b = _boundary(boundary, system.m)
    guess = guess or InitialGuess.zero()

    r = np.linspace(0.0, R, N + 1)
    U0 = guess.nodal(r, R, b)[:, :N]

    start = time.perf_counter()
    try:
        U, iterations, norm = _newton(system, n, R, N, b, U0, tol, max_iter)
    except (NewtonDivergenceError, SingularJacobianError) as exc:
        logger.info(
            "newton.failed",
            extra={"expr": system.describe(), "n": n, "R": R, "cells": N, "code": exc.error_code, "reason": exc.message},
        )
        raise
    values = np.concatenate([U, b[:, None]], axis=1)
    solution = BVPSolution(
        n=n,
        R=R,
        h=R / N,
        r=r,
        values=values,
        boundary=tuple(float(x) for x in b),
        iterations=iterations,
        residual=norm,
        geometry=geometry,
        label=system.describe(),
    )
    logger.info(
        "newton.converged",
        extra={
            "expr": system.describe(),
            "geometry": geometry,
            "n": n,
            "R": R,
            "cells": N,
            "iterations": iterations,
            "residual": norm,
            "center": [float(x) for x in solution.center],
            "duration_ms": round((time.perf_counter() - start) * 1000, 1),
        },
    )
    return solution


def solve_slab(
    S: ScalarNonlin | SystemNonlin,
    height: float,
    boundary: float | Sequence[float] = 0.0,
    guess: InitialGuess | None = None,
    *,
    cells: int = DEFAULT_CELLS,
    tol: float | None = None,
    max_iter: int | None = None,
) -> BVPSolution:
    """-U'' = f(U) on (0, height) with U = boundary at both ends, solved on the half height."""
    height = float(require_positive(height, "height"))
    return solve_ball(
        S, 1, height / 2.0, boundary, guess, cells=cells, tol=tol, max_iter=max_iter, geometry="slab"
    )
