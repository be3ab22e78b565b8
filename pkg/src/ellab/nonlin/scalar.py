"""
Scalar nonlinearities f: [0, inf) -> R built on the expression tree.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import brentq

from ellab.exceptions import DomainError, NonFiniteValueError

from .asymptotics import Term, Unresolved, leading
from .expr import Expr, LogShift, Max, Min, Switch
from .parser import parse_expr

logger = logging.getLogger(__name__)

# construction-time sample grid for the finiteness / positivity checks
SAMPLE_LO, SAMPLE_HI, SAMPLE_POINTS = 1e-8, 1e8, 161
# kinks are searched for on this range
KINK_LO, KINK_HI = 1e-12, 1e12


def _as_array(s) -> np.ndarray:
    return np.asarray(s, dtype=float)


def _unwrap(values: np.ndarray, like):
    values = np.asarray(values, dtype=float)
    if np.ndim(like) == 0:
        return float(values.reshape(-1)[0]) if values.size else float(values)
    return np.broadcast_to(values, np.shape(like)).copy()


@dataclass(frozen=True)
class ScalarNonlin:
    """
    f(s) given by an expression in a single variable.

    Attributes:
        expr: expression tree.
        var: name of the variable ("u" or "v").
        positive: f(s) > 0 for every s > 0 (verified on the sample grid).
        value_at_zero: limit of f(s) as s -> 0+.
        source: text the expression was parsed from, if any.
        kink_points: branch switches of min/max nodes on [1e-12, 1e12].
    """

    expr: Expr
    var: str = "u"
    positive: bool = False
    value_at_zero: float = 0.0
    source: str | None = None
    kink_points: tuple[float, ...] = field(default=(), repr=False)

    # =================================================================================================================
    # Construction
    # =================================================================================================================

    @classmethod
    def from_expr(
        cls,
        expr: Expr,
        *,
        var: str | None = None,
        positive: bool | None = None,
        source: str | None = None,
        check: bool = True,
    ) -> "ScalarNonlin":
        """
        Wrap `expr`, verifying finiteness on (0, 1e8] and the positivity claim.

        Args:
            positive: None infers the flag from the samples; True must be confirmed.
            check: False skips the sample checks (used for derivatives, which may blow up at 0).
        """
        names = sorted(expr.variables())
        if len(names) > 1:
            raise DomainError(f"scalar nonlinearity depends on several variables: {names}", fields=names)
        var = var or (names[0] if names else "u")
        if names and names[0] != var:
            raise DomainError(f"expression uses {names[0]!r}, expected {var!r}", fields=names)

        flag = False
        if check:
            grid = np.geomspace(SAMPLE_LO, SAMPLE_HI, SAMPLE_POINTS)
            values = _raw(expr, var, grid)
            bad = ~np.isfinite(values)
            if bad.any():
                at = float(grid[np.argmax(bad)])
                raise DomainError(f"expression {expr} is not finite at s={at:.6g}", fields=[var])
            all_positive = bool(np.all(values > 0.0))
            shifted_below_one = any(isinstance(n, LogShift) and not n.positive_on_domain for n in expr.walk())
            if positive and not all_positive:
                at = float(grid[np.argmax(values <= 0.0)])
                raise DomainError(f"positivity claim fails: f({at:.6g}) <= 0", fields=[var])
            flag = all_positive and not shifted_below_one
            if positive and shifted_below_one:
                logger.info("nonlin.positivity_unset", extra={"expr": str(expr), "reason": "log-shift with K < 1"})

        return cls(
            expr=expr,
            var=var,
            positive=flag,
            value_at_zero=_limit_at_zero(expr, var),
            source=source,
            kink_points=_find_kinks(expr, var),
        )

    @classmethod
    def parse(
        cls,
        text: str,
        params: Mapping[str, float] | None = None,
        *,
        positive: bool | None = None,
    ) -> "ScalarNonlin":
        return cls.from_expr(parse_expr(text, params), positive=positive, source=text)

    # =================================================================================================================
    # Evaluation
    # =================================================================================================================

    def __call__(self, s):
        """Pointwise value; the continuity limit is used at s = 0."""
        arr = _as_array(s)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteValueError("argument must be finite", fields=[self.var])
        if np.any(arr < 0.0):
            raise DomainError("nonlinearity evaluated at a negative argument", fields=[self.var])
        values = np.where(arr > 0.0, _raw(self.expr, self.var, np.where(arr > 0.0, arr, 1.0)), self.value_at_zero)
        if not np.all(np.isfinite(values[arr > 0.0])):
            raise DomainError(f"{self.text} is undefined at some s > 0", fields=[self.var])
        return _unwrap(values, s)

    def raw(self, s, side: int = 0) -> np.ndarray:
        """Unchecked vectorized evaluation for s > 0."""
        return _raw(self.expr, self.var, _as_array(s), side)

    def extended(self, s):
        """f extended by 0 to negative arguments, with the limit value at 0."""
        arr = _as_array(s)
        pos = arr > 0.0
        values = np.where(pos, _raw(self.expr, self.var, np.where(pos, arr, 1.0)), 0.0)
        values = np.where(arr == 0.0, self.value_at_zero, values)
        return _unwrap(values, s)

    # =================================================================================================================
    # Calculus helpers
    # =================================================================================================================

    def derivative(self) -> "ScalarNonlin":
        d = self.expr.diff(self.var)
        return ScalarNonlin(
            expr=d,
            var=self.var,
            positive=False,
            value_at_zero=_limit_at_zero(d, self.var),
            source=None,
            kink_points=self.kink_points,
        )

    def one_sided_derivative(self, s: float, side: int):
        """Left (side = -1) or right (side = +1) derivative; identical away from kinks."""
        return _unwrap(_raw(self.expr.diff(self.var), self.var, _as_array(s), side), s)

    def kinks(self, lo: float = KINK_LO, hi: float = KINK_HI) -> list[float]:
        return [k for k in self.kink_points if lo <= k <= hi]

    def leading(self, end: str) -> Term | None:
        """Structural leading term at 'zero' or 'inf' (raises Unresolved outside the power-log family)."""
        return leading(self.expr, end)  # type: ignore[arg-type]

    def renamed(self, var: str) -> "ScalarNonlin":
        if var == self.var:
            return self
        return ScalarNonlin(
            expr=self.expr.rename({self.var: var}),
            var=var,
            positive=self.positive,
            value_at_zero=self.value_at_zero,
            source=self.source,
            kink_points=self.kink_points,
        )

    @property
    def text(self) -> str:
        return self.source or str(self.expr)

    def __str__(self) -> str:
        return str(self.expr)


# =====================================================================================================================
# Internals
# =====================================================================================================================


def _raw(expr: Expr, var: str, s: np.ndarray, side: int = 0) -> np.ndarray:
    with np.errstate(all="ignore"):
        out = np.asarray(expr.evaluate({var: s}, side), dtype=float)
    return np.broadcast_to(out, np.shape(s)).astype(float) if out.shape != np.shape(s) else out


def _limit_at_zero(expr: Expr, var: str) -> float:
    direct = float(_raw(expr, var, np.array(0.0)))
    if math.isfinite(direct):
        return direct
    try:
        term = leading(expr, "zero")
    except Unresolved:
        return float(_raw(expr, var, np.array(1e-300)))
    if term is None:
        return 0.0
    coefficient = float(_raw(term.hom, var, np.array(1.0)))
    if term.index > 0.0 or (term.index == 0.0 and term.slow < 0.0):
        return 0.0
    if term.index < 0.0 or term.slow > 0.0:
        return math.copysign(math.inf, coefficient)
    return coefficient


def _find_kinks(expr: Expr, var: str) -> tuple[float, ...]:
    nodes = [n for n in expr.walk() if isinstance(n, (Min, Max, Switch))]
    if not nodes:
        return ()
    grid = np.geomspace(KINK_LO, KINK_HI, 24 * 32 + 1)
    found: set[float] = set()
    for node in nodes:
        def gap(s, node=node):
            return float(_raw(node.left, var, np.array(s))) - float(_raw(node.right, var, np.array(s)))

        diff = _raw(node.left, var, grid) - _raw(node.right, var, grid)
        ok = np.isfinite(diff)
        for i in range(len(grid) - 1):
            if not (ok[i] and ok[i + 1]):
                continue
            if diff[i] == 0.0:
                found.add(float(grid[i]))
            elif diff[i] * diff[i + 1] < 0.0:
                found.add(float(brentq(gap, grid[i], grid[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps)))
    # collapse duplicates produced by nested nodes switching at the same point
    merged: list[float] = []
    for point in sorted(found):
        if not merged or abs(point - merged[-1]) > 1e-12 * point:
            merged.append(point)
    return tuple(merged)
