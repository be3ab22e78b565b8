"""
Leading-order behaviour of expressions at 0 and at infinity.

For an expression e(U) and U = lam * xi with lam -> 0+ or lam -> inf, the dominant part is written
as hom(xi) * lam^index * log(1/lam or lam)^slow, where `hom` is a homogeneous expression of degree
`index`. Only the power-log family is read structurally; anything else raises `Unresolved`
and callers fall back to numeric slope estimation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .expr import (
    Const,
    Expr,
    Log,
    LogShift,
    Max,
    Min,
    Power,
    Product,
    Sum,
    Switch,
    Var,
    make_product,
    make_sum,
    power,
)

End = Literal["zero", "inf"]

# exponents closer than this are treated as equal when comparing terms
INDEX_ATOL = 1e-12


class Unresolved(Exception):
    """The expression is outside the structurally analysable family."""


@dataclass(frozen=True, slots=True)
class Term:
    """hom(xi) * lam^index * L(lam)^slow, L = log(lam) at infinity and log(1/lam) at zero."""

    hom: Expr
    index: float
    slow: float = 0.0

    def key(self) -> tuple[float, float]:
        return (self.index, self.slow)


def _dominates(a: Term, b: Term, end: End) -> int:
    """+1 when a is asymptotically larger than b, -1 when smaller, 0 when of the same order."""
    if abs(a.index - b.index) > INDEX_ATOL:
        larger = a.index > b.index
        if end == "zero":
            larger = not larger
        return 1 if larger else -1
    if abs(a.slow - b.slow) > INDEX_ATOL:
        return 1 if a.slow > b.slow else -1
    return 0


def _log_shift(node: LogShift, end: End) -> Term:
    # log(K + s^sigma) as s = lam * xi
    grows = (end == "inf" and node.sigma == 1) or (end == "zero" and node.sigma == -1)
    if grows:
        # log(K + s^{+-1}) ~ log(lam) at the matching end, slowly varying of order 1
        return Term(Const(1.0), 0.0, node.a)
    if node.K == 1.0:
        # log(1 + t) ~ t as t -> 0, with t = s (at zero) or 1/s (at infinity)
        exponent = float(node.sigma) * node.a
        return Term(power(Var(node.var), exponent), exponent, 0.0)
    base = math.log(node.K)
    if base < 0.0 and not float(node.a).is_integer():
        raise Unresolved("log-shift with K < 1 is negative near this end")
    return Term(Const(base**node.a), 0.0, 0.0)


def leading(node: Expr, end: End) -> Term | None:
    """
    Return the dominant term of `node` at `end`, or None for an identically zero node.

    Raises:
        Unresolved: the node (or a subnode) is not in the power-log-piecewise family or a
            cancellation / iterated log makes the order unreadable.
    """
    if isinstance(node, Const):
        return None if node.value == 0.0 else Term(node, 0.0, 0.0)
    if isinstance(node, Var):
        return Term(node, 1.0, 0.0)
    if isinstance(node, LogShift):
        return _log_shift(node, end)
    if isinstance(node, Power):
        inner = leading(node.base, end)
        if inner is None:
            raise Unresolved("power of a vanishing expression")
        return Term(power(inner.hom, node.exponent), inner.index * node.exponent, inner.slow * node.exponent)
    if isinstance(node, Product):
        parts = [leading(f, end) for f in node.factors]
        if any(p is None for p in parts):
            return None
        return Term(
            make_product([p.hom for p in parts]),
            sum(p.index for p in parts),
            sum(p.slow for p in parts),
        )
    if isinstance(node, Sum):
        parts = [p for p in (leading(t, end) for t in node.terms) if p is not None]
        if not parts:
            return None
        best = parts[0]
        for p in parts[1:]:
            if _dominates(p, best, end) > 0:
                best = p
        tied = [p for p in parts if _dominates(p, best, end) == 0]
        hom = make_sum([p.hom for p in tied])
        if isinstance(hom, Const) and hom.value == 0.0:
            raise Unresolved("leading terms cancel")
        return Term(hom, best.index, best.slow)
    if isinstance(node, (Min, Max)):
        return _piecewise(node.left, node.right, node, end, None)
    if isinstance(node, Switch):
        return _piecewise(node.left, node.right, node, end, (node.d_left, node.d_right))
    if isinstance(node, Log):
        inner = leading(node.arg, end)
        if inner is None:
            raise Unresolved("log of a vanishing expression")
        if abs(inner.index) > INDEX_ATOL:
            # log(lam^p ...) ~ p log(lam) at infinity, -p log(1/lam) at zero
            sign = inner.index if end == "inf" else -inner.index
            return Term(Const(sign), 0.0, 1.0)
        if abs(inner.slow) > INDEX_ATOL:
            raise Unresolved("iterated logarithm")
        if isinstance(inner.hom, Const):
            if inner.hom.value <= 0.0:
                raise Unresolved("log of a non-positive limit")
            value = math.log(inner.hom.value)
            if value == 0.0:
                raise Unresolved("log tends to zero")
            return Term(Const(value), 0.0, 0.0)
        return Term(Log(inner.hom), 0.0, 0.0)
    raise Unresolved(f"unsupported node {type(node).__name__}")


def _piecewise(left: Expr, right: Expr, node: Expr, end: End, values) -> Term | None:
    a = leading(left, end)
    b = leading(right, end)
    if a is None or b is None:
        raise Unresolved("min/max with a vanishing branch")
    cmp = _dominates(a, b, end)
    is_min = getattr(node, "kind", "min" if isinstance(node, Min) else "max") == "min"
    if cmp == 0:
        if values is not None:
            raise Unresolved("tied branches in a switch")
        hom = Min(a.hom, b.hom) if is_min else Max(a.hom, b.hom)
        return Term(hom, a.index, a.slow)
    pick_left = (cmp < 0) if is_min else (cmp > 0)
    if values is None:
        return a if pick_left else b
    return leading(values[0] if pick_left else values[1], end)


def hom_is_constant(term: Term) -> bool:
    return not term.hom.variables()


def hom_value(term: Term, point: dict[str, float]) -> float:
    return float(np.asarray(term.hom.evaluate(point)))
