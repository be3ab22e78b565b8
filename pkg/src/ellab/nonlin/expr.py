"""
Expression tree for power-log-piecewise nonlinearities.

Nodes are immutable and hashable. Every node supports:
  - vectorized evaluation over numpy arrays (`evaluate`)
  - symbolic differentiation with respect to one variable (`diff`)
  - a canonical printer (`str(node)`) whose output the parser reads back
  - variable renaming (`rename`), used to build k(u) / k(v) pairs of the proportional template

Piecewise nodes (min / max) differentiate into `Switch` nodes. A switch picks the
derivative of the active branch and, at a tie, returns the one-sided value requested
through `side` (-1 for the left derivative, +1 for the right one).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

Env = Mapping[str, "np.ndarray | float"]

# relative width under which two min/max branches count as tied
TIE_RTOL = 1e-12


def _fmt(value: float) -> str:
    """Print a float so that parsing it back gives the same double."""
    if math.isfinite(value) and value == int(value) and abs(value) < 1e16:
        return f"{value:.1f}"
    return repr(float(value))


class Expr:
    """Base class for expression nodes."""

    __slots__ = ()

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        raise NotImplementedError

    def diff(self, var: str) -> "Expr":
        raise NotImplementedError

    def variables(self) -> frozenset[str]:
        raise NotImplementedError

    def rename(self, mapping: Mapping[str, str]) -> "Expr":
        raise NotImplementedError

    def children(self) -> tuple["Expr", ...]:
        return ()

    def walk(self):
        """Yield every node of the tree, parents first."""
        yield self
        for child in self.children():
            yield from child.walk()

    def __call__(self, side: int = 0, **env) -> np.ndarray:
        return self.evaluate(env, side)


# =====================================================================================================================
# Leaves
# =====================================================================================================================


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: float

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        return np.float64(self.value)

    def diff(self, var: str) -> Expr:
        return ZERO

    def variables(self) -> frozenset[str]:
        return frozenset()

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return self

    def __str__(self) -> str:
        text = _fmt(self.value)
        return f"({text})" if self.value < 0 else text


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        return np.asarray(env[self.name], dtype=float)

    def diff(self, var: str) -> Expr:
        return ONE if var == self.name else ZERO

    def variables(self) -> frozenset[str]:
        return frozenset({self.name})

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return Var(mapping.get(self.name, self.name))

    def __str__(self) -> str:
        return self.name


ZERO = Const(0.0)
ONE = Const(1.0)


@dataclass(frozen=True, slots=True)
class LogShift(Expr):
    """log^a(K + var^sigma) with K > 0 and sigma in {-1, +1}."""

    var: str
    K: float
    sigma: int
    a: float = 1.0

    def _inner(self, env: Env) -> np.ndarray:
        s = np.asarray(env[self.var], dtype=float)
        with np.errstate(divide="ignore"):
            return self.K + (s if self.sigma == 1 else 1.0 / s)

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.power(np.log(self._inner(env)), self.a)

    def diff(self, var: str) -> Expr:
        if var != self.var or self.a == 0.0:
            return ZERO
        base = Var(self.var)
        # d/ds log^a(K + s^sigma) = a sigma s^(sigma-1) log^(a-1)(K + s^sigma) / (K + s^sigma)
        shifted = make_sum([Const(self.K), power(base, float(self.sigma))])
        return make_product(
            [
                Const(self.a * self.sigma),
                power(base, float(self.sigma - 1)),
                power(LogShift(self.var, self.K, self.sigma, 1.0), self.a - 1.0),
                power(shifted, -1.0),
            ]
        )

    def variables(self) -> frozenset[str]:
        return frozenset({self.var})

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return LogShift(mapping.get(self.var, self.var), self.K, self.sigma, self.a)

    @property
    def positive_on_domain(self) -> bool:
        """True when log(K + s^sigma) > 0 for every s > 0."""
        return self.K >= 1.0

    def __str__(self) -> str:
        arg = self.var if self.sigma == 1 else f"{self.var}^-1.0"
        text = f"log({_fmt(self.K)} + {arg})"
        return text if self.a == 1.0 else f"{text}^{_fmt(self.a)}"


# =====================================================================================================================
# Composite nodes
# =====================================================================================================================


@dataclass(frozen=True, slots=True)
class Power(Expr):
    base: Expr
    exponent: float

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        b = self.base.evaluate(env, side)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.power(b, self.exponent)

    def diff(self, var: str) -> Expr:
        inner = self.base.diff(var)
        if inner == ZERO or self.exponent == 0.0:
            return ZERO
        return make_product([Const(self.exponent), power(self.base, self.exponent - 1.0), inner])

    def variables(self) -> frozenset[str]:
        return self.base.variables()

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return Power(self.base.rename(mapping), self.exponent)

    def children(self) -> tuple[Expr, ...]:
        return (self.base,)

    def __str__(self) -> str:
        return f"{_wrap(self.base, atom=True)}^{_fmt(self.exponent)}"


@dataclass(frozen=True, slots=True)
class Log(Expr):
    """Natural log of an arbitrary subexpression (iterated logs and the like)."""

    arg: Expr

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(self.arg.evaluate(env, side))

    def diff(self, var: str) -> Expr:
        inner = self.arg.diff(var)
        if inner == ZERO:
            return ZERO
        return make_product([inner, power(self.arg, -1.0)])

    def variables(self) -> frozenset[str]:
        return self.arg.variables()

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return Log(self.arg.rename(mapping))

    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)

    def __str__(self) -> str:
        return f"log({self.arg})"


@dataclass(frozen=True, slots=True)
class Sum(Expr):
    terms: tuple[Expr, ...]

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        total = self.terms[0].evaluate(env, side)
        for term in self.terms[1:]:
            total = total + term.evaluate(env, side)
        return total

    def diff(self, var: str) -> Expr:
        return make_sum([t.diff(var) for t in self.terms])

    def variables(self) -> frozenset[str]:
        return frozenset().union(*(t.variables() for t in self.terms))

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return Sum(tuple(t.rename(mapping) for t in self.terms))

    def children(self) -> tuple[Expr, ...]:
        return self.terms

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.terms)


@dataclass(frozen=True, slots=True)
class Product(Expr):
    factors: tuple[Expr, ...]

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        total = self.factors[0].evaluate(env, side)
        with np.errstate(invalid="ignore", over="ignore"):
            for factor in self.factors[1:]:
                total = total * factor.evaluate(env, side)
        return total

    def diff(self, var: str) -> Expr:
        terms = []
        for i, factor in enumerate(self.factors):
            d = factor.diff(var)
            if d == ZERO:
                continue
            terms.append(make_product([*self.factors[:i], d, *self.factors[i + 1 :]]))
        return make_sum(terms)

    def variables(self) -> frozenset[str]:
        return frozenset().union(*(f.variables() for f in self.factors))

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return Product(tuple(f.rename(mapping) for f in self.factors))

    def children(self) -> tuple[Expr, ...]:
        return self.factors

    def __str__(self) -> str:
        return "*".join(_wrap(f, atom=False) for f in self.factors)


@dataclass(frozen=True, slots=True)
class Min(Expr):
    left: Expr
    right: Expr

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        return np.minimum(self.left.evaluate(env, side), self.right.evaluate(env, side))

    def diff(self, var: str) -> Expr:
        return Switch(self.left, self.right, self.left.diff(var), self.right.diff(var), "min")

    def variables(self) -> frozenset[str]:
        return self.left.variables() | self.right.variables()

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return Min(self.left.rename(mapping), self.right.rename(mapping))

    def children(self) -> tuple[Expr, ...]:
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"min({self.left}, {self.right})"


@dataclass(frozen=True, slots=True)
class Max(Expr):
    left: Expr
    right: Expr

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        return np.maximum(self.left.evaluate(env, side), self.right.evaluate(env, side))

    def diff(self, var: str) -> Expr:
        return Switch(self.left, self.right, self.left.diff(var), self.right.diff(var), "max")

    def variables(self) -> frozenset[str]:
        return self.left.variables() | self.right.variables()

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return Max(self.left.rename(mapping), self.right.rename(mapping))

    def children(self) -> tuple[Expr, ...]:
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"max({self.left}, {self.right})"


@dataclass(frozen=True, slots=True)
class Switch(Expr):
    """
    Branch-selected value produced by differentiating min/max.

    `left` / `right` decide the active branch, `d_left` / `d_right` are the values returned
    for each branch. At a tie the left derivative of min(a, b) is max(a', b') and the right
    derivative is min(a', b'); max(a, b) is the mirror image.
    """

    left: Expr
    right: Expr
    d_left: Expr
    d_right: Expr
    kind: str

    def evaluate(self, env: Env, side: int = 0) -> np.ndarray:
        a = np.asarray(self.left.evaluate(env, side), dtype=float)
        b = np.asarray(self.right.evaluate(env, side), dtype=float)
        da = np.asarray(self.d_left.evaluate(env, side), dtype=float)
        db = np.asarray(self.d_right.evaluate(env, side), dtype=float)
        a, b, da, db = np.broadcast_arrays(a, b, da, db)
        scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
        tie = np.abs(a - b) <= TIE_RTOL * scale
        if self.kind == "min":
            picked = np.where(a < b, da, db)
            at_tie = np.maximum(da, db) if side < 0 else np.minimum(da, db)
        else:
            picked = np.where(a > b, da, db)
            at_tie = np.minimum(da, db) if side < 0 else np.maximum(da, db)
        out = np.where(tie, at_tie, picked)
        return out if out.ndim else out[()]

    def diff(self, var: str) -> Expr:
        return Switch(self.left, self.right, self.d_left.diff(var), self.d_right.diff(var), self.kind)

    def variables(self) -> frozenset[str]:
        return self.left.variables() | self.right.variables() | self.d_left.variables() | self.d_right.variables()

    def rename(self, mapping: Mapping[str, str]) -> Expr:
        return Switch(
            self.left.rename(mapping),
            self.right.rename(mapping),
            self.d_left.rename(mapping),
            self.d_right.rename(mapping),
            self.kind,
        )

    def children(self) -> tuple[Expr, ...]:
        return (self.left, self.right, self.d_left, self.d_right)

    def __str__(self) -> str:
        return f"{self.kind}'[{self.left}, {self.right} | {self.d_left}, {self.d_right}]"


def _wrap(node: Expr, *, atom: bool) -> str:
    """Parenthesize `node` when printing it inside a product (atom=False) or under ^ (atom=True)."""
    text = str(node)
    if isinstance(node, Sum):
        return f"({text})"
    if atom and isinstance(node, (Product, Power)):
        return f"({text})"
    if atom and isinstance(node, LogShift) and node.a != 1.0:
        return f"({text})"
    return text


# =====================================================================================================================
# Smart constructors (constant folding only, no algebraic simplification)
# =====================================================================================================================


def power(base: Expr, exponent: float) -> Expr:
    exponent = float(exponent)
    if exponent == 0.0:
        return ONE
    if exponent == 1.0:
        return base
    if isinstance(base, Const):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return Const(float(np.power(base.value, exponent)))
    if isinstance(base, LogShift):
        return LogShift(base.var, base.K, base.sigma, base.a * exponent)
    if isinstance(base, Power) and isinstance(base.base, (Var, LogShift)):
        return power(base.base, base.exponent * exponent)
    return Power(base, exponent)


def make_sum(terms) -> Expr:
    flat: list[Expr] = []
    constant = 0.0
    for term in terms:
        parts = term.terms if isinstance(term, Sum) else (term,)
        for part in parts:
            if isinstance(part, Const):
                constant += part.value
            else:
                flat.append(part)
    if constant != 0.0 or not flat:
        flat.append(Const(constant))
    return flat[0] if len(flat) == 1 else Sum(tuple(flat))


def make_product(factors) -> Expr:
    flat: list[Expr] = []
    coefficient = 1.0
    for factor in factors:
        parts = factor.factors if isinstance(factor, Product) else (factor,)
        for part in parts:
            if isinstance(part, Const):
                coefficient *= part.value
            else:
                flat.append(part)
    if coefficient == 0.0:
        return ZERO
    if coefficient != 1.0 or not flat:
        flat.insert(0, Const(coefficient))
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


def negate(node: Expr) -> Expr:
    return make_product([Const(-1.0), node])


# =====================================================================================================================
# Structural queries
# =====================================================================================================================


def monomial(node: Expr) -> tuple[float, float] | None:
    """Return (c, p) when `node` is exactly c * var^p in a single variable, else None."""
    if isinstance(node, Var):
        return 1.0, 1.0
    if isinstance(node, Power) and isinstance(node.base, Var):
        return 1.0, node.exponent
    if isinstance(node, Product) and len(node.factors) == 2 and isinstance(node.factors[0], Const):
        inner = monomial(node.factors[1])
        if inner is not None:
            return node.factors[0].value * inner[0], inner[1]
    return None


def monomial_terms(node: Expr) -> list[tuple[float, float]] | None:
    """Return the (c, p) list when `node` is a finite sum of monomials (constants count as p = 0)."""
    terms = node.terms if isinstance(node, Sum) else (node,)
    out: list[tuple[float, float]] = []
    for term in terms:
        if isinstance(term, Const):
            out.append((term.value, 0.0))
            continue
        mono = monomial(term)
        if mono is None:
            return None
        out.append(mono)
    return out


def piecewise_nodes(node: Expr) -> list[Expr]:
    return [n for n in node.walk() if isinstance(n, (Min, Max))]


def is_finite_number(value: float) -> bool:
    return isinstance(value, (int, float)) and math.isfinite(value)
