"""
Recursive-descent parser for nonlinearity expressions.

Grammar (whitespace ignored):

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | atom ("^" exponent)?
    exponent := signed-number | param-name | "(" expr ")"      # must be constant
    atom   := "u" | "v" | number | param-name
            | "log" "(" expr ")" | "min" "(" expr "," expr ")" | "max" "(" expr "," expr ")"
            | "(" expr ")"

`log(K + u)` and `log(K + u^-1)` (either order, K a positive constant) become `LogShift` nodes so
the power-log structure stays readable; any other log argument becomes a general `Log` node.

`evaluate_constant` reuses the tokenizer for CLI float arguments such as "pS(3)" or "kappa(4)+0.5".
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from ellab.exceptions import EllabError, ExprSyntaxError, NonFiniteValueError, UnboundParameterError

from .expr import (
    Const,
    Expr,
    Log,
    LogShift,
    Max,
    Min,
    Power,
    Sum,
    Var,
    make_product,
    make_sum,
    negate,
    power,
)

logger = logging.getLogger(__name__)

VARIABLES = ("u", "v")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # number | name | op | end
    text: str
    offset: int  # byte offset into the UTF-8 source


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", offset=_byte_offset(text, pos), text=text)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            # accept Python-style ** as a synonym of ^
            tokens.append(Token(kind, "^" if value == "**" else value, _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(
        self,
        text: str,
        params: Mapping[str, float],
        *,
        allow_variables: bool = True,
        functions: Mapping[str, Callable[..., float]] | None = None,
    ):
        self.text = text
        self.params = params
        self.allow_variables = allow_variables
        self.functions = functions or {}
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token helpers ------------------------------------------------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.pos += 1
            return True
        return False

    def _expect(self, text: str) -> None:
        if not self._accept(text):
            found = self.current.text or "end of input"
            raise self._error(f"expected {text!r}, found {found!r}")

    def _error(self, message: str, tok: Token | None = None) -> ExprSyntaxError:
        tok = tok or self.current
        return ExprSyntaxError(message, offset=tok.offset, text=self.text)

    # -- grammar ------------------------------------------------------------------------------------------------------

    def parse(self) -> Expr:
        node = self.expr()
        if self.current.kind != "end":
            raise self._error(f"unexpected token {self.current.text!r}")
        return node

    def expr(self) -> Expr:
        terms = [self.term()]
        while True:
            if self._accept("+"):
                terms.append(self.term())
            elif self._accept("-"):
                terms.append(negate(self.term()))
            else:
                break
        return make_sum(terms)

    def term(self) -> Expr:
        factors = [self.factor()]
        while True:
            if self._accept("*"):
                factors.append(self.factor())
            elif self._accept("/"):
                factors.append(power(self.factor(), -1.0))
            else:
                break
        return make_product(factors)

    def factor(self) -> Expr:
        if self._accept("-"):
            return negate(self.factor())
        base = self.atom()
        if self._accept("^"):
            return power(base, self.exponent())
        return base

    def exponent(self) -> float:
        tok = self.current
        sign = 1.0
        if self._accept("-"):
            sign = -1.0
        elif self._accept("+"):
            pass
        tok = self.current
        if tok.kind == "number":
            self._advance()
            return sign * float(tok.text)
        if tok.kind == "name" and tok.text in self.params:
            self._advance()
            return sign * self._param(tok)
        if tok.kind == "op" and tok.text == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            if node.variables():
                raise self._error("exponent must not depend on u or v", tok)
            value = float(np.asarray(node.evaluate({})))
            if not math.isfinite(value):
                raise NonFiniteValueError(f"non-finite exponent in {self.text!r}", fields=[tok.text])
            return sign * value
        if tok.kind == "name" and tok.text not in VARIABLES:
            raise UnboundParameterError(tok.text)
        raise self._error("expected a number, a parameter or a parenthesized constant after '^'")

    def atom(self) -> Expr:
        tok = self.current
        if tok.kind == "number":
            self._advance()
            return Const(float(tok.text))
        if tok.kind == "op" and tok.text == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        if tok.kind == "name":
            self._advance()
            name = tok.text
            if name in VARIABLES:
                if not self.allow_variables:
                    raise self._error(f"variable {name!r} not allowed here", tok)
                return Var(name)
            if name in ("log", "min", "max"):
                return self._call(name, tok)
            if name in self.functions:
                return self._function(name, tok)
            if name in self.params:
                return Const(self._param(tok))
            raise UnboundParameterError(name)
        raise self._error(f"unexpected token {tok.text or 'end of input'!r}")

    def _call(self, name: str, tok: Token) -> Expr:
        self._expect("(")
        first = self.expr()
        if name == "log":
            self._expect(")")
            return log_node(first)
        self._expect(",")
        second = self.expr()
        self._expect(")")
        if isinstance(first, Const) and isinstance(second, Const):
            pick = min if name == "min" else max
            return Const(pick(first.value, second.value))
        return Min(first, second) if name == "min" else Max(first, second)

    def _function(self, name: str, tok: Token) -> Expr:
        self._expect("(")
        args = [self.expr()]
        while self._accept(","):
            args.append(self.expr())
        self._expect(")")
        values = []
        for arg in args:
            if arg.variables():
                raise self._error(f"{name}() takes constant arguments", tok)
            values.append(float(np.asarray(arg.evaluate({}))))
        return Const(float(self.functions[name](*values)))

    def _param(self, tok: Token) -> float:
        value = float(self.params[tok.text])
        if not math.isfinite(value):
            raise NonFiniteValueError(f"parameter {tok.text!r} is bound to a non-finite value", fields=[tok.text])
        return value


def log_node(arg: Expr) -> Expr:
    """Build log(arg), recognising the K + s^sigma shapes."""
    if isinstance(arg, Const):
        with np.errstate(divide="ignore", invalid="ignore"):
            return Const(float(np.log(arg.value)))
    if isinstance(arg, Var):
        # log(u) is not defined at 0 and not in the shifted family
        return Log(arg)
    if isinstance(arg, Sum) and len(arg.terms) == 2:
        consts = [t for t in arg.terms if isinstance(t, Const)]
        others = [t for t in arg.terms if not isinstance(t, Const)]
        if len(consts) == 1 and len(others) == 1 and consts[0].value > 0.0:
            other = others[0]
            if isinstance(other, Var):
                return LogShift(other.name, consts[0].value, 1, 1.0)
            if isinstance(other, Power) and isinstance(other.base, Var) and other.exponent == -1.0:
                return LogShift(other.base.name, consts[0].value, -1, 1.0)
    return Log(arg)


def parse_expr(text: str, params: Mapping[str, float] | None = None) -> Expr:
    """
    Parse `text` into an expression tree.

    Args:
        text: expression source, e.g. "(K + min(1, u^(p-1))) * u^p".
        params: name -> value bindings for free parameters.

    Raises:
        ExprSyntaxError: malformed input (carries the byte offset).
        UnboundParameterError: a free name has no binding.
        NonFiniteValueError: a binding used by the expression is nan or infinite.
    """
    params = dict(params or {})
    node = _Parser(text, params).parse()
    logger.debug("expr.parsed", extra={"expr": text, "params": sorted(params)})
    return node


# =====================================================================================================================
# Named-constant arithmetic for CLI floats
# =====================================================================================================================


def _p_sobolev(n: float) -> float:
    return math.inf if n <= 2 else (n + 2.0) / (n - 2.0)


def _kappa(n: float) -> float:
    return math.inf if n <= 2 else n / (n - 2.0)


def _p_star(n: float) -> float:
    return _p_sobolev(n) if n <= 4 else (n - 1.0) / (n - 3.0)


def _theta(K: float) -> float:
    from .special import theta

    return theta(K)


CONSTANT_FUNCTIONS: dict[str, Callable[..., float]] = {
    "pS": _p_sobolev,
    "kappa": _kappa,
    "pstar": _p_star,
    "pstarstar": _kappa,
    "theta": _theta,
    "sqrt": math.sqrt,
    "exp": math.exp,
}


def evaluate_constant(
    text: str,
    params: Mapping[str, float] | None = None,
    functions: Mapping[str, Callable[..., float]] | None = None,
) -> float:
    """
    Evaluate a constant expression such as "pS(3)", "kappa(4)+0.5" or "theta(2)".

    Plain numbers go through the same path, so every CLI float accepts this syntax.
    """
    table = dict(CONSTANT_FUNCTIONS)
    table.update(functions or {})
    try:
        node = _Parser(text, dict(params or {}), allow_variables=False, functions=table).parse()
    except EllabError:
        raise
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise ExprSyntaxError(f"cannot evaluate {text!r}: {exc}", offset=0, text=text) from exc
    value = float(np.asarray(node.evaluate({})))
    if not math.isfinite(value):
        raise NonFiniteValueError(f"{text!r} evaluates to {value}", fields=[text])
    return value
