"""Scalar expressions in the variables ``s`` and ``t``.

Marching-scale functions, ruling coefficients and coordinate functions of
curves are all entered as text, e.g. ``"exp(s)*t*cos(4*s/5)"``.  This module
parses such text into an immutable tree, evaluates it (on floats or numpy
arrays) and differentiates it symbolically.

Grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' exponent)?
    primary := number | 's' | 't' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'

The exponent of ``^`` must be constant: a number, optionally signed, or a
parenthesised expression free of ``s`` and ``t``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "ExprError",
    "ExprSyntaxError",
    "ExprDomainError",
    "FUNCTIONS",
    "parse",
    "evaluate",
    "differentiate",
    "to_string",
    "free_variables",
    "is_constant",
]

FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt")
VARIABLES = ("s", "t")
CONSTANTS = {"pi": math.pi, "e": math.e}

TAN_POLE_TOL = 1e-9
DIV_TOL = 1e-300


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    """Malformed expression text.  ``offset`` is the 0-based position."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class ExprDomainError(ExprError, ArithmeticError):
    pass


# --------------------------------------------------------------------------
# tree


@dataclass(frozen=True)
class Num:
    value: float

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: "Expr"

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: float

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"

    def __str__(self) -> str:
        return to_string(self)


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]

ZERO = Num(0.0)
ONE = Num(1.0)


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, offset=None):
        if offset is None:
            offset = self.tok[2]
        return ExprSyntaxError(message, offset, self.text)

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.tok
        if text != value or kind not in ("op",):
            found = "end of input" if kind == "end" else repr(text)
            raise self.error(f"expected {value!r}, found {found}")
        self.i += 1

    def parse(self) -> Expr:
        if self.tok[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.tok[0] != "end":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok[0] == "op" and self.tok[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> float:
        kind, text, pos = self.tok
        sign = 1.0
        if kind == "op" and text in ("-", "+"):
            self.take()
            sign = -1.0 if text == "-" else 1.0
            kind, text, pos = self.tok
        if kind == "num":
            self.take()
            return sign * float(text)
        if kind == "ident" and text in CONSTANTS:
            self.take()
            return sign * CONSTANTS[text]
        if kind == "op" and text == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            if free_variables(inner):
                raise self.error("non-constant exponent", pos)
            return sign * float(evaluate(inner, 0.0, 0.0))
        if kind == "ident" and text in VARIABLES:
            raise self.error("non-constant exponent", pos)
        if kind == "ident" and text in FUNCTIONS:
            raise self.error("non-constant exponent (parenthesise constant function calls)", pos)
        found = "end of input" if kind == "end" else repr(text)
        raise self.error(f"expected constant exponent, found {found}", pos)

    def primary(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            if text in VARIABLES:
                return Var(text)
            if text in CONSTANTS:
                return Num(CONSTANTS[text])
            if text in FUNCTIONS:
                if not (self.tok[0] == "op" and self.tok[1] == "("):
                    raise self.error(f"expected '(' after {text}")
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise self.error(f"unknown identifier {text!r}", pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise self.error(f"unexpected {found}", pos)


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Raises:
        ExprSyntaxError: on malformed input; ``err.offset`` locates it.
    """
    if not isinstance(text, str):
        raise TypeError("expression text must be a string")
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# evaluation


def _check(mask, message):
    if np.any(mask):
        raise ExprDomainError(message)


def _eval(e, s, t):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return s if e.name == "s" else t
    if isinstance(e, Neg):
        return -_eval(e.arg, s, t)
    if isinstance(e, BinOp):
        a = _eval(e.left, s, t)
        b = _eval(e.right, s, t)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        _check(np.abs(b) < DIV_TOL, "division by zero")
        return a / b
    if isinstance(e, Pow):
        a = _eval(e.base, s, t)
        p = e.exponent
        if not float(p).is_integer():
            _check(np.asarray(a) < 0, "negative base with fractional exponent")
        if p < 0:
            _check(np.abs(a) < DIV_TOL, "zero base with negative exponent")
        return np.power(a, p)
    if isinstance(e, Call):
        x = _eval(e.arg, s, t)
        f = e.func
        if f == "sin":
            return np.sin(x)
        if f == "cos":
            return np.cos(x)
        if f == "tan":
            _check(np.abs(np.cos(x)) < TAN_POLE_TOL, "tan evaluated at a pole")
            return np.tan(x)
        if f == "exp":
            return np.exp(x)
        if f == "ln":
            _check(np.asarray(x) <= 0, "ln of a non-positive value")
            return np.log(x)
        if f == "sqrt":
            _check(np.asarray(x) < 0, "sqrt of a negative value")
            return np.sqrt(x)
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expr, s=0.0, t=0.0):
    """Evaluate ``e`` at ``(s, t)``.

    ``s`` and ``t`` may be floats or numpy arrays (broadcast together).  A
    float is returned when both are scalars, otherwise an array of the
    broadcast shape.
    """
    scalar = np.ndim(s) == 0 and np.ndim(t) == 0
    s_arr = np.asarray(s, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(e, s_arr, t_arr)
    out = np.broadcast_to(np.asarray(out, dtype=float), np.broadcast(s_arr, t_arr).shape)
    if scalar:
        return float(out)
    return np.array(out)


# --------------------------------------------------------------------------
# construction helpers with literal folding


def num(v: float) -> Num:
    return Num(float(v))


def _is_num(e, value=None):
    return isinstance(e, Num) and (value is None or e.value == value)


def add(a, b):
    if _is_num(a) and _is_num(b):
        return Num(a.value + b.value)
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    if isinstance(b, Neg):
        return sub(a, b.arg)
    return BinOp("+", a, b)


def sub(a, b):
    if _is_num(a) and _is_num(b):
        return Num(a.value - b.value)
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return neg(b)
    if isinstance(b, Neg):
        return add(a, b.arg)
    return BinOp("-", a, b)


def mul(a, b):
    if _is_num(a) and _is_num(b):
        return Num(a.value * b.value)
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return ZERO
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    if _is_num(a, -1.0):
        return neg(b)
    if _is_num(b, -1.0):
        return neg(a)
    if isinstance(a, Neg) and isinstance(b, Neg):
        return mul(a.arg, b.arg)
    if isinstance(a, Neg):
        return neg(mul(a.arg, b))
    if isinstance(b, Neg):
        return neg(mul(a, b.arg))
    return BinOp("*", a, b)


def div(a, b):
    if _is_num(a) and _is_num(b) and b.value != 0.0:
        return Num(a.value / b.value)
    if _is_num(a, 0.0):
        return ZERO
    if _is_num(b, 1.0):
        return a
    if isinstance(a, Neg):
        return neg(div(a.arg, b))
    return BinOp("/", a, b)


def neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(a, p: float):
    if p == 0.0:
        return ONE
    if p == 1.0:
        return a
    if isinstance(a, Num) and (a.value > 0 or float(p).is_integer()):
        return Num(a.value**p)
    return Pow(a, float(p))


def call(f, a):
    return Call(f, a)


# --------------------------------------------------------------------------
# differentiation


def differentiate(e: Expr, var: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to ``var`` (``"s"`` or ``"t"``)."""
    if var not in VARIABLES:
        raise ValueError(f"can only differentiate with respect to s or t, got {var!r}")
    return _d(e, var)


def _d(e, v):
    if isinstance(e, Num):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == v else ZERO
    if isinstance(e, Neg):
        return neg(_d(e.arg, v))
    if isinstance(e, BinOp):
        u, w = e.left, e.right
        du, dw = _d(u, v), _d(w, v)
        if e.op == "+":
            return add(du, dw)
        if e.op == "-":
            return sub(du, dw)
        if e.op == "*":
            return add(mul(du, w), mul(u, dw))
        # quotient rule; the dw == 0 case keeps literal denominators tidy
        if _is_num(dw, 0.0):
            return div(du, w)
        return div(sub(mul(du, w), mul(u, dw)), power(w, 2.0))
    if isinstance(e, Pow):
        du = _d(e.base, v)
        if _is_num(du, 0.0):
            return ZERO
        p = e.exponent
        return mul(mul(Num(p), power(e.base, p - 1.0)), du)
    if isinstance(e, Call):
        u = e.arg
        du = _d(u, v)
        if _is_num(du, 0.0):
            return ZERO
        f = e.func
        if f == "sin":
            outer = call("cos", u)
        elif f == "cos":
            outer = neg(call("sin", u))
        elif f == "tan":
            outer = div(ONE, power(call("cos", u), 2.0))
        elif f == "exp":
            outer = e
        elif f == "ln":
            return div(du, u)
        elif f == "sqrt":
            return div(du, mul(Num(2.0), e))
        else:
            raise TypeError(f"unknown function {f!r}")
        return mul(outer, du)
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_num(v: float) -> str:
    if v == math.pi:
        return "pi"
    if v == math.e:
        return "e"
    if float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _str(e, parent_prec: int) -> str:
    if isinstance(e, Num):
        text = _fmt_num(e.value)
        if e.value < 0 or text.startswith("-"):
            return f"({text})" if parent_prec > 0 else text
        return text
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({_str(e.arg, 0)})"
    if isinstance(e, Pow):
        base = _str(e.base, 4)
        if not isinstance(e.base, (Var, Call)) and not (
            isinstance(e.base, Num) and e.base.value >= 0
        ):
            base = f"({_str(e.base, 0)})"
        p = e.exponent
        exp_text = _fmt_num(p) if p >= 0 else f"({_fmt_num(p)})"
        return f"{base}^{exp_text}"
    if isinstance(e, Neg):
        text = "-" + _str(e.arg, 3)
        return f"({text})" if parent_prec >= 2 else text
    if isinstance(e, BinOp):
        prec = _PREC[e.op]
        left = _str(e.left, prec)
        # right operand of a non-commutative op needs parentheses at equal precedence
        right = _str(e.right, prec + 1 if e.op in ("-", "/") else prec)
        text = f"{left} {e.op} {right}" if prec == 1 else f"{left}{e.op}{right}"
        return f"({text})" if prec < parent_prec else text
    raise TypeError(f"not an expression node: {e!r}")


def to_string(e: Expr) -> str:
    """Render ``e`` as text that :func:`parse` accepts."""
    return _str(e, 0)


def free_variables(e: Expr) -> set[str]:
    if isinstance(e, Num):
        return set()
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Neg, Call)):
        return free_variables(e.arg)
    if isinstance(e, Pow):
        return free_variables(e.base)
    return free_variables(e.left) | free_variables(e.right)


def is_constant(e: Expr) -> bool:
    return not free_variables(e)


def as_expr(value) -> Expr:
    """Coerce text, numbers or trees to an expression tree."""
    if isinstance(value, (Num, Var, Neg, BinOp, Pow, Call)):
        return value
    if isinstance(value, (int, float)):
        return Num(float(value))
    return parse(value)
