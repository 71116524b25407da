"""A small expression language for right-hand sides ``f(x)``.

Grammar (``^`` is right-associative, unary minus binds looser than ``^``)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := number | 'x' | func '(' expr ')' | '(' expr ')'
    func  := exp | ln | sin | cos | sqrt | erf | abs

Numbers are decimal literals with an optional exponent (``2``, ``0.5``,
``1e-3``). Rational powers are written with parentheses, ``x^(7/6)``.

Expressions are immutable trees. Building them through the helper
constructors (:func:`add`, :func:`mul`, ...) folds constant sub-trees, so
``parse("x^(7/6)")`` holds the exponent as a single constant.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

from .specialfn import erf as _erf

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Neg",
    "Call",
    "ExprError",
    "ParseError",
    "UnknownFunctionError",
    "DomainError",
    "FUNCTIONS",
    "parse",
    "evaluate",
    "differentiate",
    "derivative",
    "to_source",
    "const",
    "var",
    "add",
    "sub",
    "mul",
    "div",
    "power",
    "neg",
    "call",
]


class ExprError(Exception):
    pass


class ParseError(ExprError):
    """Syntax error; ``offset`` is the byte offset into the UTF-8 source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownFunctionError(ParseError):
    pass


class DomainError(ExprError, ValueError):
    """Raised when an expression is evaluated outside its domain."""


# ---------------------------------------------------------------------------
# AST


class Expr:
    """Base class of expression nodes. Calling a node evaluates it."""

    __slots__ = ()

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: float


@dataclass(frozen=True, slots=True)
class Var(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True, slots=True)
class Call(Expr):
    name: str
    arg: Expr


def _ln(u):
    if u <= 0.0:
        raise DomainError(f"ln of non-positive value {u!r}")
    return math.log(u)


def _sqrt(u):
    if u < 0.0:
        raise DomainError(f"sqrt of negative value {u!r}")
    return math.sqrt(u)


def _exp(u):
    try:
        return math.exp(u)
    except OverflowError:
        raise DomainError(f"exp({u!r}) overflows") from None


FUNCTIONS: dict[str, Callable[[float], float]] = {
    "exp": _exp,
    "ln": _ln,
    "sin": math.sin,
    "cos": math.cos,
    "sqrt": _sqrt,
    "erf": _erf,
    "abs": abs,
}


# ---------------------------------------------------------------------------
# evaluation


def _pow(a: float, b: float) -> float:
    if a == 0.0 and b < 0.0:
        raise DomainError("zero raised to a negative power")
    if a < 0.0 and b != math.floor(b):
        raise DomainError(f"negative base {a!r} with non-integer exponent {b!r}")
    try:
        return math.pow(a, b)
    except OverflowError:
        raise DomainError(f"{a!r}^{b!r} overflows") from None


def _div(a: float, b: float) -> float:
    if b == 0.0:
        raise DomainError("division by zero")
    return a / b


def evaluate(e: Expr, x: float) -> float:
    """Evaluate ``e`` at the point ``x`` in binary64."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Add):
        return evaluate(e.left, x) + evaluate(e.right, x)
    if isinstance(e, Sub):
        return evaluate(e.left, x) - evaluate(e.right, x)
    if isinstance(e, Mul):
        return evaluate(e.left, x) * evaluate(e.right, x)
    if isinstance(e, Div):
        return _div(evaluate(e.left, x), evaluate(e.right, x))
    if isinstance(e, Pow):
        return _pow(evaluate(e.base, x), evaluate(e.exponent, x))
    if isinstance(e, Neg):
        return -evaluate(e.operand, x)
    if isinstance(e, Call):
        return FUNCTIONS[e.name](evaluate(e.arg, x))
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# folding constructors


def _is_const(e, value=None):
    return isinstance(e, Const) and (value is None or e.value == value)


def _fold(node: Expr) -> Expr:
    try:
        v = evaluate(node, 0.0)
    except (DomainError, OverflowError, ZeroDivisionError):
        return node
    if math.isfinite(v):
        return Const(v)
    return node


def const(value: float) -> Const:
    return Const(float(value))


def var() -> Var:
    return Var()


def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return _fold(Add(a, b))
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return _fold(Sub(a, b))
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return _fold(Mul(a, b))
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return Const(0.0)
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return _fold(Div(a, b))
    if _is_const(b, 1.0):
        return a
    return Div(a, b)


def power(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return _fold(Pow(a, b))
    if _is_const(b, 1.0):
        return a
    if _is_const(b, 0.0):
        return Const(1.0)
    return Pow(a, b)


def neg(a: Expr) -> Expr:
    if _is_const(a):
        return Const(-a.value)
    return Neg(a)


def call(name: str, arg: Expr) -> Expr:
    if name not in FUNCTIONS:
        raise UnknownFunctionError(f"unknown function {name!r}", 0)
    if _is_const(arg):
        return _fold(Call(name, arg))
    return Call(name, arg)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        n = len(source)
        while pos < n:
            m = _TOKEN_RE.match(source, pos)
            if m is None or m.end() == pos:
                if source[pos:].strip() == "":
                    break
                # skip whitespace before reporting the offending character
                while source[pos].isspace():
                    pos += 1
                raise ParseError(f"unexpected character {source[pos]!r}", self._bytes(pos))
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.end = len(source)
        self.i = 0

    def _bytes(self, char_offset: int) -> int:
        return len(self.source[:char_offset].encode("utf-8"))

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("eof", "", self.end)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, expected: str):
        kind, text, offset = self.peek()
        found = "end of input" if kind == "eof" else repr(text)
        raise ParseError(f"expected {expected}, found {found}", self._bytes(offset))

    def expect_op(self, op: str):
        kind, text, _ = self.peek()
        if kind != "op" or text != op:
            self.fail(repr(op))
        self.take()

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "eof":
            self.fail("operator or end of input")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            e = add(e, rhs) if op == "+" else sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            e = mul(e, rhs) if op == "*" else div(e, rhs)
        return e

    def unary(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return power(base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, text, offset = self.peek()
        if kind == "num":
            self.take()
            return Const(float(text))
        if kind == "name":
            self.take()
            if self.peek()[:2] == ("op", "("):
                if text not in FUNCTIONS:
                    raise UnknownFunctionError(
                        f"unknown function {text!r} (known: {', '.join(FUNCTIONS)})",
                        self._bytes(offset),
                    )
                self.take()
                arg = self.expr()
                self.expect_op(")")
                return call(text, arg)
            if text == "x":
                return Var()
            raise ParseError(f"unknown identifier {text!r}, only 'x' is a variable", self._bytes(offset))
        if kind == "op" and text == "(":
            self.take()
            e = self.expr()
            self.expect_op(")")
            return e
        self.fail("number, 'x', function call or '('")


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree."""
    if not source or not source.strip():
        raise ParseError("empty expression", 0)
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# differentiation

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def differentiate(e: Expr) -> Expr:
    """Symbolic derivative with respect to ``x``."""
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Add):
        return add(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Sub):
        return sub(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Mul):
        a, b = e.left, e.right
        return add(mul(differentiate(a), b), mul(a, differentiate(b)))
    if isinstance(e, Div):
        a, b = e.left, e.right
        num = sub(mul(differentiate(a), b), mul(a, differentiate(b)))
        return div(num, power(b, Const(2.0)))
    if isinstance(e, Neg):
        return neg(differentiate(e.operand))
    if isinstance(e, Pow):
        return _diff_pow(e.base, e.exponent)
    if isinstance(e, Call):
        return mul(_diff_call(e.name, e.arg), differentiate(e.arg))
    raise TypeError(f"not an expression node: {e!r}")


def _diff_pow(a: Expr, b: Expr) -> Expr:
    da = differentiate(a)
    if isinstance(b, Const):
        return mul(mul(b, power(a, Const(b.value - 1.0))), da)
    db = differentiate(b)
    if isinstance(a, Const):
        if a.value <= 0.0:
            raise ExprError("cannot differentiate a non-positive constant base raised to a variable power")
        return mul(mul(Pow(a, b), Const(math.log(a.value))), db)
    # a^b = exp(b ln a), valid for a > 0
    return mul(Pow(a, b), add(mul(db, call("ln", a)), div(mul(b, da), a)))


def _diff_call(name: str, u: Expr) -> Expr:
    if name == "exp":
        return call("exp", u)
    if name == "ln":
        return div(Const(1.0), u)
    if name == "sin":
        return call("cos", u)
    if name == "cos":
        return neg(call("sin", u))
    if name == "sqrt":
        return div(Const(0.5), call("sqrt", u))
    if name == "erf":
        return mul(Const(_TWO_OVER_SQRT_PI), call("exp", neg(power(u, Const(2.0)))))
    if name == "abs":
        # sign(u); undefined (division by zero) at u = 0
        return div(u, call("abs", u))
    raise UnknownFunctionError(f"unknown function {name!r}", 0)


def derivative(e: Expr, n: int = 1) -> Expr:
    """The ``n``-th symbolic derivative of ``e``."""
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    for _ in range(n):
        e = differentiate(e)
    return e


# ---------------------------------------------------------------------------
# printing

_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Neg):
        return _PREC_UNARY
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Const) and (e.value < 0.0 or math.copysign(1.0, e.value) < 0.0):
        return _PREC_UNARY
    return _PREC_ATOM


def _wrap(e: Expr, min_prec: int) -> str:
    s = to_source(e)
    return s if _prec(e) >= min_prec else f"({s})"


def to_source(e: Expr) -> str:
    """Render ``e`` in the input grammar; ``parse(to_source(e)) == e``."""
    if isinstance(e, Const):
        if not math.isfinite(e.value):
            raise ExprError(f"cannot print non-finite constant {e.value!r}")
        if math.copysign(1.0, e.value) < 0.0:
            return f"-{-e.value!r}"
        return repr(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, (Add, Sub, Mul, Div)):
        op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
        p = _prec(e)
        return f"{_wrap(e.left, p)}{op}{_wrap(e.right, p + 1)}"
    if isinstance(e, Neg):
        return f"-{_wrap(e.operand, _PREC_UNARY)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{_wrap(e.exponent, _PREC_UNARY)}"
    if isinstance(e, Call):
        return f"{e.name}({to_source(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


ExprLike = Union[Expr, str]


def as_expr(e: ExprLike) -> Expr:
    return parse(e) if isinstance(e, str) else e
