"""Expression trees for vertex trajectories: parsing, printing, evaluation.

Every vertex trajectory is a pair of closed-form expressions in one time
variable ``t``.  The concrete grammar (EBNF) is

    expr    := term { ("+" | "-") term }
    term    := factor { ("*" | "/") factor }
    factor  := "-" factor | primary [ "^" integer ]
    primary := number | "t" | "pi"
             | ("sin" | "cos" | "sqrt") "(" expr ")"
             | "(" expr ")"

``pi`` is folded into a numeric constant at parse time; there is no separate
node kind for it.  Evaluation either returns a finite value or raises
:class:`ExprDomainError` (square root of a negative number, division by zero,
overflow); it never silently produces NaN or infinity.

Two evaluators are provided.  :func:`evaluate` works on scalars and numpy
arrays and is used for dense grid sampling.  :func:`compile_fn` builds a
scalar closure over :mod:`math`, which is much faster for the many
single-point evaluations done during minimum refinement.  Both apply the same
domain checks.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Expr",
    "ExprSyntaxError",
    "ExprDomainError",
    "const",
    "tvar",
    "neg",
    "add",
    "sub",
    "mul",
    "div",
    "sin",
    "cos",
    "sqrt",
    "powi",
    "parse_expression",
    "to_text",
    "evaluate",
    "evaluate_on",
    "compile_fn",
]

_ARITY = {
    "const": 0,
    "t": 0,
    "neg": 1,
    "sin": 1,
    "cos": 1,
    "sqrt": 1,
    "pow": 1,
    "add": 2,
    "sub": 2,
    "mul": 2,
    "div": 2,
}


class ExprSyntaxError(ValueError):
    """Malformed expression text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ExprDomainError(ArithmeticError):
    """Evaluation left the real domain (or overflowed to infinity)."""

    def __init__(self, reason: str, expr: "Expr | None" = None, t: float | None = None):
        self.reason = reason
        self.expr = expr
        self.t = t
        parts = [reason]
        if expr is not None:
            parts.append(f"in {to_text(expr)!r}")
        if t is not None:
            parts.append(f"at t={t!r}")
        super().__init__(" ".join(parts))


@dataclass(frozen=True)
class Expr:
    """One node of an expression tree.

    ``value`` is meaningful only for ``const`` nodes, ``exponent`` only for
    ``pow`` nodes.  Trees are immutable and compared structurally.
    """

    kind: str
    value: float = 0.0
    exponent: int = 0
    args: tuple["Expr", ...] = ()

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if len(self.args) != _ARITY[self.kind]:
            raise ValueError(
                f"{self.kind!r} node takes {_ARITY[self.kind]} children, got {len(self.args)}"
            )
        if self.kind == "const" and not math.isfinite(self.value):
            raise ValueError("constants must be finite")
        if self.kind == "pow":
            if not isinstance(self.exponent, int) or self.exponent < 0:
                raise ValueError("exponent must be a nonnegative integer")


def const(value: float) -> Expr:
    return Expr("const", value=float(value))


def tvar() -> Expr:
    return Expr("t")


def neg(e: Expr) -> Expr:
    return Expr("neg", args=(e,))


def add(a: Expr, b: Expr) -> Expr:
    return Expr("add", args=(a, b))


def sub(a: Expr, b: Expr) -> Expr:
    return Expr("sub", args=(a, b))


def mul(a: Expr, b: Expr) -> Expr:
    return Expr("mul", args=(a, b))


def div(a: Expr, b: Expr) -> Expr:
    return Expr("div", args=(a, b))


def sin(e: Expr) -> Expr:
    return Expr("sin", args=(e,))


def cos(e: Expr) -> Expr:
    return Expr("cos", args=(e,))


def sqrt(e: Expr) -> Expr:
    return Expr("sqrt", args=(e,))


def powi(base: Expr, exponent: int) -> Expr:
    return Expr("pow", exponent=exponent, args=(base,))


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""
      (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
    | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<op>[-+*/^()])
    | (?P<ws>\s+)
    """,
    re.VERBOSE,
)

_INT_RE = re.compile(r"\d+")

_FUNCS = ("sin", "cos", "sqrt")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), m.start()))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)
        self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {text!r}", pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.term()
                node = add(node, rhs) if text == "+" else sub(node, rhs)
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                rhs = self.factor()
                node = mul(node, rhs) if text == "*" else div(node, rhs)
            else:
                return node

    def factor(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return neg(self.factor())
        node = self.primary()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            kind, text, pos = self.peek()
            if kind != "num" or not _INT_RE.fullmatch(text):
                raise ExprSyntaxError("expected integer exponent", pos)
            self.advance()
            node = powi(node, int(text))
        return node

    def primary(self) -> Expr:
        kind, text, pos = self.advance()
        if kind == "num":
            return const(float(text))
        if kind == "name":
            if text == "t":
                return tvar()
            if text == "pi":
                return const(math.pi)
            if text in _FUNCS:
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return Expr(text, args=(inner,))
            raise ExprSyntaxError(f"unknown identifier {text!r}", pos)
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExprSyntaxError("expected expression", pos)


def parse_expression(text: str) -> Expr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

# precedence levels used to decide parenthesization; atoms bind tightest
_LEVEL = {
    "add": 1,
    "sub": 1,
    "mul": 2,
    "div": 2,
    "neg": 3,
    "pow": 4,
    "const": 5,
    "t": 5,
    "sin": 5,
    "cos": 5,
    "sqrt": 5,
}

_BIN_OP = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


def _fmt_const(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _render(e: Expr, min_level: int) -> str:
    lvl = _LEVEL[e.kind]
    if e.kind == "const":
        s = _fmt_const(e.value)
    elif e.kind == "t":
        s = "t"
    elif e.kind in _FUNCS:
        s = f"{e.kind}({_render(e.args[0], 0)})"
    elif e.kind == "neg":
        s = "-" + _render(e.args[0], 3)
    elif e.kind == "pow":
        s = f"{_render(e.args[0], 5)}^{e.exponent}"
    else:
        # binary operators are left-associative, so the right child needs one
        # extra level to survive a round trip unchanged
        s = _render(e.args[0], lvl) + _BIN_OP[e.kind] + _render(e.args[1], lvl + 1)
    if lvl < min_level:
        s = f"({s})"
    return s


def to_text(e: Expr) -> str:
    """Render to text that parses back to a structurally equal tree.

    The round trip is exact as long as constants are nonnegative (a negative
    constant prints with a leading minus, which re-parses as a negation node).
    The parser never produces negative constants, so anything that came from
    :func:`parse_expression` round-trips.
    """
    return _render(e, 0)


# ---------------------------------------------------------------------------
# evaluation


def evaluate(e: Expr, t):
    """Evaluate at a scalar ``t`` or an ndarray of times.

    The result of a constant subtree stays scalar even for array input; use
    :func:`evaluate_on` when a full-size array is required.  Overflow is
    caught at the node that produces it, so both evaluators fail at the same
    place on the same input.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _ev(e, t)


def evaluate_on(e: Expr, ts: np.ndarray) -> np.ndarray:
    """Evaluate on a sample grid, broadcasting constants to full size."""
    out = np.asarray(evaluate(e, ts), dtype=float)
    if out.shape != np.shape(ts):
        out = np.full(np.shape(ts), float(out))
    return out


def _offending_t(bad, t) -> float | None:
    if np.ndim(t) == 0:
        return float(t)
    bad = np.asarray(bad)
    if bad.ndim == 0:
        # a constant subtree failed; every t is affected
        return None
    idx = int(np.argmax(bad))
    return float(np.asarray(t).reshape(-1)[idx])


def _ev(e: Expr, t):
    # sin, cos and sqrt of finite input are finite, and neg preserves
    # finiteness, so only the arithmetic nodes need an overflow check
    k = e.kind
    if k == "const":
        return e.value
    if k == "t":
        return t
    if k == "neg":
        return -_ev(e.args[0], t)
    if k == "sin":
        return np.sin(_ev(e.args[0], t))
    if k == "cos":
        return np.cos(_ev(e.args[0], t))
    if k == "sqrt":
        v = _ev(e.args[0], t)
        bad = np.asarray(v) < 0.0
        if np.any(bad):
            raise ExprDomainError("square root of a negative value", e, _offending_t(bad, t))
        return np.sqrt(v)
    if k == "add":
        val = _ev(e.args[0], t) + _ev(e.args[1], t)
    elif k == "sub":
        val = _ev(e.args[0], t) - _ev(e.args[1], t)
    elif k == "mul":
        val = _ev(e.args[0], t) * _ev(e.args[1], t)
    elif k == "div":
        num = _ev(e.args[0], t)
        den = _ev(e.args[1], t)
        bad = np.asarray(den) == 0.0
        if np.any(bad):
            raise ExprDomainError("division by zero", e, _offending_t(bad, t))
        val = num / den
    elif k == "pow":
        try:
            # a constant base is a plain float, and float ** int raises
            # instead of returning inf
            val = _ev(e.args[0], t) ** e.exponent
        except OverflowError:
            raise ExprDomainError(
                "non-finite result (overflow)", e, _offending_t(np.asarray(True), t)
            ) from None
    else:
        raise AssertionError(k)
    bad = ~np.isfinite(np.asarray(val))
    if bad.any():
        raise ExprDomainError("non-finite result (overflow)", e, _offending_t(bad, t))
    return val


def compile_fn(e: Expr) -> Callable[[float], float]:
    """Compile to a fast scalar evaluator with the same domain checks."""
    return _compile(e)


def _compile(e: Expr) -> Callable[[float], float]:
    k = e.kind
    if k == "const":
        v = e.value
        return lambda t: v
    if k == "t":
        return lambda t: t
    a = _compile(e.args[0])
    if k == "neg":
        return lambda t: -a(t)
    if k == "sin":
        return lambda t: math.sin(a(t))
    if k == "cos":
        return lambda t: math.cos(a(t))
    if k == "sqrt":

        def fsqrt(t: float) -> float:
            v = a(t)
            if v < 0.0:
                raise ExprDomainError("square root of a negative value", e, t)
            return math.sqrt(v)

        return fsqrt
    if k == "pow":
        p = e.exponent

        def fpow(t: float) -> float:
            try:
                v = a(t) ** p
            except OverflowError:
                raise ExprDomainError("non-finite result (overflow)", e, t) from None
            if not math.isfinite(v):
                raise ExprDomainError("non-finite result (overflow)", e, t)
            return v

        return fpow
    b = _compile(e.args[1])
    if k == "div":

        def fdiv(t: float) -> float:
            den = b(t)
            if den == 0.0:
                raise ExprDomainError("division by zero", e, t)
            v = a(t) / den
            if not math.isfinite(v):
                raise ExprDomainError("non-finite result (overflow)", e, t)
            return v

        return fdiv
    if k == "add":

        def fadd(t: float) -> float:
            v = a(t) + b(t)
            if not math.isfinite(v):
                raise ExprDomainError("non-finite result (overflow)", e, t)
            return v

        return fadd
    if k == "sub":

        def fsub(t: float) -> float:
            v = a(t) - b(t)
            if not math.isfinite(v):
                raise ExprDomainError("non-finite result (overflow)", e, t)
            return v

        return fsub
    if k == "mul":

        def fmul(t: float) -> float:
            v = a(t) * b(t)
            if not math.isfinite(v):
                raise ExprDomainError("non-finite result (overflow)", e, t)
            return v

        return fmul
    raise AssertionError(k)
