"""Exact symbolic expression layer used by every other module.

Expressions are sympy objects restricted to a closed node set:

* rational constants (arbitrary precision, lowest terms),
* symbols,
* sums, products,
* powers with *rational* exponents,
* kernel applications from ``exp, ln, sin, cos, tan, sinh, cosh, tanh, sqrt``.

Powers with a symbolic exponent (``R^s``) are not nodes; they are stored as
``exp(s*ln(R))``, which :func:`normalize` enforces.  Floating point numbers,
complex units and infinities are rejected.

The canonical form produced by :func:`normalize` is the multivariate rational
normal form (expanded numerator and denominator over a common denominator, in
lowest terms) with kernel applications treated as opaque generators whose
arguments are themselves normalized.  On the purely rational subclass this
form is a decision procedure: an expression normalizes to the literal ``0``
iff it is mathematically zero.

Zero testing (:func:`is_zero`) is three-valued.  Beyond the normal form it
applies a small deterministic rewrite set (``sin^2 -> 1 - cos^2``,
``sinh^2 -> cosh^2 - 1``, exponent combination) and, failing that, samples the
expression at random rational points, reporting a *probabilistic* zero.

Grammar accepted by :func:`parse` (and emitted by :func:`render`)::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('-' | '+') unary | power
    power    := atom ('^' exponent)?
    exponent := ['-'] int | '(' ['-'] int ['/' int] ')'
    atom     := int | name | kernel '(' expr ')' | '(' expr ')'

``^`` takes integer or rational literal exponents only; rational exponents
are parenthesized (``x^(3/2)``) so ``x^3/2`` stays ``(x^3)/2``.  Rational
constants such as ``3/2`` are ordinary term-level divisions and parse
exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

import sympy as sp
from sympy.printing.str import StrPrinter

__all__ = [
    "Expr",
    "ExprError",
    "ExprSyntaxError",
    "UnsupportedExpressionError",
    "KERNELS",
    "Tri",
    "ZeroResult",
    "ZeroTestConfig",
    "zero_config",
    "parse",
    "render",
    "normalize",
    "diff",
    "substitute",
    "is_zero",
    "surely_zero",
    "simplify_kernels",
    "eval_numeric",
    "random_rational",
]

Expr = sp.Expr

#: kernel name -> sympy function.  ``sqrt`` is representable both as the
#: kernel call and as a power with exponent 1/2; sympy stores it as the power.
KERNELS: dict[str, sp.Function] = {
    "exp": sp.exp,
    "ln": sp.log,
    "sin": sp.sin,
    "cos": sp.cos,
    "tan": sp.tan,
    "sinh": sp.sinh,
    "cosh": sp.cosh,
    "tanh": sp.tanh,
    "sqrt": sp.sqrt,
}

_KERNEL_CLASSES = (sp.exp, sp.log, sp.sin, sp.cos, sp.tan, sp.sinh, sp.cosh, sp.tanh)


class ExprError(ValueError):
    """Base class for expression-layer errors."""


class ExprSyntaxError(ExprError):
    """Parse failure; ``offset`` is the byte offset into the source text."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class UnsupportedExpressionError(ExprError):
    """An expression uses a node outside the supported closed set."""


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    _IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
    _IDENT_CONT = _IDENT_START | set("0123456789")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ExprSyntaxError:
        return ExprSyntaxError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek():
            raise self.error(f"unexpected trailing input {self.peek()!r}")
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            t = self.term()
            terms.append(t if op == "+" else sp.Mul(sp.Integer(-1), t))
        return sp.Add(*terms)

    def term(self) -> Expr:
        factors = [self.unary()]
        while self.peek() in ("*", "/"):
            op = self.peek()
            self.pos += 1
            f = self.unary()
            factors.append(f if op == "*" else sp.Pow(f, sp.Integer(-1)))
        return sp.Mul(*factors)

    def unary(self) -> Expr:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.peek() == "-":
                sign = -sign
            self.pos += 1
        p = self.power()
        return p if sign == 1 else sp.Mul(sp.Integer(-1), p)

    def power(self) -> Expr:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            return sp.Pow(base, self.exponent())
        return base

    def exponent(self) -> sp.Rational:
        # bare exponents are signed integers; rationals need parentheses so
        # that x^2/3 stays (x^2)/3 while x^(2/3) is the rational power
        paren = self.peek() == "("
        if paren:
            self.take("(")
        sign = 1
        while self.peek() in ("+", "-"):
            if self.peek() == "-":
                sign = -sign
            self.pos += 1
        if not self.peek().isdigit():
            raise self.error("exponent must be an integer or rational literal")
        num = self.integer()
        den = 1
        if paren and self.peek() == "/":
            self.pos += 1
            if not self.peek().isdigit():
                raise self.error("exponent must be an integer or rational literal")
            den = self.integer()
        if paren:
            self.take(")")
        return sp.Rational(sign * num, den)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            raise self.error("floating point literals are not supported")
        return int(self.text[start:self.pos])

    def atom(self) -> Expr:
        ch = self.peek()
        if ch == "(":
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        if ch.isdigit():
            return sp.Integer(self.integer())
        if ch in self._IDENT_START:
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] in self._IDENT_CONT:
                self.pos += 1
            name = self.text[start:self.pos]
            if self.peek() == "(":
                if name not in KERNELS:
                    self.pos = start
                    raise self.error(f"unknown kernel {name!r}")
                self.take("(")
                arg = self.expr()
                self.take(")")
                return KERNELS[name](arg)
            return sp.Symbol(name)
        if ch == "":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected character {ch!r}")


def parse(text: str) -> Expr:
    """Parse ``text`` in the expression grammar and return it normalized."""
    return normalize(_Parser(text).parse())


# ---------------------------------------------------------------------------
# rendering


class _GrammarPrinter(StrPrinter):
    """Prints within the parse grammar: ``^`` powers, ``ln`` for log."""

    def __init__(self):
        super().__init__({"order": "lex"})

    def _print_log(self, expr):
        return f"ln({self._print(expr.args[0])})"

    def _print_Exp1(self, expr):
        return "exp(1)"

    def parenthesize(self, item, level, strict=False):  # noqa: D102 (base override)
        return super().parenthesize(item, level, strict=strict)

    def _print_Pow(self, expr, rational=False):
        base, e = expr.args
        if e is sp.S.Half:
            return f"sqrt({self._print(base)})"
        if e == -sp.S.Half:
            return f"1/sqrt({self._print(base)})"
        if e is sp.S.NegativeOne:
            from sympy.printing.precedence import PRECEDENCE

            return f"1/{self.parenthesize(base, PRECEDENCE['Mul'], strict=True)}"
        from sympy.printing.precedence import PRECEDENCE

        b = self.parenthesize(base, PRECEDENCE["Pow"], strict=True)
        if e.is_Integer and e >= 0:
            return f"{b}^{e}"
        return f"{b}^({e})"


_printer = _GrammarPrinter()


def render(e: Expr) -> str:
    """Render ``e`` in the same grammar :func:`parse` accepts."""
    return _printer.doprint(normalize(e))


# ---------------------------------------------------------------------------
# normalization


def _check_atom(a: sp.Basic) -> None:
    if a is sp.I or a is sp.zoo or a is sp.oo or a is -sp.oo or a is sp.nan:
        raise UnsupportedExpressionError(f"unsupported atom {a}")
    if isinstance(a, sp.Float):
        raise UnsupportedExpressionError("floating point constants are not supported")


def _discipline(e: sp.Basic) -> sp.Basic:
    """Rebuild bottom-up, enforcing the closed node set."""
    if e.is_Atom:
        _check_atom(e)
        return e
    args = [_discipline(a) for a in e.args]
    if isinstance(e, sp.Pow):
        base, expo = args
        if not isinstance(expo, sp.Rational):
            return sp.exp(sp.Mul(expo, sp.log(base)))
        return sp.Pow(base, expo)
    if isinstance(e, sp.Function):
        if not isinstance(e, _KERNEL_CLASSES):
            raise UnsupportedExpressionError(f"unsupported kernel {e.func}")
        return e.func(*args)
    if isinstance(e, (sp.Add, sp.Mul)):
        return e.func(*args)
    raise UnsupportedExpressionError(f"unsupported node {type(e).__name__}")


def _normalize_kernel_args(e: sp.Basic) -> sp.Basic:
    if e.is_Atom:
        return e
    if isinstance(e, sp.Function):
        return e.func(*[normalize(a) for a in e.args])
    return e.func(*[_normalize_kernel_args(a) for a in e.args])


def normalize(e: Expr | int) -> Expr:
    """Canonical rational normal form with kernels as opaque generators."""
    e = sp.sympify(e, rational=True)
    e = _discipline(e)
    e = _normalize_kernel_args(e)
    return sp.cancel(e)


def diff(e: Expr, s: sp.Symbol | str, n: int = 1) -> Expr:
    """Exact partial derivative, normalized."""
    return normalize(sp.diff(normalize(e), sp.Symbol(s) if isinstance(s, str) else s, n))


def substitute(e: Expr, bindings: Mapping[sp.Symbol | str, Expr]) -> Expr:
    """Simultaneous substitution of ``bindings``, then normalization."""
    subs = {
        (sp.Symbol(k) if isinstance(k, str) else k): sp.sympify(v, rational=True)
        for k, v in bindings.items()
    }
    return normalize(normalize(e).subs(subs, simultaneous=True))


# ---------------------------------------------------------------------------
# zero testing


class Tri(Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ZeroResult:
    state: Tri
    probabilistic: bool = False

    def __bool__(self) -> bool:
        return self.state is Tri.ZERO


@dataclass
class ZeroTestConfig:
    """Process-wide defaults for the probabilistic zero test."""

    samples: int = 12
    seed: int = 0


zero_config = ZeroTestConfig()

_ZERO_TOL = sp.Float("1e-10")
_NONZERO_TOL = sp.Float("1e-6")


def _is_rational_tree(e: sp.Basic) -> bool:
    if e.is_Atom:
        return True
    if isinstance(e, sp.Pow):
        return e.args[1].is_Integer and all(_is_rational_tree(a) for a in e.args)
    if isinstance(e, (sp.Add, sp.Mul)):
        return all(_is_rational_tree(a) for a in e.args)
    return False


def simplify_kernels(e: Expr) -> Expr:
    """Apply the fixed confluent rewrite set, then re-cancel.

    tan -> sin/cos, tanh -> sinh/cosh, sin^2 -> 1 - cos^2,
    sinh^2 -> cosh^2 - 1, exp(a)*exp(b) -> exp(a+b).  This deterministic set
    backs the exact branch of the zero test; it is kept out of
    :func:`normalize` so the canonical form stays predictable, but callers
    (notably coordinate transforms) may use it to collapse identity relics.
    """
    e = normalize(e)
    e = e.replace(lambda x: isinstance(x, sp.tan),
                  lambda x: sp.sin(x.args[0]) / sp.cos(x.args[0]))
    e = e.replace(lambda x: isinstance(x, sp.tanh),
                  lambda x: sp.sinh(x.args[0]) / sp.cosh(x.args[0]))
    e = sp.expand(e)
    e = e.replace(
        lambda x: isinstance(x, sp.Pow) and isinstance(x.args[0], sp.sin)
        and x.args[1].is_Integer and x.args[1] >= 2,
        lambda x: (1 - sp.cos(x.args[0].args[0]) ** 2) ** (x.args[1] // 2)
        * sp.sin(x.args[0].args[0]) ** (x.args[1] % 2),
    )
    e = e.replace(
        lambda x: isinstance(x, sp.Pow) and isinstance(x.args[0], sp.sinh)
        and x.args[1].is_Integer and x.args[1] >= 2,
        lambda x: (sp.cosh(x.args[0].args[0]) ** 2 - 1) ** (x.args[1] // 2)
        * sp.sinh(x.args[0].args[0]) ** (x.args[1] % 2),
    )
    e = sp.powsimp(sp.expand(e), deep=True, combine="exp")
    return sp.cancel(e)


def random_rational(rng: random.Random, positive: bool = False) -> sp.Rational:
    """Random rational with |value| in [1/5, 5], numerator/denominator <= 64."""
    while True:
        num = rng.randint(1, 64)
        den = rng.randint(1, 64)
        q = sp.Rational(num, den)
        if sp.Rational(1, 5) <= q <= 5:
            break
    if not positive and rng.random() < 0.5:
        q = -q
    return q


def _positive_symbols(e: sp.Basic) -> set[sp.Symbol]:
    """Symbols that must be sampled positive (log arguments, radicand bases)."""
    out: set[sp.Symbol] = set()
    for node in sp.preorder_traversal(e):
        if isinstance(node, sp.log):
            out |= node.args[0].free_symbols
        elif isinstance(node, sp.Pow) and not node.args[1].is_Integer:
            out |= node.args[0].free_symbols
    return out


def eval_numeric(e: Expr, point: Mapping[sp.Symbol, sp.Rational], dps: int = 40):
    """Evaluate at a rational point with mpmath; returns a sympy Float.

    Raises ``ValueError`` on poles or non-real values.
    """
    v = e.subs(point, simultaneous=True)
    if v.is_Rational:
        return v
    v = v.evalf(dps)
    if v.has(sp.zoo, sp.oo, -sp.oo, sp.nan):
        raise ValueError("pole at sample point")
    if not v.is_number:
        raise ValueError("sample point left free symbols")
    re, im = v.as_real_imag()
    if abs(im) > _ZERO_TOL:
        raise ValueError("non-real value at sample point")
    return re


def is_zero(e: Expr, *, samples: int | None = None, seed: int | None = None) -> ZeroResult:
    """Three-valued zero test.

    ``ZERO`` (exact) if the normal form plus the rewrite set collapses to the
    literal 0; ``ZERO`` (probabilistic) if all sampled rational points
    evaluate below 1e-10; ``NONZERO`` if the expression is a nonzero rational
    normal form or any sample exceeds 1e-6; ``UNKNOWN`` otherwise.
    """
    n = normalize(e)
    if n == 0:
        return ZeroResult(Tri.ZERO, probabilistic=False)
    if _is_rational_tree(n):
        # canonical on the rational subclass, so nonzero form means nonzero
        return ZeroResult(Tri.NONZERO, probabilistic=False)
    r = simplify_kernels(n)
    if r == 0:
        return ZeroResult(Tri.ZERO, probabilistic=False)

    k = zero_config.samples if samples is None else samples
    syms = sorted(n.free_symbols, key=lambda s: s.name)
    positive = _positive_symbols(n)
    rng = random.Random(f"{zero_config.seed}|{seed}|{sp.srepr(n)}")
    if not syms:
        try:
            v = eval_numeric(n, {})
        except ValueError:
            return ZeroResult(Tri.UNKNOWN)
        if abs(v) < _ZERO_TOL:
            return ZeroResult(Tri.ZERO, probabilistic=True)
        if abs(v) > _NONZERO_TOL:
            return ZeroResult(Tri.NONZERO)
        return ZeroResult(Tri.UNKNOWN)

    zero_votes = 0
    attempts = 0
    max_attempts = 6 * k
    while zero_votes < k and attempts < max_attempts:
        attempts += 1
        point = {s: random_rational(rng, positive=s in positive) for s in syms}
        try:
            v = eval_numeric(r, point)
        except ValueError:
            continue
        if abs(v) > _NONZERO_TOL:
            return ZeroResult(Tri.NONZERO)
        if abs(v) < _ZERO_TOL:
            zero_votes += 1
        else:
            return ZeroResult(Tri.UNKNOWN)
    if zero_votes >= k:
        return ZeroResult(Tri.ZERO, probabilistic=True)
    return ZeroResult(Tri.UNKNOWN)


def surely_zero(e: Expr, **kw) -> bool:
    """True iff :func:`is_zero` reports ZERO (exact or probabilistic)."""
    return is_zero(e, **kw).state is Tri.ZERO


def all_zero(exprs: Iterable[Expr], **kw) -> bool:
    return all(surely_zero(x, **kw) for x in exprs)
