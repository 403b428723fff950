"""Small expression grammars used by the command line.

All three grammars share one recursive-descent parser::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | atom ("^" INT)?
    atom   := NUMBER | NAME | NAME "(" args ")" | "(" expr ")"

and differ only in how names and calls are interpreted:

* series:    ``t``, ``phi0``, ``phi(c)``, ``theta(c)``   e.g. ``2*theta(1) - t/3``
* S(g):      basis labels                                e.g. ``x*y + 1/2*z``
* U(g):      ``j(label)`` (or a bare label)              e.g. ``j(x)*j(y) - 1/2*j(z)``
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .coeff import Ring
from .envelope import EnvElement
from .series import TruncSeries, phi_0, phi_c, theta_c
from .superlie import SuperLieAlgebra
from .symcoalg import SymElement


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input at {pos}: {text[pos:]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            if op not in "+-*/^(),":
                raise ParseError(f"unexpected character {op!r}")
            out.append(("op", op))
        pos = m.end()
    return out


@dataclass
class _Num:
    value: Fraction


class _Parser:
    def __init__(self, text, ctx):
        self.toks = tokenize(text)
        self.i = 0
        self.ctx = ctx
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError(f"unexpected end of {self.text!r}")
        if op is not None and tok != ("op", op):
            raise ParseError(f"expected {op!r} in {self.text!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}: {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = self.ctx.add(v, w) if op == "+" else self.ctx.add(v, self.ctx.neg(w))
        return v

    def term(self):
        v = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            w = self.factor()
            if op == "*":
                v = self.ctx.mul(v, w)
            else:
                if not isinstance(w, _Num):
                    raise ParseError("can only divide by a number")
                if w.value == 0:
                    raise ParseError("division by zero")
                v = self.ctx.mul(v, _Num(1 / w.value))
        return v

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return self.ctx.neg(self.factor())
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        v = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, k = self.take()
            if kind != "num" or not k.isdigit():
                raise ParseError("exponent must be a nonnegative integer")
            v = self.ctx.power(v, int(k))
        return v

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return _Num(Fraction(val))
        if kind == "op" and val == "(":
            v = self.expr()
            self.take(")")
            return v
        if kind == "name":
            if self.peek() == ("op", "("):
                self.take()
                args = [self.expr()]
                while self.peek() == ("op", ","):
                    self.take()
                    args.append(self.expr())
                self.take(")")
                return self.ctx.call(val, args)
            return self.ctx.name(val)
        raise ParseError(f"unexpected {val!r} in {self.text!r}")


class _Ctx:
    """Arithmetic on numbers and one kind of ring element."""

    def lift(self, v):
        raise NotImplementedError

    def add(self, a, b):
        if isinstance(a, _Num) and isinstance(b, _Num):
            return _Num(a.value + b.value)
        return self.lift(a) + self.lift(b)

    def neg(self, a):
        return _Num(-a.value) if isinstance(a, _Num) else -a

    def mul(self, a, b):
        if isinstance(a, _Num) and isinstance(b, _Num):
            return _Num(a.value * b.value)
        if isinstance(a, _Num):
            return b.scale(a.value)
        if isinstance(b, _Num):
            return a.scale(b.value)
        return a * b

    def power(self, a, k):
        if isinstance(a, _Num):
            return _Num(a.value**k)
        out = self.lift(_Num(Fraction(1)))
        for _ in range(k):
            out = out * a
        return out

    def call(self, name, args):
        raise ParseError(f"unknown function {name!r}")

    def name(self, name):
        raise ParseError(f"unknown name {name!r}")

    def finish(self, v):
        return self.lift(v)


def _num_arg(name, args) -> Fraction:
    if len(args) != 1 or not isinstance(args[0], _Num):
        raise ParseError(f"{name}(...) takes one numeric argument")
    return args[0].value


class _SeriesCtx(_Ctx):
    def __init__(self, cap: int, ring: Ring):
        self.cap, self.ring = cap, ring

    def lift(self, v):
        if isinstance(v, _Num):
            return TruncSeries.constant(self.ring, v.value, self.cap)
        return v

    def name(self, name):
        if name == "t":
            return TruncSeries.monomial(self.ring, 1, self.cap)
        if name == "phi0":
            return phi_0(self.cap, self.ring)
        return super().name(name)

    def call(self, name, args):
        if name == "phi":
            return phi_c(_num_arg(name, args), self.cap, self.ring)
        if name == "theta":
            return theta_c(_num_arg(name, args), self.cap, self.ring)
        return super().call(name, args)


class _SymCtx(_Ctx):
    def __init__(self, alg: SuperLieAlgebra):
        self.alg = alg

    def lift(self, v):
        if isinstance(v, _Num):
            return SymElement.one(self.alg).scale(v.value)
        return v

    def name(self, name):
        if name in self.alg.labels:
            return SymElement.from_vec(self.alg, {self.alg.index(name): 1})
        return super().name(name)


class _EnvCtx(_Ctx):
    def __init__(self, alg: SuperLieAlgebra):
        self.alg = alg

    def lift(self, v):
        if isinstance(v, _Num):
            return EnvElement.one(self.alg).scale(v.value)
        return v

    def call(self, name, args):
        if name == "j":
            if len(args) != 1:
                raise ParseError("j(...) takes one argument")
            a = args[0]
            if isinstance(a, EnvElement) and a.degree <= 1:
                return a
            raise ParseError("j(...) takes a basis label or a linear combination of them")
        return super().call(name, args)

    def name(self, name):
        if name in self.alg.labels:
            return EnvElement(self.alg, {(self.alg.index(name),): 1})
        return super().name(name)


def _run(text, ctx):
    return ctx.finish(_Parser(text, ctx).parse())


def parse_series(text: str, cap: int, ring: Ring) -> TruncSeries:
    """``phi(1)``, ``theta(1/2) + t``, ``-t``, ``phi0`` ... as a series of the given cap."""
    return _run(text, _SeriesCtx(cap, ring))


def parse_sym(text: str, alg: SuperLieAlgebra) -> SymElement:
    return _run(text, _SymCtx(alg))


def parse_env(text: str, alg: SuperLieAlgebra) -> EnvElement:
    return _run(text, _EnvCtx(alg))


def parse_number(text: str) -> Fraction:
    """A rational literal such as ``-1/2``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad number {text!r}") from e
