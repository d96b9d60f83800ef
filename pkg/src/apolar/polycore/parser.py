"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' INT]
    atom   := NUMBER | IDENT | '(' expr ')'

Division is only allowed by a nonzero constant, which covers rational
coefficients written as ``p/q`` as well as ``(y1^3 + y2^3)/6``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .poly import PRIMAL, ContextError, Poly, VarContext

DEFAULT_MAX_EXPONENT = 64

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


class UnknownVariable(ParseError):
    pass


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    text = text.replace("−", "-")
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ctx: VarContext, max_exponent: int):
        self.text = text
        self.ctx = ctx
        self.max_exponent = max_exponent
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str) -> None:
        t = self.take()
        if t.value != value:
            raise ParseError(f"expected {value!r}", self.text, t.pos)

    def parse(self) -> Poly:
        if self.peek().kind == "end":
            raise ParseError("empty expression", self.text, 0)
        p = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.value!r}", self.text, t.pos)
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.peek().value in "+-" and self.peek().kind == "op":
            sign = -1 if self.take().value == "-" else 1
        acc = self.term() * sign
        while self.peek().kind == "op" and self.peek().value in "+-":
            op = self.take().value
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.peek().kind == "op" and self.peek().value in "*/":
            op = self.take()
            rhs = self.factor()
            if op.value == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by a nonzero constant", self.text, op.pos)
                acc = acc / rhs
        return acc

    def factor(self) -> Poly:
        base = self.atom()
        if self.peek().value == "^":
            self.take()
            t = self.take()
            if t.kind != "num":
                raise ParseError("exponent must be a nonnegative integer literal", self.text, t.pos)
            k = int(t.value)
            if k > self.max_exponent:
                raise ParseError(f"exponent {k} exceeds cap {self.max_exponent}", self.text, t.pos)
            base = base ** k
        return base

    def atom(self) -> Poly:
        t = self.take()
        if t.kind == "num":
            return Poly.const(self.ctx, int(t.value))
        if t.kind == "ident":
            if t.value not in self.ctx.names:
                raise UnknownVariable(f"unknown variable {t.value!r}", self.text, t.pos)
            return Poly.var(self.ctx, t.value)
        if t.value == "(":
            p = self.expr()
            self.expect(")")
            return p
        what = "end of input" if t.kind == "end" else repr(t.value)
        raise ParseError(f"unexpected {what}", self.text, t.pos)


def parse_poly(text: str, ctx: VarContext, max_exponent: int = DEFAULT_MAX_EXPONENT) -> Poly:
    """Parse ``text`` into a polynomial over ``ctx``."""
    return _Parser(text, ctx, max_exponent).parse()


def identifiers(text: str) -> list[str]:
    """Variable names occurring in ``text``, in order of first appearance."""
    seen: list[str] = []
    for t in _tokenize(text):
        if t.kind == "ident" and t.value not in seen:
            seen.append(t.value)
    return seen


def _natural_key(name: str):
    m = re.fullmatch(r"([A-Za-z_]*)(\d*)", name)
    if m:
        return (m.group(1), int(m.group(2)) if m.group(2) else -1, name)
    return (name, -1, name)


def infer_context(texts: Iterable[str], parameter: str | None = None,
                  role: str = PRIMAL) -> VarContext:
    """Context holding every identifier in ``texts``, naturally sorted, parameter last."""
    names: set[str] = set()
    for t in texts:
        names.update(identifiers(t))
    if parameter is not None:
        names.discard(parameter)
    ordered = sorted(names, key=_natural_key)
    roles = [role] * len(ordered)
    if parameter is not None:
        ordered.append(parameter)
        roles.append("parameter")
    return VarContext(tuple(ordered), tuple(roles))


def indexed_arity(texts: Iterable[str], prefix: str) -> int:
    """Largest index ``i`` among identifiers ``<prefix><i>``."""
    n = 0
    pat = re.compile(rf"{re.escape(prefix)}(\d+)")
    for t in texts:
        for name in identifiers(t):
            m = pat.fullmatch(name)
            if m:
                n = max(n, int(m.group(1)))
            elif name.startswith(prefix):
                raise ContextError(f"malformed variable name {name!r}")
    return n
