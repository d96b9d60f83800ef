"""Canonical text form of polynomials (graded-lex, descending)."""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .poly import Poly


def _monomial(names, e) -> str:
    parts = []
    for v, a in zip(names, e):
        if a == 1:
            parts.append(v)
        elif a > 1:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def _coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    terms = p.sorted_terms()
    if not terms:
        return "0"
    out = []
    for k, (e, c) in enumerate(terms):
        mono = _monomial(p.ctx.names, e)
        mag = abs(c)
        if not mono:
            body = _coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_coeff(mag)}*{mono}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)
