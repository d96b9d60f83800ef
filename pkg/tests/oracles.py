"""Independent reference computations built on sympy, used only by tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import sympy

from apolar.polycore import Poly, VarContext, monomial_basis, monomials_of_degree


def to_sympy(p: Poly):
    syms = sympy.symbols(list(p.ctx.names))
    if not isinstance(syms, (tuple, list)):
        syms = (syms,)
    expr = sympy.Integer(0)
    for e, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sympy.expand(expr), list(syms)


def derivative(exponent, p: Poly):
    """``y^exponent`` acting on p by partial differentiation."""
    expr, syms = to_sympy(p)
    for s, k in zip(syms, exponent):
        if k:
            expr = sympy.diff(expr, s, k)
    return sympy.expand(expr), syms


def coefficient_vector(expr, syms, basis):
    poly = sympy.Poly(expr, *syms) if expr != 0 else None
    if poly is None:
        return [0] * len(basis)
    d = dict(poly.terms())
    return [d.get(tuple(e), 0) for e in basis]


def rank(rows) -> int:
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


def brute_annihilator_rank(g: Poly, cap: int) -> int:
    """Dimension of {dual polys of degree <= cap killing g}."""
    n = g.ctx.nvars
    mons = list(monomial_basis(n, cap))
    target = list(monomial_basis(n, max(int(g.degree), 0)))
    cols = [coefficient_vector(*derivative(b, g), target) for b in mons]
    M = sympy.Matrix(cols).T
    return len(mons) - M.rank()


def brute_annihilator(g: Poly, cap: int, dctx: VarContext) -> list[Poly]:
    n = g.ctx.nvars
    mons = list(monomial_basis(n, cap))
    target = list(monomial_basis(n, max(int(g.degree), 0)))
    cols = [coefficient_vector(*derivative(b, g), target) for b in mons]
    M = sympy.Matrix(cols).T
    return [Poly(dctx, {b: _frac(c) for b, c in zip(mons, v) if c != 0}) for v in M.nullspace()]


def _frac(c) -> Fraction:
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


def derivative_rank(f: Poly) -> int:
    """rank of the span of all partial derivatives of f, via sympy."""
    n = f.ctx.nvars
    j = int(f.degree)
    target = list(monomial_basis(n, j))
    rows = [coefficient_vector(*derivative(b, f), target) for b in monomial_basis(n, j)]
    return rank(rows)


def order_ideal_sequences(n: int, length: int, limit: int) -> set[tuple[int, ...]]:
    """All Hilbert functions (1, h1, ..., h_{length-1}) of monomial order ideals in n variables
    with every value at most ``limit``, found by exhaustive search."""
    out = set()

    def divisors_present(m, chosen):
        for i in range(n):
            if m[i]:
                d = list(m)
                d[i] -= 1
                if tuple(d) not in chosen:
                    return False
        return True

    def go(deg, chosen, seq):
        if deg == length:
            out.add(tuple(seq))
            return
        cands = [m for m in monomials_of_degree(n, deg) if divisors_present(m, chosen)]
        for k in range(0, min(len(cands), limit) + 1):
            for pick in combinations(cands, k):
                go(deg + 1, chosen | set(pick), seq + [k])

    go(1, {(0,) * n}, [1])
    return out


__all__ = ["brute_annihilator", "brute_annihilator_rank", "derivative", "derivative_rank",
           "order_ideal_sequences", "rank", "to_sympy"]
