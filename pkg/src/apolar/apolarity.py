"""Contraction of dual operators on polynomials and the apolar algebra of f.

Dual variables act on primal ones by partial differentiation:
``y_i ⌟ f = df/dx_i``. Everything about the apolar algebra ``T/f^⊥`` is
computed inside the finite-dimensional derivative space ``Tf``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from .polycore import ADJOINED, DUAL, PRIMAL, ContextError, Echelon, Poly, Span, VarContext
from .polycore.poly import Exponent, basis_index, count_monomials, monomial_basis, monomials_of_degree
from .polycore.echelon import integer_row
from .polycore.span import poly_row

HilbertFunction = tuple[int, ...]


class ZeroPolynomialError(ValueError):
    """The zero polynomial has no apolar algebra."""


def _dual_name(name: str, role: str) -> str:
    m = re.fullmatch(r"x(\d+)", name)
    if m:
        return f"y{m.group(1)}"
    if role == ADJOINED:
        return "a" if name == "X" else f"d{name}"
    return f"d{name}"


def dual_context(ctx: VarContext) -> VarContext:
    """Dual context paired position-by-position with the primal ``ctx``."""
    names = tuple(_dual_name(v, r) for v, r in zip(ctx.names, ctx.roles))
    roles = tuple(DUAL if r == PRIMAL else r for r in ctx.roles)
    return VarContext(names, roles)


def primal_context(dctx: VarContext) -> VarContext:
    names = []
    for v, r in zip(dctx.names, dctx.roles):
        m = re.fullmatch(r"y(\d+)", v)
        if m:
            names.append(f"x{m.group(1)}")
        elif r == ADJOINED and v == "a":
            names.append("X")
        else:
            names.append(v[1:] if v.startswith("d") and len(v) > 1 else f"p{v}")
    roles = tuple(PRIMAL if r == DUAL else r for r in dctx.roles)
    return VarContext(tuple(names), roles)


def _falling(a: int, b: int) -> int:
    out = 1
    for k in range(a - b + 1, a + 1):
        out *= k
    return out


def contract(d: Poly, f: Poly) -> Poly:
    """``d ⌟ f``: substitute d/dx_i for y_i in ``d`` and apply it to ``f``."""
    if not d.ctx.pairs_with(f.ctx):
        raise ContextError(f"({d.ctx}) does not act on ({f.ctx})")
    out: dict[Exponent, Fraction] = {}
    fterms = list(f.items())
    for b, cb in d.items():
        for a, ca in fterms:
            if all(x >= y for x, y in zip(a, b)):
                e = tuple(x - y for x, y in zip(a, b))
                mult = 1
                for x, y in zip(a, b):
                    if y:
                        mult *= _falling(x, y)
                out[e] = out.get(e, 0) + cb * ca * mult
    return Poly(f.ctx, out)


def contract_monomial(b: Exponent, f: Poly) -> Poly:
    """``y^b ⌟ f`` without building the dual polynomial."""
    out = {}
    for a, ca in f.items():
        if all(x >= y for x, y in zip(a, b)):
            mult = 1
            for x, y in zip(a, b):
                if y:
                    mult *= _falling(x, y)
            out[tuple(x - y for x, y in zip(a, b))] = ca * mult
    return Poly(f.ctx, out)


def pairing(a: Exponent, b: Exponent) -> int:
    """``(y^a ⌟ x^b)(0)``, which equals ``a!`` when a == b and 0 otherwise."""
    if tuple(a) != tuple(b):
        return 0
    out = 1
    for k in a:
        out *= factorial(k)
    return out


def _require_nonzero(f: Poly) -> None:
    if f.is_zero():
        raise ZeroPolynomialError("the zero polynomial has no apolar algebra")


class Derivatives:
    """All derivatives ``y^b ⌟ f`` of a fixed nonzero ``f`` and the spans built from them."""

    def __init__(self, f: Poly):
        _require_nonzero(f)
        self.f = f
        self.j = int(f.degree)
        self.n = f.ctx.nvars
        # by_order[m] lists (b, y^b ⌟ f) for |b| = m
        self.by_order: list[list[tuple[Exponent, Poly]]] = [
            [(b, contract_monomial(b, f)) for b in monomials_of_degree(self.n, m)]
            for m in range(self.j + 1)
        ]

    @cached_property
    def powers(self) -> list[Span]:
        """``(Tf)^m = m_T^m f`` for m = 0..j+1 (the last one is zero)."""
        spans: list[Span] = [Span(self.f.ctx, self.j)] * (self.j + 2)
        ech = Echelon()
        for m in range(self.j, -1, -1):
            for _, p in self.by_order[m]:
                if p:
                    ech.add(poly_row(p, self.j))
            spans[m] = Span(self.f.ctx, self.j, ech.copy())
        return spans

    def power(self, m: int) -> Span:
        if m > self.j + 1:
            return self.powers[self.j + 1]
        return self.powers[max(m, 0)]

    def piece(self, n: int, m: int) -> Span:
        """``(Tf)_n^m``: elements of ``m_T^m f`` of degree < n."""
        return self.power(m).below_degree(n)

    def space_upto(self, d: int) -> Span:
        """span{ y^b ⌟ f : |b| <= d }."""
        return Span.from_polys((p for m in range(min(d, self.j) + 1) for _, p in self.by_order[m]),
                               self.f.ctx, self.j)


def derivative_space(f: Poly) -> Span:
    """Span of all derivatives of ``f``; its rank is the rank of the apolar algebra."""
    return Derivatives(f).power(0)


def filtered_piece(f: Poly, n: int, m: int) -> Span:
    return Derivatives(f).piece(n, m)


def hilbert_function(f: Poly, derivs: Derivatives | None = None) -> HilbertFunction:
    """Local Hilbert function of ``T/f^⊥``, computed two ways and cross-checked."""
    D = derivs or Derivatives(f)
    j = D.j
    by_power = [D.power(t).rank - D.power(t + 1).rank for t in range(j + 1)]
    full = D.power(0)
    by_degree = [full.below_degree(t + 1).rank - full.below_degree(t).rank for t in range(j + 1)]
    if by_power != by_degree:
        raise ArithmeticError(f"Hilbert function formulas disagree: {by_power} vs {by_degree}")
    while len(by_power) > 1 and by_power[-1] == 0:
        by_power.pop()
    return tuple(by_power)


def apolar_rank(f: Poly) -> int:
    return derivative_space(f).rank


def annihilator_space(f: Poly, d: int, dctx: VarContext | None = None) -> Span:
    """``f^⊥ ∩ T_{<=d}``: kernel of contraction on dual polynomials of degree <= d."""
    _require_nonzero(f)
    dctx = dctx or dual_context(f.ctx)
    j = int(f.degree)
    n = f.ctx.nvars
    left = count_monomials(n, j)
    right_basis = monomial_basis(n, d)
    ech = Echelon()
    lidx = basis_index(n, j)
    for col, b in enumerate(right_basis):
        img = contract_monomial(b, f)
        row = {lidx[e]: c for e, c in img.items()}
        row[left + col] = Fraction(1)
        ech.add(integer_row(row))
    kernel = [{k - left: v for k, v in r.items()} for c, r in ech.pivots.items() if c >= left]
    return Span.from_rows(kernel, dctx, d)


@dataclass
class ApolarPresentation:
    """Generators of ``f^⊥`` emitted greedily by degree (with the degree j+1 closure)."""

    f: Poly
    socle_degree: int
    generators: list[Poly]
    algebra_rank: int
    dual_ctx: VarContext = field(repr=False, default=None)

    def by_degree(self) -> dict[int, list[Poly]]:
        out: dict[int, list[Poly]] = {}
        for g in self.generators:
            out.setdefault(int(g.degree), []).append(g)
        return out

    def to_json(self) -> dict:
        return {
            "f": str(self.f),
            "socle_degree": self.socle_degree,
            "generators": [str(g) for g in self.generators],
            "rank": self.algebra_rank,
        }


def apolar_generators(f: Poly, dctx: VarContext | None = None, verify: bool = True) -> ApolarPresentation:
    """Generators of the apolar ideal of ``f``, degree by degree up to j+1.

    A dual polynomial of degree <= d annihilating ``f`` is emitted when it is
    not in the ideal generated by what was emitted before (membership via
    truncated ideal spans at cap j+1).
    """
    from .ideals import truncate_ideal

    _require_nonzero(f)
    dctx = dctx or dual_context(f.ctx)
    j = int(f.degree)
    cap = j + 1
    gens: list[Poly] = []
    for d in range(1, cap + 1):
        K = annihilator_space(f, d, dctx)
        if K.rank == 0:
            continue
        if gens:
            have = truncate_ideal(gens, cap, check_stability=False).span_upto(d).recapped(d)
        else:
            have = Span(dctx, d)
        ech = have.echelon.copy()
        for p in K.polys():
            if ech.add(poly_row(p, d)):
                gens.append(p)
    pres = ApolarPresentation(f, j, gens, apolar_rank(f), dctx)
    if verify:
        verify_presentation(pres)
    return pres


def verify_presentation(pres: ApolarPresentation) -> None:
    """Check annihilation and the degreewise corank identity; raise on failure."""
    from .ideals import truncate_ideal

    f, j = pres.f, pres.socle_degree
    for g in pres.generators:
        if contract(g, f):
            raise ArithmeticError(f"generator {g} does not annihilate {f}")
    D = Derivatives(f)
    ideal = truncate_ideal(pres.generators, j + 1, check_stability=False) if pres.generators else None
    n = f.ctx.nvars
    for d in range(j + 2):
        have = ideal.span_upto(d).rank if ideal else 0
        corank = count_monomials(n, d) - have
        if corank != D.space_upto(d).rank:
            raise ArithmeticError(f"generated ideal has wrong corank {corank} in degree <= {d}")
