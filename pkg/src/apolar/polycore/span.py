"""Linear subspaces of the degree-capped polynomial space."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .echelon import Echelon, Row, full_reduce, integer_row
from .poly import ContextError, Exponent, Poly, VarContext, basis_index, monomial_basis


class SpanError(ValueError):
    pass


def poly_row(p: Poly, cap: int) -> Row:
    """Integer row of ``p`` against the graded-lex basis of degree <= ``cap``."""
    idx = basis_index(p.ctx.nvars, cap)
    try:
        return integer_row({idx[e]: c for e, c in p.items()})
    except KeyError:
        raise SpanError(f"polynomial of degree {p.degree} exceeds cap {cap}") from None


class Span:
    """Subspace of polynomials of degree <= ``cap`` over ``ctx``.

    Columns are the monomials of degree <= cap in graded-lex descending
    order, so a row's pivot is its leading monomial. The canonical
    representation is the reduced row echelon form (``rows``).
    """

    def __init__(self, ctx: VarContext, cap: int, echelon: Echelon | None = None):
        self.ctx = ctx
        self.cap = cap
        self._ech = echelon if echelon is not None else Echelon()
        self._rref: list[dict[int, Fraction]] | None = None

    # construction

    @classmethod
    def from_polys(cls, polys: Iterable[Poly], ctx: VarContext, cap: int) -> Span:
        ech = Echelon()
        for p in polys:
            if p.ctx != ctx:
                raise ContextError(f"context mismatch: ({p.ctx}) vs ({ctx})")
            if p:
                ech.add(poly_row(p, cap))
        return cls(ctx, cap, ech)

    @classmethod
    def from_rows(cls, rows: Iterable[Row], ctx: VarContext, cap: int) -> Span:
        ech = Echelon()
        ech.extend(rows)
        return cls(ctx, cap, ech)

    @classmethod
    def monomials_below(cls, ctx: VarContext, cap: int, degree: int) -> Span:
        """Span of all monomials of degree < ``degree``."""
        idx = basis_index(ctx.nvars, cap)
        basis = monomial_basis(ctx.nvars, cap)
        return cls.from_rows(({idx[e]: 1} for e in basis if sum(e) < degree), ctx, cap)

    # inspection

    @property
    def basis(self) -> tuple[Exponent, ...]:
        return monomial_basis(self.ctx.nvars, self.cap)

    @property
    def ambient_dim(self) -> int:
        return len(self.basis)

    @property
    def rank(self) -> int:
        return self._ech.rank

    def __len__(self) -> int:
        return self.rank

    @property
    def echelon(self) -> Echelon:
        return self._ech

    @property
    def rows(self) -> list[dict[int, Fraction]]:
        if self._rref is None:
            self._rref = self._ech.reduced_rows()
        return self._rref

    def pivot_columns(self) -> list[int]:
        return sorted(self._ech.pivots)

    def pivot_monomials(self) -> list[Exponent]:
        basis = self.basis
        return [basis[c] for c in self.pivot_columns()]

    def row_poly(self, row: dict[int, Fraction]) -> Poly:
        basis = self.basis
        return Poly(self.ctx, {basis[k]: v for k, v in row.items()})

    def polys(self) -> list[Poly]:
        """RREF basis as polynomials (monic, leading monomials strictly decreasing)."""
        return [self.row_poly(r) for r in self.rows]

    def _compatible(self, other: Span) -> None:
        if self.ctx != other.ctx:
            raise SpanError(f"context mismatch: ({self.ctx}) vs ({other.ctx})")
        if self.cap != other.cap:
            raise SpanError(f"cap mismatch: {self.cap} vs {other.cap}")

    def row_of(self, p: Poly) -> Row:
        if p.ctx != self.ctx:
            raise SpanError(f"context mismatch: ({p.ctx}) vs ({self.ctx})")
        return poly_row(p, self.cap)

    def contains(self, p: Poly) -> bool:
        if not p:
            return True
        return self._ech.contains(self.row_of(p))

    def __contains__(self, p: Poly) -> bool:
        return self.contains(p)

    def reduce(self, p: Poly) -> Poly:
        """Canonical representative of ``p`` modulo the span."""
        if not p:
            return p
        idx = basis_index(self.ctx.nvars, self.cap)
        vec = {idx[e]: c for e, c in p.items()}
        rref = self.rows
        pivot_of = {min(r): i for i, r in enumerate(rref)}
        return self.row_poly(full_reduce(vec, rref, pivot_of))

    def contains_span(self, other: Span) -> bool:
        self._compatible(other)
        return all(self._ech.contains(r) for r in other._ech.pivots.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Span):
            return NotImplemented
        return (self.ctx == other.ctx and self.cap == other.cap and self.rank == other.rank
                and self.contains_span(other))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Span(rank={self.rank}, cap={self.cap}, ctx=({self.ctx}))"

    # lattice operations

    def sum(self, other: Span) -> Span:
        self._compatible(other)
        ech = self._ech.copy()
        ech.extend(other._ech.pivots.values())
        return Span(self.ctx, self.cap, ech)

    __add__ = sum

    def intersection(self, other: Span) -> Span:
        """Zassenhaus: echelonize [a | a] over [b | 0]; rows with zero left half span a & b."""
        self._compatible(other)
        if self.rank == 0 or other.rank == 0:
            return Span(self.ctx, self.cap)
        if self.contains_span(other):
            return other
        if other.contains_span(self):
            return self
        n = self.ambient_dim
        ech = Echelon()
        for r in self._ech.pivots.values():
            doubled = dict(r)
            doubled.update({k + n: v for k, v in r.items()})
            ech.add(doubled)
        for r in other._ech.pivots.values():
            ech.add(dict(r))
        rows = [{k - n: v for k, v in r.items()} for c, r in ech.pivots.items() if c >= n]
        return Span.from_rows(rows, self.ctx, self.cap)

    __and__ = intersection

    def quotient_rank(self, sub: Span) -> int:
        """rank(self / sub); ``sub`` must be contained in ``self``."""
        self._compatible(sub)
        if not self.contains_span(sub):
            raise SpanError("quotient requires the second span to be a subspace of the first")
        return self.rank - sub.rank

    def below_degree(self, n: int) -> Span:
        """Intersection with the polynomials of degree < n.

        Valid by row selection: in graded-lex descending columns the entries
        of a row after its pivot never exceed the pivot's degree.
        """
        basis = self.basis
        keep = {c: r for c, r in self._ech.pivots.items() if sum(basis[c]) < n}
        return Span(self.ctx, self.cap, Echelon(keep))

    def recapped(self, cap: int) -> Span:
        """Same subspace viewed inside a different cap (must still fit)."""
        if cap == self.cap:
            return self
        return Span.from_polys(self.polys(), self.ctx, cap)


def span_from(polys: Sequence[Poly], cap: int, ctx: VarContext | None = None) -> Span:
    """Row-reduced span of ``polys`` inside the degree-<= ``cap`` space."""
    polys = list(polys)
    if ctx is None:
        if not polys:
            raise SpanError("an empty list needs an explicit context")
        ctx = polys[0].ctx
    for p in polys:
        if p.ctx != ctx:
            raise SpanError("mixed contexts")
        if p and p.degree > cap:
            raise SpanError(f"polynomial {p} has degree above cap {cap}")
    return Span.from_polys(polys, ctx, cap)


def span_sum(a: Span, b: Span) -> Span:
    return a.sum(b)


def span_intersection(a: Span, b: Span) -> Span:
    return a.intersection(b)


def span_quotient_rank(a: Span, b: Span) -> int:
    return a.quotient_rank(b)
