"""Exact polynomial arithmetic, parsing and linear algebra over the rationals."""

from .echelon import Echelon, rank_of
from .parser import ParseError, UnknownVariable, infer_context, parse_poly
from .poly import (ADJOINED, DUAL, PARAMETER, PRIMAL, ContextError, Poly, VarContext,
                   count_monomials, monomial_basis, monomials_of_degree)
from .span import Span, SpanError, span_from, span_intersection, span_quotient_rank, span_sum

__all__ = [
    "ADJOINED", "DUAL", "PARAMETER", "PRIMAL",
    "ContextError", "Echelon", "ParseError", "Poly", "Span", "SpanError", "UnknownVariable",
    "VarContext", "count_monomials", "infer_context", "monomial_basis", "monomials_of_degree",
    "parse_poly", "rank_of", "span_from", "span_intersection", "span_quotient_rank", "span_sum",
]
