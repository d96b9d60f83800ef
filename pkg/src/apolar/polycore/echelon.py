"""Fraction-free incremental row echelon form over the integers.

Rows are sparse ``dict[col, int]``. A row's leading column is its smallest
column index; callers choose the column numbering so that this is the
pivot they want (e.g. graded-lex descending).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

Row = dict[int, int]


def primitive(row: Row) -> Row:
    """Divide by the content and make the leading entry positive (in place)."""
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        for k in row:
            row[k] //= g
    return row


def integer_row(coeffs: Mapping[int, Fraction]) -> Row:
    """Clear denominators of a rational row and make it primitive."""
    den = 1
    for v in coeffs.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            den = lcm(den, v.denominator)
    row = {k: int(v * den) for k, v in coeffs.items() if v}
    return primitive(row)


def _eliminate(row: Row, piv: Row, col: int) -> None:
    """row <- p*row - a*piv, cancelling ``col``; then make primitive."""
    p = piv[col]
    a = row[col]
    g = gcd(p, a)
    p //= g
    a //= g
    if p != 1:
        for k in row:
            row[k] *= p
    for k, v in piv.items():
        s = row.get(k, 0) - a * v
        if s:
            row[k] = s
        else:
            row.pop(k, None)
    primitive(row)


class Echelon:
    """Row echelon form built one row at a time.

    Pivot rows are never mutated after insertion, so shallow copies share
    them safely.
    """

    __slots__ = ("pivots",)

    def __init__(self, pivots: dict[int, Row] | None = None):
        self.pivots: dict[int, Row] = pivots if pivots is not None else {}

    def copy(self) -> Echelon:
        return Echelon(dict(self.pivots))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce_leading(self, row: Row) -> Row:
        """Reduce until the leading column is not a pivot (zero row if in the span)."""
        row = dict(row)
        pivots = self.pivots
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                return row
            _eliminate(row, piv, c)
        return row

    def add(self, row: Row) -> bool:
        """Insert ``row``; return True if it increased the rank."""
        r = self.reduce_leading(row)
        if not r:
            return False
        primitive(r)
        self.pivots[min(r)] = r
        return True

    def extend(self, rows: Iterable[Row]) -> int:
        added = 0
        for r in rows:
            if self.add(r):
                added += 1
        return added

    def contains(self, row: Row) -> bool:
        return not self.reduce_leading(row)

    def reduced_rows(self) -> list[dict[int, Fraction]]:
        """Reduced row echelon form: pivot 1, zeros above and below every pivot."""
        cols = sorted(self.pivots)
        done: dict[int, Row] = {}
        for c in reversed(cols):
            row = dict(self.pivots[c])
            for k in sorted(k for k in row if k != c and k in done):
                if k in row:
                    _eliminate_at(row, done[k], k)
            done[c] = row
        out = []
        for c in cols:
            row = done[c]
            p = row[c]
            out.append({k: Fraction(v, p) for k, v in sorted(row.items())})
        return out


def _eliminate_at(row: Row, piv: Row, col: int) -> None:
    """Cancel entry ``col`` of ``row`` against ``piv`` (not necessarily leading)."""
    _eliminate(row, piv, col)


def full_reduce(row: Mapping[int, Fraction], rref: list[dict[int, Fraction]],
                pivot_of: dict[int, int]) -> dict[int, Fraction]:
    """Normal form of ``row`` against RREF rows: cancel every pivot column."""
    out = {k: v for k, v in row.items() if v}
    for c in sorted(k for k in out if k in pivot_of):
        v = out.get(c)
        if not v:
            continue
        for k, w in rref[pivot_of[c]].items():
            s = out.get(k, 0) - v * w
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def rank_of(rows: Iterable[Row]) -> int:
    e = Echelon()
    e.extend(rows)
    return e.rank
