"""Symmetric decomposition of the local Hilbert function into rows Δ_s.

``Δ_s(t)`` is the rank of ``Q_{t, j+1-s-t}``, a subquotient of the derivative
space. Row s has entries t = 0..j-s and is symmetric about (j-s)/2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

from .apolarity import Derivatives, HilbertFunction
from .polycore import Poly
from .report import FAILED, PROVED, CertificateReport


def q_rank(f: Poly, m: int, n: int, derivs: Derivatives | None = None) -> int:
    """rank of ``(Tf)_n^m`` modulo ``(Tf)_{n-1}^m + (Tf)_n^{m+1}``."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    D = derivs or Derivatives(f)
    top = D.piece(n, m)
    if top.rank == 0:
        return 0
    low = D.piece(n - 1, m) + D.piece(n, m + 1)
    return top.quotient_rank(low)


@dataclass(frozen=True)
class DeltaTable:
    j: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.j < 0:
            raise ValueError("socle degree must be nonnegative")
        if len(self.rows) != self.j + 1:
            raise ValueError(f"expected {self.j + 1} rows, got {len(self.rows)}")
        for s, r in enumerate(self.rows):
            if len(r) != self.j - s + 1:
                raise ValueError(f"row {s} must have {self.j - s + 1} entries, got {len(r)}")

    @classmethod
    def from_rows(cls, j: int, rows: Sequence[Sequence[int]]) -> DeltaTable:
        """Build from the leading rows; missing rows are filled with zeros."""
        full = [tuple(int(v) for v in r) for r in rows]
        for s in range(len(full), j + 1):
            full.append((0,) * (j - s + 1))
        return cls(j, tuple(full))

    def delta(self, s: int, t: int) -> int:
        if 0 <= s <= self.j and 0 <= t <= self.j - s:
            return self.rows[s][t]
        return 0

    def partial_sum(self, a: int) -> tuple[int, ...]:
        return tuple(sum(self.delta(s, t) for s in range(a + 1)) for t in range(self.j + 1))

    def column_sums(self) -> tuple[int, ...]:
        return self.partial_sum(self.j)

    def nonzero_rows(self) -> dict[int, tuple[int, ...]]:
        return {s: r for s, r in enumerate(self.rows) if any(r)}

    def to_json(self) -> dict:
        return {"j": self.j, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, doc: dict | str) -> DeltaTable:
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls.from_rows(int(doc["j"]), doc["rows"])

    def __str__(self) -> str:
        return "\n".join(f"D{s}: " + ",".join(map(str, r)) for s, r in enumerate(self.rows))


def delta_table(f: Poly) -> DeltaTable:
    D = Derivatives(f)
    j = D.j
    rows = [tuple(q_rank(f, t, j + 1 - s - t, D) for t in range(j - s + 1)) for s in range(j + 1)]
    return DeltaTable(j, tuple(rows))


def macaulay_representation(a: int, d: int) -> list[tuple[int, int]]:
    """Write ``a = C(k_d, d) + C(k_{d-1}, d-1) + ...`` with k_d > k_{d-1} > ... >= i >= 1."""
    out = []
    while a > 0 and d > 0:
        k = d
        while comb(k + 1, d) <= a:
            k += 1
        out.append((k, d))
        a -= comb(k, d)
        d -= 1
    return out


def macaulay_bound(a: int, d: int) -> int:
    """``a^<d>``: the largest possible value in degree d+1 after value a in degree d."""
    return sum(comb(k + 1, i + 1) for k, i in macaulay_representation(a, d))


def is_o_sequence(h: Sequence[int]) -> bool:
    h = list(h)
    if not h or h[0] != 1 or any(v < 0 for v in h):
        return False
    return all(h[d + 1] <= macaulay_bound(h[d], d) for d in range(1, len(h) - 1))


def verify_table(t: DeltaTable, h: Sequence[int]) -> CertificateReport:
    """Structural checks on a table against a Hilbert function, stopping at the first failure."""
    rep = CertificateReport("delta table")
    j = t.j
    hh = tuple(h) + (0,) * max(0, j + 1 - len(h))

    def fail(name: str, **data) -> CertificateReport:
        rep.add(name, FAILED, **data)
        return rep

    bad = [(s, i) for s in range(j + 1) for i in range(j - s + 1) if t.delta(s, i) < 0]
    if bad:
        return fail("nonnegativity", entry=list(bad[0]))
    rep.add("nonnegativity", PROVED)

    if t.delta(0, 0) != 1:
        return fail("forced zeros", reason="D0(0) must be 1")
    for s in range(1, j + 1):
        if t.delta(s, 0) != 0:
            return fail("forced zeros", reason=f"D{s}(0) must be 0")
    for s in (j - 1, j):
        if s >= 1 and any(t.rows[s]):
            return fail("forced zeros", reason=f"row {s} must vanish")
    rep.add("forced zeros", PROVED)

    for s in range(j + 1):
        r = t.rows[s]
        if r != r[::-1]:
            return fail("row symmetry", row=s, values=list(r))
    rep.add("row symmetry", PROVED)

    if len(h) > j + 1 and any(h[j + 1:]):
        return fail("column sums", expected=list(h), got=list(t.column_sums()))
    if t.column_sums() != hh:
        return fail("column sums", expected=list(h), got=list(t.column_sums()))
    rep.add("column sums", PROVED)

    for a in range(j + 1):
        ps = t.partial_sum(a)
        if not is_o_sequence(ps):
            return fail("partial sums are O-sequences", a=a, partial_sum=list(ps))
    rep.add("partial sums are O-sequences", PROVED)
    return rep


def admissible_tables(j: int, h: Sequence[int]) -> list[DeltaTable]:
    """All tables with column sums h passing :func:`verify_table`.

    Rows are filled by backtracking, s = 0, 1, ...; the free entries of a row
    are its first half (symmetry fixes the rest) and are tried in decreasing
    lexicographic order.
    """
    h = tuple(h)
    if len(h) != j + 1 or h[0] != 1:
        raise ValueError("need len(h) == j+1 and h(0) == 1")
    out: list[DeltaTable] = []
    rows: list[tuple[int, ...]] = []
    # free rows are 0..j-2; rows j-1 and j vanish
    last = j - 2

    def halves(s: int, room: list[int]) -> Iterator[tuple[int, ...]]:
        L = j - s
        free = list(range(1, L // 2 + 1))

        def rec(k: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
            if k == len(free):
                row = [0] * (L + 1)
                row[0] = row[L] = 1 if s == 0 else 0
                for t, v in zip(free, acc):
                    row[t] = row[L - t] = v
                if all(row[t] <= room[t] for t in range(L + 1)):
                    yield tuple(row)
                return
            t = free[k]
            cap = min(room[t], room[L - t])
            for v in range(cap, -1, -1):
                yield from rec(k + 1, acc + [v])

        yield from rec(0, [])

    def go(s: int, sums: list[int]) -> None:
        if s > last:
            if tuple(sums) == h:
                out.append(DeltaTable.from_rows(j, rows))
            return
        room = [h[t] - sums[t] for t in range(j + 1)]
        for row in halves(s, room):
            new = [sums[t] + (row[t] if t < len(row) else 0) for t in range(j + 1)]
            if not is_o_sequence(new):
                continue
            rows.append(row)
            go(s + 1, new)
            rows.pop()

    if j < 2:
        t = DeltaTable.from_rows(j, [h])
        return [t] if verify_table(t, h).passed else []
    go(0, [0] * (j + 1))
    return [t for t in out if verify_table(t, h).passed]


def hilbert_from_table(t: DeltaTable) -> HilbertFunction:
    sums = list(t.column_sums())
    while len(sums) > 1 and sums[-1] == 0:
        sums.pop()
    return tuple(sums)


__all__ = ["DeltaTable", "admissible_tables", "delta_table", "hilbert_from_table",
           "is_o_sequence", "macaulay_bound", "macaulay_representation", "q_rank", "verify_table"]
