"""Degree-truncated ideals: membership, products, quotient ranks, initial forms, torsion.

Two truncation modes are supported.

* global: ``V(D) = span{ mu*g : deg(mu*g) <= D }`` for polynomial ideals. Degree d
  of ``V(D)`` is called stable when it agrees with ``V(D+1)``.
* local: ``V(D) = span{ trunc_D(mu*g) }`` for ideals of power series. This is
  ``(I + m^{D+1}) / m^{D+1}`` exactly, and ``m^c`` lying in ``I`` is certified
  by Nakayama as soon as every degree c monomial is in ``trunc_c(I)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .polycore import ContextError, Echelon, Poly, Span, VarContext
from .polycore.echelon import full_reduce, integer_row
from .polycore.poly import basis_index, count_monomials, monomial_basis, monomials_of_degree


class IdealError(ValueError):
    pass


class NotCertified(ArithmeticError):
    """The truncation is too small to certify the requested answer."""


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative integer weights, one per variable, not all zero."""

    weights: tuple[int, ...]

    def __post_init__(self):
        ws = self.weights
        if not ws or any((not isinstance(w, int)) or w < 0 for w in ws) or not any(ws):
            raise IdealError(f"weights must be nonnegative integers, not all zero: {ws}")

    def of(self, e: Sequence[int]) -> int:
        return sum(w * a for w, a in zip(self.weights, e))


def _monomials_upto(n: int, d: int):
    for k in range(d + 1):
        yield from monomials_of_degree(n, k)


class TruncatedIdeal:
    """An ideal given by generators, seen through a degree truncation ``cap``.

    The underlying echelon uses graded-lex descending columns in global mode
    and the reversed (degree ascending) numbering in local mode, so that the
    pivot of a row is its highest, respectively lowest, degree term.
    """

    def __init__(self, gens: Sequence[Poly], cap: int, *, local: bool = False,
                 ctx: VarContext | None = None, check_stability: bool = True,
                 known_power: int | None = None):
        gens = [g for g in gens if g]
        if ctx is None:
            if not gens:
                raise IdealError("a zero ideal needs an explicit context")
            ctx = gens[0].ctx
        for g in gens:
            if g.ctx != ctx:
                raise ContextError(f"generator {g} is not over ({ctx})")
        if cap < 0:
            raise IdealError("cap must be nonnegative")
        self.ctx = ctx
        self.gens = tuple(gens)
        self.cap = cap
        self.local = local
        self.stable: list[bool] | None = None
        self._span: Span | None = None
        n = ctx.nvars
        self._N = count_monomials(n, cap)
        if local:
            self._build_local(known_power)
        else:
            for g in gens:
                if g.degree > cap:
                    raise IdealError(f"cap {cap} is below the degree {g.degree} of generator {g}")
            self._build_global(check_stability)
            self.known_power = known_power

    # construction

    def _build_global(self, check_stability: bool) -> None:
        n, D = self.ctx.nvars, self.cap
        big = basis_index(n, D + 1)
        shift = len(monomials_of_degree(n, D + 1))
        ech = Echelon()

        def row(p: Poly):
            return integer_row({big[e]: c for e, c in p.items()})

        for g in self.gens:
            for mu in _monomials_upto(n, D - int(g.degree)):
                ech.add(row(g.mul_monomial(mu)))
        self._ech = Echelon({c - shift: {k - shift: v for k, v in r.items()}
                             for c, r in ech.pivots.items()})
        self.pivot_counts = self._count(self._ech)
        if check_stability:
            for g in self.gens:
                for mu in monomials_of_degree(n, D + 1 - int(g.degree)):
                    ech.add(row(g.mul_monomial(mu)))
            after = [0] * (D + 2)
            basis = monomial_basis(n, D + 1)
            for c in ech.pivots:
                after[sum(basis[c])] += 1
            self.stable = []
            before_cum = after_cum = 0
            for d in range(D + 1):
                before_cum += self.pivot_counts[d]
                after_cum += after[d]
                self.stable.append(before_cum == after_cum)

    def _build_local(self, known_power: int | None) -> None:
        n, D = self.ctx.nvars, self.cap
        ech = Echelon()
        for g in self.gens:
            g = g.truncate(D)
            if not g:
                continue
            for mu in _monomials_upto(n, D - int(g.order)):
                ech.add(self._row(g.mul_monomial(mu).truncate(D)))
        self._ech = ech
        self.pivot_counts = self._count(ech)
        self.stable = [True] * (D + 1)
        found = None
        for d in range(D + 1):
            if self.pivot_counts[d] == len(monomials_of_degree(n, d)):
                found = d
                break
        if known_power is not None and found is not None:
            found = min(found, known_power)
        self.known_power = found if found is not None else known_power

    def _row(self, p: Poly):
        idx = basis_index(self.ctx.nvars, self.cap)
        if self.local:
            last = self._N - 1
            return integer_row({last - idx[e]: c for e, c in p.items()})
        return integer_row({idx[e]: c for e, c in p.items()})

    def _count(self, ech: Echelon) -> list[int]:
        basis = monomial_basis(self.ctx.nvars, self.cap)
        counts = [0] * (self.cap + 1)
        last = self._N - 1
        for c in ech.pivots:
            counts[sum(basis[last - c if self.local else c])] += 1
        return counts

    @classmethod
    def from_span(cls, span: Span, gens: Sequence[Poly] | None = None,
                  stable: list[bool] | None = None) -> TruncatedIdeal:
        """Wrap an already computed global-mode span."""
        self = cls.__new__(cls)
        self.ctx = span.ctx
        self.gens = tuple(gens) if gens is not None else tuple(span.polys())
        self.cap = span.cap
        self.local = False
        self.known_power = None
        self._N = span.ambient_dim
        self._ech = span.echelon
        self._span = span
        self.pivot_counts = self._count(self._ech)
        self.stable = stable
        return self

    def rebuilt(self, cap: int, check_stability: bool = True) -> TruncatedIdeal:
        return TruncatedIdeal(self.gens, cap, local=self.local, ctx=self.ctx,
                              check_stability=check_stability, known_power=self.known_power)

    # inspection

    @property
    def rank(self) -> int:
        return self._ech.rank

    @property
    def span(self) -> Span:
        """The truncation as a :class:`Span` in the standard column order."""
        if self._span is None:
            if self.local:
                last = self._N - 1
                rows = ({last - k: v for k, v in r.items()} for r in self._ech.pivots.values())
                self._span = Span.from_rows(rows, self.ctx, self.cap)
            else:
                self._span = Span(self.ctx, self.cap, self._ech)
        return self._span

    def span_upto(self, d: int) -> Span:
        """Members of degree <= d (global mode)."""
        if self.local:
            raise IdealError("degree-bounded members are only defined in global mode")
        return self.span.below_degree(d + 1)

    def is_stable(self, d: int) -> bool:
        if self.local:
            return True
        if self.stable is None or d > self.cap:
            return False
        return all(self.stable[: d + 1])

    def __repr__(self) -> str:
        mode = "local" if self.local else "global"
        return f"TruncatedIdeal({len(self.gens)} gens, cap={self.cap}, {mode}, rank={self.rank})"

    # membership

    def membership(self, p: Poly) -> tuple[bool, bool]:
        """(member?, certified?) for ``p`` at this truncation.

        Global: a positive answer is always certified; a negative one when the
        degree of ``p`` is stable. Local: a negative answer is always
        certified; a positive one once ``m^(cap+1)`` is known to lie in the ideal.
        """
        if p.ctx != self.ctx:
            raise ContextError(f"({p.ctx}) does not match ({self.ctx})")
        if not p:
            return True, True
        if self.local:
            inside = self._ech.contains(self._row(p.truncate(self.cap)))
            if not inside:
                return False, True
            kp = self.known_power
            return True, kp is not None and kp <= self.cap + 1
        if p.degree > self.cap:
            raise IdealError(f"degree {p.degree} exceeds cap {self.cap}")
        inside = self._ech.contains(self._row(p))
        return inside, inside or self.is_stable(int(p.degree))

    def contains(self, p: Poly) -> bool:
        return self.membership(p)[0]

    __contains__ = contains

    def normal_form(self, p: Poly) -> Poly:
        """Canonical representative of ``p`` modulo the truncation (global mode)."""
        return self.span.reduce(p)

    # quotient

    def quotient_rank(self) -> int:
        """``dim T/I``, raising :class:`NotCertified` if the cap does not settle it."""
        n = self.ctx.nvars
        if self.local:
            c = self.known_power
            if c is None or c > self.cap + 1:
                raise NotCertified(f"no power of the maximal ideal certified inside the ideal at cap {self.cap}")
            return count_monomials(n, c - 1) - sum(self.pivot_counts[:c])
        cum = []
        total = 0
        for d in range(self.cap + 1):
            total += self.pivot_counts[d]
            cum.append(count_monomials(n, d) - total)
        for d in range(self.cap):
            if cum[d] == cum[d + 1] and self.is_stable(d + 1):
                return cum[d]
        raise NotCertified(f"affine Hilbert function not settled at cap {self.cap}: {cum}")


def truncate_ideal(gens: Sequence[Poly], cap: int, *, local: bool = False,
                   ctx: VarContext | None = None, check_stability: bool = True,
                   known_power: int | None = None) -> TruncatedIdeal:
    return TruncatedIdeal(gens, cap, local=local, ctx=ctx, check_stability=check_stability,
                          known_power=known_power)


def contains(I: TruncatedIdeal, p: Poly) -> bool:
    return I.contains(p)


def membership(I: TruncatedIdeal, p: Poly) -> tuple[bool, bool]:
    return I.membership(p)


def ideal_product(I: TruncatedIdeal, J: TruncatedIdeal, cap: int | None = None) -> TruncatedIdeal:
    """Truncation of ``I*J`` generated by the pairwise products of generators."""
    if I.ctx != J.ctx:
        raise ContextError("ideals live over different contexts")
    if I.local != J.local:
        raise IdealError("cannot multiply a local and a global truncation")
    cap = cap if cap is not None else max(I.cap, J.cap)
    if I.local:
        prods = [a.mul_truncated(b, cap) for a in I.gens for b in J.gens]
    else:
        prods = [a * b for a in I.gens for b in J.gens]
    kp = None
    if I.known_power is not None and J.known_power is not None:
        kp = I.known_power + J.known_power
    return TruncatedIdeal(prods, cap, local=I.local, ctx=I.ctx, known_power=kp)


def quotient_rank(I: TruncatedIdeal) -> int:
    return I.quotient_rank()


def settled_quotient_rank(gens: Sequence[Poly], ctx: VarContext, *, local: bool = False,
                          start_cap: int | None = None, max_cap: int = 14) -> tuple[int, int]:
    """Quotient rank with the cap raised until it is certified; returns (rank, cap)."""
    top = max((int(g.degree) for g in gens if g), default=0)
    cap = start_cap if start_cap is not None else max(top, 1)
    last: Exception | None = None
    while cap <= max_cap:
        try:
            return TruncatedIdeal(gens, cap, local=local, ctx=ctx).quotient_rank(), cap
        except NotCertified as exc:
            last = exc
            cap += 1
    raise NotCertified(f"quotient rank not settled up to cap {max_cap}: {last}")


def initial_span(I: TruncatedIdeal, weights: WeightVector | Sequence[int], D: int,
                 max_extra: int = 4) -> TruncatedIdeal:
    """Degree-<= D part of the span of weighted leading forms of members of I.

    The cap of ``I`` is raised (at most ``max_extra`` times) until degrees <= D
    are stable. For non-uniform weights a leading form can have smaller total
    degree than its member, so members up to degree ``D + max_extra`` are used.
    ``result.stable`` records whether stability was reached.
    """
    if I.local:
        raise IdealError("initial forms need a global truncation")
    w = weights if isinstance(weights, WeightVector) else WeightVector(tuple(weights))
    n = I.ctx.nvars
    if len(w.weights) != n:
        raise IdealError(f"{len(w.weights)} weights for {n} variables")
    uniform = len(set(w.weights)) == 1
    J = I if I.cap >= D else I.rebuilt(D)
    tries = 0
    while not J.is_stable(D) and tries < max_extra:
        J = J.rebuilt(J.cap + 1)
        tries += 1
    top = D if uniform else D + max_extra
    if J.cap < top:
        J = J.rebuilt(top)
    members = J.span_upto(top).recapped(top).polys()
    basis = monomial_basis(n, top)
    order = sorted(range(len(basis)), key=lambda i: (-w.of(basis[i]), i))
    col = {basis[i]: k for k, i in enumerate(order)}
    ech = Echelon()
    for p in members:
        ech.add(integer_row({col[e]: c for e, c in p.items()}))
    forms = []
    for r in ech.reduced_rows():
        p = Poly(I.ctx, {basis[order[k]]: v for k, v in r.items()})
        forms.append(p.leading_form(w.weights))
    span = Span.from_polys(forms, I.ctx, top).below_degree(D + 1).recapped(D)
    stable = [J.is_stable(d) for d in range(D + 1)]
    return TruncatedIdeal.from_span(span, span.polys(), stable)


@dataclass
class TorsionWitness:
    witness: Poly
    certified: bool


def torsion_witness(I: TruncatedIdeal, param: str, D: int | None = None) -> TorsionWitness | None:
    """An element ``p`` outside ``I`` with ``t*p`` inside, found at cap D.

    Among all such elements of degree < D, the normal forms modulo ``V(D)`` are
    row reduced and the one with the smallest leading monomial is returned, monic.
    A witness proves that the parameter is a zero divisor on ``T/I``.
    """
    if I.local:
        raise IdealError("torsion search needs a global truncation")
    D = I.cap if D is None else D
    J = I if I.cap == D else I.rebuilt(D)
    n = I.ctx.nvars
    t = Poly.var(I.ctx, param)
    V = J.span
    rref = V.rows
    pivot_of = {min(r): i for i, r in enumerate(rref)}
    idx = basis_index(n, D)
    N = len(idx)
    small = monomial_basis(n, D - 1)
    ech = Echelon()
    for k, mu in enumerate(small):
        tmu = t.mul_monomial(mu)
        nf = full_reduce({idx[e]: c for e, c in tmu.items()}, rref, pivot_of)
        nf[N + k] = Fraction(1)
        ech.add(integer_row(nf))
    residues = []
    for c, r in ech.pivots.items():
        if c < N:
            continue
        p = Poly(I.ctx, {small[k - N]: v for k, v in r.items()})
        nf = V.reduce(p)
        if nf:
            residues.append(nf)
    if not residues:
        return None
    rows = Span.from_polys(residues, I.ctx, D).polys()
    witness = rows[-1].monic()
    # positive membership of t*w is exact, and w outside V(D) is certified when stable
    return TorsionWitness(witness, J.is_stable(int(witness.degree)))


def specialize(I: TruncatedIdeal, param: str, value) -> TruncatedIdeal:
    """Substitute ``param = value`` and drop the parameter from the context."""
    ctx = I.ctx.without(param)
    gens = [g.subs(param, value).drop_variable(param) for g in I.gens]
    return TruncatedIdeal(gens, I.cap, local=I.local, ctx=ctx, known_power=None)


def translate(gens: Iterable[Poly], shift: Sequence) -> list[Poly]:
    """Move the point ``shift`` to the origin: substitute ``v + shift_v`` for every variable."""
    gens = list(gens)
    if not gens:
        return gens
    ctx = gens[0].ctx
    images = [Poly.var(ctx, v) + Fraction(s) for v, s in zip(ctx.names, shift)]
    return [g.compose(images) for g in gens]


def generating_subset(polys: Sequence[Poly], ctx: VarContext, cap: int) -> list[Poly]:
    """Greedy generators (lowest degree first) of the ideal spanned, within ``cap``, by ``polys``."""
    chosen: list[Poly] = []
    for p in sorted((p for p in polys if p), key=lambda p: int(p.degree)):
        if chosen and TruncatedIdeal(chosen, cap, ctx=ctx, check_stability=False).contains(p):
            continue
        chosen.append(p)
    return chosen
