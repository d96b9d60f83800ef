"""Families obtained by adjoining a variable, their hypothesis checks, and tangent ranks.

For ``g = f + X^m (d ⌟ f)`` with ``d^2 ⌟ f = 0`` the apolar ideal of ``g`` is
``ann(f) + α·ann(d ⌟ f) + (α^m - m!·d)``. Replacing the last generator by
``α^m - t·α - m!·d`` gives a family over the t-line whose fibre at t = 0 is
the apolar algebra of g.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .apolarity import (ZeroPolynomialError, annihilator_space, apolar_generators, apolar_rank, contract,
                        dual_context, primal_context)
from .ideals import NotCertified, TruncatedIdeal, settled_quotient_rank, torsion_witness, translate
from .polycore import ADJOINED, DUAL, PARAMETER, ContextError, Poly, VarContext, parse_poly
from .polycore.parser import identifiers, infer_context
from .report import EVIDENCE, FAILED, PROVED, REFUTATION, SAMPLING, CertificateReport

DEFAULT_SAMPLES = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2))


class FamilyError(ValueError):
    pass


def _lift(p: Poly, ctx: VarContext) -> Poly:
    """Move ``p`` into a context extending its own (same leading variables)."""
    return p.rename(ctx, list(range(p.ctx.nvars)))


def _annihilator_gens(p: Poly, dctx: VarContext) -> list[Poly]:
    if not p:
        return [Poly.const(dctx, 1)]
    return list(apolar_generators(p, dctx, verify=False).generators)


@dataclass(frozen=True)
class AdjoinedVariable:
    """Contexts for ``f`` with one extra variable X on the primal side and α on the dual side."""

    primal: VarContext
    dual: VarContext

    @classmethod
    def for_poly(cls, f: Poly, name: str | None = None) -> AdjoinedVariable:
        name = name or f"x{f.ctx.nvars + 1}"
        if name in f.ctx.names:
            raise FamilyError(f"adjoined variable {name} already in use")
        primal = f.ctx.extended(name, ADJOINED)
        return cls(primal, dual_context(primal))

    @property
    def alpha(self) -> str:
        return self.dual.names[-1]


def _check_inputs(f: Poly, d: Poly, m: int) -> None:
    if m < 2:
        raise FamilyError("m must be at least 2")
    if f.is_zero():
        raise ZeroPolynomialError("f must be nonzero")
    if contract(d * d, f):
        raise FamilyError("hypothesis fails: d^2 does not annihilate f")


def adjoined_polynomial(f: Poly, d: Poly, m: int, name: str | None = None) -> Poly:
    """``g = f + X^m (d ⌟ f)``."""
    av = AdjoinedVariable.for_poly(f, name)
    X = Poly.var(av.primal, av.primal.names[-1])
    return _lift(f, av.primal) + X ** m * _lift(contract(d, f), av.primal)


def adjoin_variable_annihilator(f: Poly, d: Poly, m: int, name: str | None = None,
                                verify: bool = True) -> list[Poly]:
    """Generators of the apolar ideal of ``f + X^m (d ⌟ f)`` from the closed formula.

    With ``verify`` the formula's ideal is compared (as an exact local
    truncation) against the brute-force annihilator of g.
    """
    _check_inputs(f, d, m)
    av = AdjoinedVariable.for_poly(f, name)
    D = av.dual
    alpha = Poly.var(D, av.alpha)
    df = contract(d, f)
    gens = [_lift(p, D) for p in _annihilator_gens(f, dual_context(f.ctx))]
    gens += [alpha * _lift(p, D) for p in _annihilator_gens(df, dual_context(f.ctx))]
    gens.append(alpha ** m - factorial(m) * _lift(d, D))
    if verify:
        g = adjoined_polynomial(f, d, m, name)
        if not same_as_annihilator(gens, g, D):
            raise ArithmeticError("annihilator formula disagrees with the brute-force annihilator")
    return gens


def same_as_annihilator(gens: Sequence[Poly], g: Poly, dctx: VarContext) -> bool:
    """Exact comparison of the ideal of ``gens`` with ``g^⊥`` modulo m^(deg g + 2)."""
    cap = int(g.degree) + 1
    brute = annihilator_space(g, cap, dctx)
    formula = TruncatedIdeal(gens, cap, local=True, ctx=dctx).span
    return formula == brute


@dataclass
class FamilySpec:
    """``I_t = (α^o - t·α^c - q) + J`` over the dual variables, α and t."""

    dual_ctx: VarContext
    o: int
    c: int
    q: Poly
    J: list[Poly]
    adjoined: str
    parameter: str = "t"
    source: tuple[Poly, Poly, int] | None = field(default=None, repr=False)

    @property
    def ctx(self) -> VarContext:
        return self.dual_ctx.extended(self.parameter, PARAMETER)

    @property
    def base_ctx(self) -> VarContext:
        """The y variables alone."""
        return self.dual_ctx.without(self.adjoined)

    def adjoined_primal_name(self) -> str:
        return primal_context(self.dual_ctx).names[self.dual_ctx.index(self.adjoined)]

    def generators(self, t=None) -> list[Poly]:
        """Generators of ``I_t``; symbolic in t when ``t`` is None."""
        D = self.dual_ctx
        alpha = Poly.var(D, self.adjoined)
        if t is None:
            ctx = self.ctx
            a = _lift(alpha, ctx)
            tt = Poly.var(ctx, self.parameter)
            head = a ** self.o - tt * a ** self.c - _lift(self.q, ctx)
            return [head] + [_lift(p, ctx) for p in self.J]
        t = Fraction(t)
        head = alpha ** self.o - t * alpha ** self.c - self.q
        return [head] + list(self.J)

    def to_json(self) -> dict:
        doc = {"o": self.o, "c": self.c, "q": str(self.q), "J": [str(p) for p in self.J],
               "adjoined": self.adjoined, "parameter": self.parameter}
        if self.source is not None:
            f, d, m = self.source
            doc["source"] = {"f": str(f), "d": str(d), "m": m}
        return doc

    @classmethod
    def from_json(cls, doc: dict | str) -> FamilySpec:
        if isinstance(doc, str):
            doc = json.loads(doc)
        alpha = doc["adjoined"]
        param = doc.get("parameter", "t")
        texts = [doc["q"]] + list(doc["J"])
        base = infer_context(texts + [alpha], role=DUAL)
        base = base.without(alpha)
        dctx = base.extended(alpha, ADJOINED)
        for t in texts:
            if param in identifiers(t):
                raise FamilyError("q and J must not involve the parameter")
        q = parse_poly(doc["q"], dctx)
        J = [parse_poly(s, dctx) for s in doc["J"]]
        source = None
        if "source" in doc:
            src = doc["source"]
            fctx = infer_context([src["f"]])
            f = parse_poly(src["f"], fctx)
            d = parse_poly(src["d"], dual_context(fctx))
            source = (f, d, int(src["m"]))
        return cls(dctx, int(doc["o"]), int(doc["c"]), q, J, alpha, param, source)


def build_family(f: Poly, d: Poly, m: int, name: str | None = None, parameter: str = "t") -> FamilySpec:
    _check_inputs(f, d, m)
    av = AdjoinedVariable.for_poly(f, name)
    D = av.dual
    alpha = Poly.var(D, av.alpha)
    fd = dual_context(f.ctx)
    J = [_lift(p, D) for p in _annihilator_gens(f, fd)]
    J += [alpha * _lift(p, D) for p in _annihilator_gens(contract(d, f), fd)]
    q = factorial(m) * _lift(d, D)
    return FamilySpec(D, m, 1, q, J, av.alpha, parameter, (f, d, m))


# hypothesis checks


def _alpha_split(p: Poly, ai: int, base: VarContext) -> tuple[int, Poly] | None:
    """``p = α^i · h(y)``; None when p is not homogeneous in α."""
    degs = {e[ai] for e in p.terms}
    if len(degs) != 1:
        return None
    i = degs.pop()
    h = Poly(base, {e[:ai] + e[ai + 1:]: c for e, c in p.items()})
    return i, h


def _ideal_containment(A: Sequence[Poly], B: Sequence[Poly], ctx: VarContext,
                       max_cap: int = 12) -> tuple[str, Poly | None]:
    """Whether the power-series ideal (A) lies in (B), with the grade of the answer.

    Non-membership modulo a power of m is always conclusive; membership is
    proved once some m^c is certified inside (B).
    """
    A = [a for a in A if a]
    if not A:
        return PROVED, None
    B = [b for b in B if b]
    if not B:
        return FAILED, A[0]
    start = max(int(p.degree) for p in list(A) + B) + 1
    for cap in range(start, max(start, max_cap) + 1):
        I = TruncatedIdeal(B, cap, local=True, ctx=ctx)
        for a in A:
            if not I.contains(a):
                return FAILED, a
        if I.known_power is not None and I.known_power <= cap + 1:
            return PROVED, None
    return EVIDENCE, None


def check_hypotheses(s: FamilySpec) -> CertificateReport:
    """Exact checks of the two annihilator containments in T/J.

    J is α-homogeneous, so T/J splits by powers of α with pieces R/J_k, where
    J_k is generated by the y-parts of the generators of α-degree <= k. Then
    ann(α^o) ⊆ ann(α^c) iff J_{k+o} ⊆ J_{k+c} and ann(α^o) ⊆ ann(q) iff
    q·J_{k+o} ⊆ J_k, for every k below the top α-degree K of J.
    """
    rep = CertificateReport("family hypotheses")
    rep.add("0 < c < o", PROVED if 0 < s.c < s.o else FAILED, o=s.o, c=s.c)
    D = s.dual_ctx
    ai = D.index(s.adjoined)
    base = s.base_ctx
    q_ok = s.q.degree_in(s.adjoined) == 0 if s.q else True
    rep.add("q free of alpha", PROVED if q_ok else FAILED, q=str(s.q))
    splits = []
    homog = True
    for p in s.J:
        if not p:
            continue
        sp = _alpha_split(p, ai, base)
        if sp is None:
            homog = False
            rep.add("J alpha-homogeneous", FAILED, generator=str(p))
            break
        splits.append(sp)
    if homog:
        rep.add("J alpha-homogeneous", PROVED)
    inside_y = all(h and h.order >= 1 for _, h in splits) if homog else False
    bad = next((str(p) for p in s.J if p and homog and any(sum(e) - e[ai] == 0 for e in p.terms)), None)
    rep.add("J inside (y)", PROVED if inside_y else FAILED, **({"generator": bad} if bad else {}))
    if not (homog and q_ok and 0 < s.c < s.o):
        return rep
    q = Poly(base, {e[:ai] + e[ai + 1:]: c for e, c in s.q.items()})
    K = max((i for i, _ in splits), default=0)

    def Jk(k: int) -> list[Poly]:
        return [h for i, h in splits if i <= k]

    results = {"ann(alpha^o) in ann(alpha^c)": [], "ann(alpha^o) in ann(q)": []}
    for k in range(K):
        results["ann(alpha^o) in ann(alpha^c)"].append(
            (k, _ideal_containment(Jk(k + s.o), Jk(k + s.c), base)))
        results["ann(alpha^o) in ann(q)"].append(
            (k, _ideal_containment([q * h for h in Jk(k + s.o)], Jk(k), base)))
    for name, rows in results.items():
        statuses = [st for _, (st, _) in rows]
        if FAILED in statuses:
            k, (_, wit) = next(r for r in rows if r[1][0] == FAILED)
            rep.add(name, FAILED, k=k, witness=str(wit))
        elif EVIDENCE in statuses:
            rep.add(name, EVIDENCE, levels=len(rows))
        else:
            rep.add(name, PROVED, levels=len(rows))
    return rep


# fibres


def rational_roots(lam: Fraction, k: int) -> list[Fraction]:
    """Rational solutions of ``w^k = lam``."""
    lam = Fraction(lam)
    if k == 1:
        return [lam]
    if lam == 0:
        return [Fraction(0)]

    def iroot(v: int) -> int | None:
        r = round(v ** (1.0 / k))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** k == v:
                return c
        return None

    num, den = abs(lam.numerator), lam.denominator
    a, b = iroot(num), iroot(den)
    if a is None or b is None:
        return []
    w = Fraction(a, b)
    if lam > 0:
        return [w, -w] if k % 2 == 0 else [w]
    return [-w] if k % 2 == 1 else []


def local_rank_at(gens: Sequence[Poly], ctx: VarContext, point: Sequence | None = None,
                  max_cap: int = 14) -> int:
    """Exact rank of the local ring of T/I at ``point`` (origin by default)."""
    if point is not None and any(point):
        gens = translate(gens, point)
    top = max((int(g.degree) for g in gens if g), default=1)
    for cap in range(1, max(top, max_cap) + 1):
        I = TruncatedIdeal(gens, cap, local=True, ctx=ctx)
        if I.known_power is not None and I.known_power <= cap + 1:
            return I.quotient_rank()
    raise NotCertified(f"no power of m inside the ideal up to cap {max_cap}")


def verify_fiber_decomposition(s: FamilySpec, lam) -> CertificateReport:
    lam = Fraction(lam)
    if lam == 0:
        raise FamilyError("the general fibre needs a nonzero parameter value")
    if s.source is None:
        raise FamilyError("fibre decomposition needs a family built from (f, d, m)")
    f, d, m = s.source
    df = contract(d, f)
    rf = apolar_rank(f)
    rdf = apolar_rank(df) if df else 0
    expected = rf + (m - 1) * rdf
    rep = CertificateReport(f"fibre decomposition at t={lam}")
    D = s.dual_ctx
    gens = s.generators(lam)
    try:
        got, cap = settled_quotient_rank(gens, D)
        rep.add("general fibre rank", EVIDENCE if got == expected else FAILED, SAMPLING,
                rank=got, expected=expected, cap=cap)
    except NotCertified as exc:
        rep.add("general fibre rank", FAILED, SAMPLING, reason=str(exc))
    g = adjoined_polynomial(f, d, m, s.adjoined_primal_name())
    rg = apolar_rank(g)
    try:
        got0, cap0 = settled_quotient_rank(s.generators(0), D)
        rep.add("special fibre rank", EVIDENCE if got0 == rg else FAILED, SAMPLING,
                rank=got0, expected=rg, cap=cap0)
    except NotCertified as exc:
        rep.add("special fibre rank", FAILED, SAMPLING, reason=str(exc))
    local0 = local_rank_at(gens, D)
    rep.add("local rank at origin", PROVED if local0 == rf else FAILED, rank=local0, expected=rf)
    roots = rational_roots(lam, m - 1)
    if not roots:
        rep.add("supports", EVIDENCE, SAMPLING, skipped=f"no rational root of w^{m - 1} = {lam}")
    ai = D.index(s.adjoined)
    for w in roots:
        point = [Fraction(0)] * D.nvars
        point[ai] = w
        vanish = all(g_.evaluate(point) == 0 for g_ in gens)
        r = local_rank_at(gens, D, point) if vanish else 0
        ok = vanish and r == rdf
        rep.add(f"local rank at alpha={w}", PROVED if ok else FAILED, rank=r, expected=rdf)
    return rep


# tangent space


def tangent_rank(f: Poly) -> int:
    """``rank T/I^2 - rank T/I`` for the apolar ideal I of f, both exact local computations.

    ``m^(2j+2)`` lies in ``I^2``; the search for a smaller power starts at j+2.
    """
    pres = apolar_generators(f, verify=False)
    j = pres.socle_degree
    D = pres.dual_ctx
    gens = pres.generators
    I = TruncatedIdeal(gens, max(j, 1), local=True, ctx=D, known_power=j + 1)
    rank_I = I.quotient_rank()
    prods = [a * b for i, a in enumerate(gens) for b in gens[i:]]
    bound = 2 * j + 2
    for cap in range(j + 2, bound):
        I2 = TruncatedIdeal([p.truncate(cap) for p in prods], cap, local=True, ctx=D)
        if I2.known_power is not None and I2.known_power <= cap:
            return I2.quotient_rank() - rank_I
    I2 = TruncatedIdeal([p.truncate(bound - 1) for p in prods], bound - 1, local=True, ctx=D,
                        known_power=bound)
    return I2.quotient_rank() - rank_I


# composite certificate


@dataclass
class ParamFamily:
    """A family given by generators over a context with one parameter variable."""

    gens: list[Poly]
    parameter: str

    @property
    def ctx(self) -> VarContext:
        return self.gens[0].ctx

    def fibre(self, t) -> tuple[list[Poly], VarContext]:
        ctx = self.ctx.without(self.parameter)
        return [g.subs(self.parameter, Fraction(t)).drop_variable(self.parameter) for g in self.gens], ctx


def flatness_certificate(s: FamilySpec | ParamFamily, samples: Sequence = DEFAULT_SAMPLES,
                         torsion_cap: int | None = None) -> CertificateReport:
    rep = CertificateReport("flatness")
    if isinstance(s, FamilySpec):
        rep.extend(check_hypotheses(s), prefix="hypothesis: ")
        fam = ParamFamily(s.generators(), s.parameter)
    else:
        fam = s
    ctx = fam.ctx
    if ctx.parameter != fam.parameter:
        raise ContextError(f"{fam.parameter} is not the parameter of ({ctx})")
    if all(g.degree_in(fam.parameter) == 0 for g in fam.gens):
        rep.add("constant family", PROVED)
        return rep
    ranks = {}
    failed = None
    for t in samples:
        gens, fctx = fam.fibre(t)
        try:
            ranks[str(Fraction(t))] = settled_quotient_rank(gens, fctx)[0]
        except NotCertified as exc:
            failed = (str(Fraction(t)), str(exc))
            break
    if failed:
        rep.add("fibre ranks", FAILED, SAMPLING, ranks=ranks, uncertified=failed[0])
    else:
        constant = len(set(ranks.values())) <= 1
        rep.add("fibre ranks", EVIDENCE if constant else FAILED, SAMPLING, ranks=ranks)
    top = max(int(g.degree) for g in fam.gens if g)
    D = torsion_cap if torsion_cap is not None else top + 3
    I = TruncatedIdeal(fam.gens, D, ctx=ctx)
    w = torsion_witness(I, fam.parameter, D)
    if w is None:
        rep.add("torsion", EVIDENCE, REFUTATION, cap=D, witness=None)
    else:
        rep.add("torsion", FAILED, REFUTATION, cap=D, witness=str(w.witness), certified=w.certified)
    return rep


__all__ = ["AdjoinedVariable", "DEFAULT_SAMPLES", "FamilyError", "FamilySpec", "ParamFamily",
           "adjoin_variable_annihilator", "adjoined_polynomial", "build_family", "check_hypotheses",
           "flatness_certificate", "local_rank_at", "rational_roots", "same_as_annihilator",
           "tangent_rank", "verify_fiber_decomposition"]
