"""Standard forms of dual socle generators.

A standard form of ``f`` is a ``g`` with the same apolar algebra (up to a
power-series automorphism of the dual ring) such that each homogeneous part
``g_i`` only involves the first ``e(j-i)`` variables, where ``e`` is read off
the Δ-table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .apolarity import apolar_generators, apolar_rank, contract, dual_context
from .decomposition import DeltaTable, delta_table
from .polycore import Echelon, Poly, VarContext
from .polycore.echelon import integer_row
from .polycore.poly import basis_index, count_monomials, monomial_basis, monomials_of_degree
from .report import FAILED, PROVED, CertificateReport


class StandardFormError(ValueError):
    pass


Matrix = list[list[Fraction]]


def invert_matrix(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == k)) for k in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            raise StandardFormError("linear part is not invertible")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [v / piv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _linear(ctx: VarContext, coeffs: Sequence) -> Poly:
    terms = {}
    for k, c in enumerate(coeffs):
        e = [0] * ctx.nvars
        e[k] = 1
        terms[tuple(e)] = c
    return Poly(ctx, terms)


class Automorphism:
    """Ring automorphism of ``T/m^(cap+1)`` given by the images ``phi(y_i)``.

    ``phi(p) = p(images)``; the inverse images are found by fixed-point
    iteration on ``v = L^-1 (y - H(v))``, where L is the linear part and H the
    higher-order part of the images.
    """

    def __init__(self, ctx: VarContext, cap: int, images: Sequence[Poly],
                 inverse: Sequence[Poly] | None = None):
        if len(images) != ctx.nvars:
            raise StandardFormError("one image per variable is required")
        for p in images:
            if p.ctx != ctx:
                raise StandardFormError(f"image {p} is not over ({ctx})")
            if p.constant_term():
                raise StandardFormError(f"image {p} has a constant term")
        self.ctx = ctx
        self.cap = cap
        self.images = tuple(p.truncate(cap) for p in images)
        self.linear_part = [[p.coeff(e) for e in monomials_of_degree(ctx.nvars, 1)] for p in self.images]
        Linv = invert_matrix(self.linear_part)
        self.inverse = tuple(inverse) if inverse is not None else self._invert(Linv)

    def _invert(self, Linv: Matrix) -> tuple[Poly, ...]:
        ctx, cap = self.ctx, self.cap
        y = [Poly.var(ctx, v) for v in ctx.names]
        higher = [p - p.homogeneous_part(1) for p in self.images]
        v = [_linear(ctx, row) for row in Linv]
        if all(not h for h in higher):
            return tuple(v)
        for _ in range(cap):
            w = [yi - h.compose(v, cap) for yi, h in zip(y, higher)]
            v = [sum((wk * c for wk, c in zip(w, row) if c), Poly.zero(ctx)) for row in Linv]
        return tuple(v)

    @classmethod
    def identity(cls, ctx: VarContext, cap: int) -> Automorphism:
        y = [Poly.var(ctx, v) for v in ctx.names]
        return cls(ctx, cap, y, y)

    @classmethod
    def from_inverse(cls, ctx: VarContext, cap: int, inverse_images: Sequence[Poly]) -> Automorphism:
        """The automorphism sending each ``inverse_images[i]`` to ``y_i``."""
        inv = Automorphism(ctx, cap, inverse_images)
        return cls(ctx, cap, inv.inverse, inv.images)

    @classmethod
    def linear(cls, ctx: VarContext, cap: int, matrix: Sequence[Sequence]) -> Automorphism:
        """``phi(y_i) = sum_k matrix[i][k] * y_k``."""
        return cls(ctx, cap, [_linear(ctx, row) for row in matrix])

    def apply(self, p: Poly, cap: int | None = None) -> Poly:
        return p.compose(list(self.images), self.cap if cap is None else cap)

    def apply_inverse(self, p: Poly, cap: int | None = None) -> Poly:
        return p.compose(list(self.inverse), self.cap if cap is None else cap)

    def compose(self, other: Automorphism) -> Automorphism:
        """``self ∘ other``."""
        cap = min(self.cap, other.cap)
        imgs = [self.apply(p, cap) for p in other.images]
        inv = [other.apply_inverse(p, cap) for p in self.inverse]
        return Automorphism(self.ctx, cap, imgs, inv)

    def is_identity(self) -> bool:
        return all(p == Poly.var(self.ctx, v) for p, v in zip(self.images, self.ctx.names))

    def verify(self) -> bool:
        """Substitution then inverse is the identity on every monomial of degree <= cap."""
        for e in monomial_basis(self.ctx.nvars, self.cap):
            m = Poly.monomial(self.ctx, e)
            if self.apply(self.apply_inverse(m)) != m:
                return False
        return True

    def to_json(self) -> dict:
        return {"images": [str(p) for p in self.images]}


def e_vector(t: DeltaTable) -> list[int]:
    """``e(a) = sum_{s <= a} Δ_s(1)`` for a = 0..j."""
    out, acc = [], 0
    for a in range(t.j + 1):
        acc += t.delta(a, 1)
        out.append(acc)
    return out


def _pairing_value(p: Poly, f: Poly) -> Fraction:
    """``(p ⌟ f)(0)``."""
    total = Fraction(0)
    for a, c in p.items():
        fa = f.coeff(a)
        if fa:
            w = 1
            for k in a:
                w *= factorial(k)
            total += c * fa * w
    return total


def transport_dual(f: Poly, phi: Automorphism, verify: bool = True) -> Poly:
    """The ``g`` with ``g^⊥ = phi(f^⊥)``: its functional is ``p -> (phi^-1(p) ⌟ f)(0)``."""
    if not phi.ctx.pairs_with(f.ctx):
        raise StandardFormError("automorphism does not act on the dual of this polynomial")
    j = int(f.degree) if f else 0
    if j > phi.cap:
        raise StandardFormError(f"degree {j} exceeds the automorphism cap {phi.cap}")
    n = f.ctx.nvars
    terms = {}
    for b in monomial_basis(n, j):
        val = _pairing_value(phi.apply_inverse(Poly.monomial(phi.ctx, b), j), f)
        if val:
            w = 1
            for k in b:
                w *= factorial(k)
            terms[b] = val / w
    g = Poly(f.ctx, terms)
    if verify and f:
        from .apolarity import annihilator_space
        for k in annihilator_space(f, j + 1, phi.ctx).polys():
            if contract(phi.apply(k, j), g):
                raise ArithmeticError("transported ideal does not annihilate the transported polynomial")
    return g


@dataclass
class StandardFormResult:
    g: Poly
    phi: Automorphism
    e_vector: list[int]
    f: Poly | None = field(default=None, repr=False)
    table: DeltaTable | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {"g": str(self.g), "e": list(self.e_vector), "phi": self.phi.to_json()}


def support_violations(g: Poly, e: Sequence[int]) -> list[str]:
    """Homogeneous parts of ``g`` using variables beyond their allowance."""
    j = len(e) - 1
    bad = []
    low = 2 if j >= 2 else 0
    for i in range(0, j + 1):
        part = g.homogeneous_part(i)
        if not part:
            continue
        if i < low:
            bad.append(f"g_{i} must vanish")
            continue
        allowed = e[j - i]
        if any(v >= allowed for v in part.variables_used()):
            bad.append(f"g_{i} uses variables beyond x{allowed}")
    return bad


def _strip(g: Poly, j: int) -> Poly:
    if j >= 2:
        return g - g.homogeneous_part(0) - g.homogeneous_part(1)
    return g


def verify_standard_form(f: Poly, r: StandardFormResult) -> CertificateReport:
    rep = CertificateReport("standard form")
    bad = support_violations(r.g, r.e_vector)
    rep.add("support", FAILED if bad else PROVED, violations=bad)
    tf = r.table or delta_table(f)
    same = delta_table(r.g) == tf if r.g else False
    rep.add("delta table", PROVED if same else FAILED)
    same_rank = bool(r.g) and apolar_rank(r.g) == apolar_rank(f)
    rep.add("rank", PROVED if same_rank else FAILED)
    j = int(f.degree)
    ok = bool(r.g)
    if ok:
        for p in apolar_generators(f, r.phi.ctx, verify=False).generators:
            if contract(r.phi.apply(p, j), r.g):
                ok = False
                break
    rep.add("ideal transport", PROVED if ok else FAILED)
    return rep


def _lifts(f: Poly, e: list[int], dctx: VarContext) -> list[Poly]:
    """Lifts z_1..z_n with z_r in Z_k whenever r > e(j-1-k).

    ``Z_k`` is the set of z in m_T of degree <= j with ``deg(z ⌟ f) < k``.
    Candidates come from the reduced echelon form of Z_k with the linear
    monomials first; rows with new linear parts are taken greedily.
    """
    from .apolarity import contract_monomial

    j, n = int(f.degree), f.ctx.nvars
    sidx = basis_index(n, j)
    nS = count_monomials(n, j)
    order = [b for d in range(1, j + 1) for b in monomials_of_degree(n, d)]
    images = [contract_monomial(b, f) for b in order]
    chosen: list[Poly] = []
    lin = Echelon()
    for k in range(j + 1):
        a = j - 1 - k
        need = n - (e[a] if a >= 0 else 0)
        if len(chosen) >= need:
            continue
        ech = Echelon()
        for col, img in enumerate(images):
            row = {sidx[m]: c for m, c in img.items() if sum(m) >= k}
            row[nS + col] = Fraction(1)
            ech.add(integer_row(row))
        kernel = Echelon({c - nS: {x - nS: v for x, v in r.items()}
                          for c, r in ech.pivots.items() if c >= nS})
        for r in kernel.reduced_rows():
            if len(chosen) >= need:
                break
            if min(r) >= n:
                break
            linear = {x: v for x, v in r.items() if x < n}
            if lin.add(integer_row(linear)):
                chosen.append(Poly(dctx, {order[x]: v for x, v in r.items()}))
        if len(chosen) < need:
            raise ArithmeticError(f"could not find {need} lifts at level {k}")
    return chosen[::-1]


def standardize(f: Poly, verify: bool = True) -> StandardFormResult:
    if not f or f.is_constant():
        raise StandardFormError("standard forms need a nonconstant polynomial")
    j = int(f.degree)
    table = delta_table(f)
    e = e_vector(table)
    dctx = dual_context(f.ctx)
    if not support_violations(_strip(f, j) if j >= 2 else f, e):
        phi = Automorphism.identity(dctx, j)
        g = f
    else:
        phi = Automorphism.from_inverse(dctx, j, _lifts(f, e, dctx))
        g = transport_dual(f, phi, verify=False)
    g = _strip(g, j)
    r = StandardFormResult(g, phi, e, f, table)
    if verify:
        rep = verify_standard_form(f, r)
        if not rep.passed:
            raise ArithmeticError(f"standard form failed its own checks: {rep.first_failure}")
    return r


def _quadratic_matrix(q: Poly, k: int) -> Matrix:
    """Symmetric matrix of a quadric in the first k variables."""
    M = [[Fraction(0)] * k for _ in range(k)]
    for ex, c in q.items():
        idx = [i for i, a in enumerate(ex) for _ in range(a)]
        a, b = idx
        if a == b:
            M[a][a] += c
        else:
            M[a][b] += c / 2
            M[b][a] += c / 2
    return M


def congruence_diagonalize(B: Matrix) -> tuple[Matrix, list[Fraction]]:
    """Invertible P and diagonal d with ``P^T B P = diag(d)`` over the rationals."""
    r = len(B)
    B = [list(row) for row in B]
    P = [[Fraction(int(i == k)) for k in range(r)] for i in range(r)]

    def col_op(dst: int, src: int, f: Fraction) -> None:
        # column dst += f * column src, and the matching row operation
        for i in range(r):
            B[i][dst] += f * B[i][src]
        for i in range(r):
            B[dst][i] += f * B[src][i]
        for i in range(r):
            P[i][dst] += f * P[i][src]

    for i in range(r):
        if not B[i][i]:
            k = next((k for k in range(i + 1, r) if B[k][k]), None)
            if k is not None:
                for row in B:
                    row[i], row[k] = row[k], row[i]
                B[i], B[k] = B[k], B[i]
                for row in P:
                    row[i], row[k] = row[k], row[i]
            else:
                k = next((k for k in range(i + 1, r) if B[i][k]), None)
                if k is None:
                    continue
                col_op(i, k, Fraction(1))
        for k in range(i + 1, r):
            if B[k][i]:
                col_op(k, i, -B[k][i] / B[i][i])
    return P, [B[i][i] for i in range(r)]


def diagonalize_quadric(r: StandardFormResult, verify: bool = True) -> StandardFormResult:
    """Split the quadric of a standard form into q pure squares of fresh variables.

    The squares come out as ``d_i * x_i^2`` with nonzero rational ``d_i``.
    """
    g = r.g
    j = int(g.degree)
    table = r.table or delta_table(g)
    e = r.e_vector
    n = g.ctx.nvars
    if j == 2:
        ff, top = 0, e[0]
    elif j >= 3:
        row = table.rows[j - 2]
        if row[0] != 0 or row[2] != 0:
            raise StandardFormError(f"row {j - 2} of the table is {row}, not of shape (0,q,0)")
        ff, top = e[j - 3], e[j - 2]
        if top - ff != row[1]:
            raise StandardFormError("e-vector does not match the table")
    else:
        raise StandardFormError("need socle degree at least 2")
    q = top - ff
    M = _quadratic_matrix(g.homogeneous_part(2), top)
    C = [row[ff:top] for row in M[:ff]]
    B = [row[ff:top] for row in M[ff:top]]
    Binv = invert_matrix(B) if q else []
    P, _ = congruence_diagonalize(B)
    # old x = L * new x
    L = [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    for a in range(q):
        for b in range(q):
            L[ff + a][ff + b] = P[a][b]
        for o in range(ff):
            L[ff + a][o] = -sum(Binv[a][b] * C[o][b] for b in range(q))
    images = [_linear(g.ctx, row) for row in L]
    g_sub = g.compose(images)
    Lt = [[L[k][i] for k in range(n)] for i in range(n)]
    chi = Automorphism.from_inverse(r.phi.ctx, r.phi.cap, [_linear(r.phi.ctx, row) for row in Lt])
    g_new = transport_dual(g, chi, verify=False)
    if g_new != g_sub:
        raise ArithmeticError("dual transport disagrees with the primal linear change")
    out = StandardFormResult(g_new, chi.compose(r.phi), e, r.f, table)
    if verify and r.f is not None:
        rep = verify_standard_form(r.f, out)
        if not rep.passed:
            raise ArithmeticError(f"diagonalized form failed its checks: {rep.first_failure}")
    return out


def quadric_split(r: StandardFormResult) -> tuple[int, Poly]:
    """(number of fresh pure squares, quadric in the variables of g_{>=3})."""
    g = r.g
    j = int(g.degree)
    e = r.e_vector
    ff = e[j - 3] if j >= 3 else 0
    g2 = g.homogeneous_part(2)
    inner = Poly(g.ctx, {m: c for m, c in g2.items() if all(a == 0 for a in m[ff:])})
    rest = g2 - inner
    squares = sum(1 for m in rest.terms if max(m) == 2 and sum(m) == 2)
    if len(rest) != squares:
        raise ArithmeticError("quadric part is not split")
    return squares, inner


__all__ = ["Automorphism", "StandardFormError", "StandardFormResult", "diagonalize_quadric", "e_vector",
           "quadric_split", "standardize", "support_violations", "transport_dual", "verify_standard_form"]
