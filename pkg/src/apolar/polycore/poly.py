"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, ...]

PRIMAL = "primal"
DUAL = "dual"
ADJOINED = "adjoined"
PARAMETER = "parameter"
_ROLES = (PRIMAL, DUAL, ADJOINED, PARAMETER)


class ContextError(ValueError):
    """Operands live in incompatible variable contexts."""


@dataclass(frozen=True)
class VarContext:
    """Ordered variable names together with a role for each variable.

    The i-th dual variable is paired with the i-th primal variable; adjoined
    variables pair with each other in order as well, so ``x1..xn, X`` on the
    primal side matches ``y1..yn, a`` on the dual side.
    """

    names: tuple[str, ...]
    roles: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.roles):
            raise ValueError("one role per variable is required")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        for r in self.roles:
            if r not in _ROLES:
                raise ValueError(f"unknown role {r!r}")
        if self.roles.count(PARAMETER) > 1:
            raise ValueError("at most one parameter variable is allowed")

    @classmethod
    def primal(cls, n: int, prefix: str = "x") -> VarContext:
        return cls(tuple(f"{prefix}{i}" for i in range(1, n + 1)), (PRIMAL,) * n)

    @classmethod
    def dual(cls, n: int, prefix: str = "y") -> VarContext:
        return cls(tuple(f"{prefix}{i}" for i in range(1, n + 1)), (DUAL,) * n)

    @classmethod
    def plain(cls, names: Sequence[str], parameter: str | None = None) -> VarContext:
        """Context for a general ideal: every variable primal except ``parameter``."""
        names = tuple(names)
        roles = tuple(PARAMETER if v == parameter else PRIMAL for v in names)
        return cls(names, roles)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ContextError(f"unknown variable {name!r} in context {self.names}") from None

    @property
    def parameter(self) -> str | None:
        for v, r in zip(self.names, self.roles):
            if r == PARAMETER:
                return v
        return None

    def extended(self, name: str, role: str) -> VarContext:
        return VarContext(self.names + (name,), self.roles + (role,))

    def without(self, name: str) -> VarContext:
        i = self.index(name)
        return VarContext(self.names[:i] + self.names[i + 1:], self.roles[:i] + self.roles[i + 1:])

    def pairs_with(self, other: VarContext) -> bool:
        """True when the dual variables of one context act on the primal variables of the other."""
        if self.nvars != other.nvars:
            return False
        for r, s in zip(self.roles, other.roles):
            if {r, s} not in ({PRIMAL, DUAL}, {ADJOINED}):
                return False
        return True

    def __str__(self) -> str:
        return ",".join(self.names)


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, d: int) -> tuple[Exponent, ...]:
    """All exponent tuples of total degree ``d``, in descending lex order."""
    if nvars == 0:
        return ((),) if d == 0 else ()
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_basis(nvars: int, cap: int) -> tuple[Exponent, ...]:
    """Monomials of degree at most ``cap`` in graded-lex descending order."""
    out: list[Exponent] = []
    for d in range(cap, -1, -1):
        out.extend(monomials_of_degree(nvars, d))
    return tuple(out)


@lru_cache(maxsize=None)
def basis_index(nvars: int, cap: int) -> dict[Exponent, int]:
    return {m: i for i, m in enumerate(monomial_basis(nvars, cap))}


def count_monomials(nvars: int, cap: int) -> int:
    """Dimension of the space of polynomials of degree at most ``cap``."""
    if cap < 0:
        return 0
    return comb(nvars + cap, nvars)


def grlex_key(e: Exponent) -> tuple[int, Exponent]:
    return (sum(e), e)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Poly:
    """Immutable sparse polynomial: a mapping exponent tuple -> nonzero Fraction."""

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[Exponent, object] | None = None):
        self.ctx = ctx
        clean: dict[Exponent, Fraction] = {}
        if terms:
            n = ctx.nvars
            for e, c in terms.items():
                if len(e) != n:
                    raise ContextError(f"exponent {e} does not match arity {n}")
                c = _as_fraction(c)
                if c:
                    clean[tuple(e)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx: VarContext, terms: dict[Exponent, Fraction]) -> Poly:
        p = cls.__new__(cls)
        p.ctx = ctx
        p._terms = terms
        p._hash = None
        return p

    # construction helpers

    @classmethod
    def zero(cls, ctx: VarContext) -> Poly:
        return cls._raw(ctx, {})

    @classmethod
    def const(cls, ctx: VarContext, c) -> Poly:
        c = _as_fraction(c)
        return cls._raw(ctx, {(0,) * ctx.nvars: c} if c else {})

    @classmethod
    def var(cls, ctx: VarContext, name: str) -> Poly:
        e = [0] * ctx.nvars
        e[ctx.index(name)] = 1
        return cls._raw(ctx, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, ctx: VarContext, e: Exponent, c=1) -> Poly:
        return cls(ctx, {tuple(e): c})

    # inspection

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self._terms.items())

    def coeff(self, e: Exponent) -> Fraction:
        return self._terms.get(tuple(e), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> float | int:
        """Total degree; ``-inf`` for the zero polynomial."""
        if not self._terms:
            return float("-inf")
        return max(sum(e) for e in self._terms)

    @property
    def order(self) -> float | int:
        """Lowest total degree of a term; ``inf`` for the zero polynomial."""
        if not self._terms:
            return float("inf")
        return min(sum(e) for e in self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ctx.nvars, Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def variables_used(self) -> set[int]:
        used = set()
        for e in self._terms:
            used.update(i for i, a in enumerate(e) if a)
        return used

    def homogeneous_part(self, d: int) -> Poly:
        return Poly._raw(self.ctx, {e: c for e, c in self._terms.items() if sum(e) == d})

    def top_form(self) -> Poly:
        if not self._terms:
            return self
        return self.homogeneous_part(self.degree)

    def truncate(self, cap: int) -> Poly:
        """Drop every term of total degree above ``cap``."""
        return Poly._raw(self.ctx, {e: c for e, c in self._terms.items() if sum(e) <= cap})

    def degree_in(self, name: str) -> int:
        i = self.ctx.index(name)
        return max((e[i] for e in self._terms), default=0)

    def weighted_degree(self, weights: Sequence[int]) -> float | int:
        if not self._terms:
            return float("-inf")
        return max(sum(w * a for w, a in zip(weights, e)) for e in self._terms)

    def leading_form(self, weights: Sequence[int]) -> Poly:
        """Sum of the terms of maximal weighted degree."""
        if not self._terms:
            return self
        top = self.weighted_degree(weights)
        return Poly._raw(self.ctx, {e: c for e, c in self._terms.items()
                                    if sum(w * a for w, a in zip(weights, e)) == top})

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in graded-lex descending order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        return max(self._terms.items(), key=lambda t: grlex_key(t[0]))

    # arithmetic

    def _check(self, other: Poly) -> None:
        if self.ctx != other.ctx:
            raise ContextError(f"context mismatch: ({self.ctx}) vs ({other.ctx})")

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.ctx, other)
        return NotImplemented

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self.ctx, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly.zero(self.ctx)
            return Poly._raw(self.ctx, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly._raw(self.ctx, out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Poly:
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("division only by a nonzero constant")
            other = other.constant_term()
        other = _as_fraction(other)
        if not other:
            raise ZeroDivisionError("division by zero")
        return self * (1 / other)

    def __pow__(self, k: int) -> Poly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, e: Exponent, c=1) -> Poly:
        c = _as_fraction(c)
        return Poly._raw(self.ctx, {tuple(a + b for a, b in zip(m, e)): v * c
                                    for m, v in self._terms.items()})

    def mul_truncated(self, other: Poly, cap: int) -> Poly:
        """Product with every term of degree above ``cap`` discarded."""
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        right = [(e, sum(e), c) for e, c in other._terms.items()]
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            if d1 > cap:
                continue
            for e2, d2, c2 in right:
                if d1 + d2 > cap:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly._raw(self.ctx, out)

    def pow_truncated(self, k: int, cap: int) -> Poly:
        result = Poly.const(self.ctx, 1).truncate(cap)
        for _ in range(k):
            result = result.mul_truncated(self, cap)
        return result

    def diff(self, name: str) -> Poly:
        i = self.ctx.index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Poly._raw(self.ctx, out)

    def subs(self, name: str, value) -> Poly:
        """Substitute a rational constant for a variable; the variable stays in the context."""
        i = self.ctx.index(name)
        value = _as_fraction(value)
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            f = e[:i] + (0,) + e[i + 1:]
            s = out.get(f, 0) + c * value ** e[i]
            if s:
                out[f] = s
            else:
                out.pop(f, None)
        return Poly._raw(self.ctx, out)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        pt = [_as_fraction(v) for v in point]
        for e, c in self._terms.items():
            term = c
            for v, a in zip(pt, e):
                if a:
                    term *= v ** a
            total += term
        return total

    def compose(self, images: Sequence[Poly], cap: int | None = None) -> Poly:
        """Substitute ``images[i]`` for the i-th variable, optionally truncating at ``cap``."""
        if len(images) != self.ctx.nvars:
            raise ContextError("one image per variable is required")
        target = images[0].ctx if images else self.ctx
        big = 10 ** 9 if cap is None else cap
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            if (i, k) not in cache:
                if k == 0:
                    cache[(i, k)] = Poly.const(target, 1)
                else:
                    cache[(i, k)] = power(i, k - 1).mul_truncated(images[i], big)
            return cache[(i, k)]

        total = Poly.zero(target)
        for e, c in self._terms.items():
            term = Poly.const(target, c)
            for i, a in enumerate(e):
                if a:
                    term = term.mul_truncated(power(i, a), big)
            total = total + term
        return total

    def rename(self, ctx: VarContext, positions: Sequence[int] | None = None) -> Poly:
        """Move into ``ctx``: variable i goes to ``positions[i]`` (identity by default)."""
        if positions is None:
            if ctx.nvars != self.ctx.nvars:
                raise ContextError("arity differs; give explicit positions")
            return Poly._raw(ctx, dict(self._terms))
        out = {}
        n = ctx.nvars
        for e, c in self._terms.items():
            f = [0] * n
            for i, a in enumerate(e):
                if a:
                    f[positions[i]] += a
            out[tuple(f)] = c
        return Poly._raw(ctx, out)

    def drop_variable(self, name: str) -> Poly:
        """Remove a variable that does not occur from the context."""
        i = self.ctx.index(name)
        if any(e[i] for e in self._terms):
            raise ContextError(f"variable {name} still occurs in {self}")
        return Poly._raw(self.ctx.without(name), {e[:i] + e[i + 1:]: c for e, c in self._terms.items()})

    # comparison and printing

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.ctx, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        from .printing import format_poly
        return format_poly(self)

    def monic(self) -> Poly:
        """Scale so that the graded-lex leading coefficient is 1."""
        if not self._terms:
            return self
        return self / self.leading_term()[1]


def sum_polys(polys: Iterable[Poly], ctx: VarContext) -> Poly:
    total = Poly.zero(ctx)
    for p in polys:
        total = total + p
    return total
