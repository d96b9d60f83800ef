"""Acceptance criteria 1-14, one test each; every test prints a PASS/FAIL line with its timing."""

import random
import time

import pytest

from apolar.apolarity import apolar_generators, apolar_rank, contract, dual_context, hilbert_function
from apolar.decomposition import DeltaTable, admissible_tables, delta_table, verify_table
from apolar.deform import (ParamFamily, adjoin_variable_annihilator, adjoined_polynomial, build_family,
                           check_hypotheses, flatness_certificate, tangent_rank,
                           verify_fiber_decomposition)
from apolar.ideals import (TruncatedIdeal, WeightVector, initial_span, settled_quotient_rank,
                           torsion_witness, truncate_ideal)
from apolar.polycore import Poly, Span, VarContext, monomial_basis, parse_poly
from apolar.report import FAILED, PROVED
from apolar.standard_form import standardize, support_violations, verify_standard_form

from _gen import random_f, random_poly
from oracles import brute_annihilator

INSTANCES = 200


def P(text, n):
    return parse_poly(text, VarContext.primal(n))


def report(capsys, num, title, limit, fn):
    start = time.perf_counter()
    failure = None
    try:
        fn()
    except AssertionError as exc:
        failure = str(exc) or "assertion failed"
    elapsed = time.perf_counter() - start
    if failure is None and elapsed > limit:
        failure = f"took {elapsed:.2f} s, limit {limit} s"
    status = "PASS" if failure is None else "FAIL"
    with capsys.disabled():
        line = f"\n[{status}] criterion {num:>2}: {title} ({elapsed:.2f} s / {limit} s)"
        print(line + (f" -- {failure}" if failure else ""))
    assert failure is None, failure


def rows(t, k):
    return [list(r) for r in t.rows[:k]]


def zero_after(t, k):
    return not any(any(r) for r in t.rows[k:])


def test_c01_hilbert(capsys):
    def body():
        assert hilbert_function(P("x1^5+x2^4+x3^4", 3)) == (1, 3, 3, 3, 1, 1)
    report(capsys, 1, "hilbert_function(x1^5+x2^4+x3^4)", 1, body)


def test_c02_cusp_table(capsys):
    def body():
        f = P("x1^3-x2^2", 2)
        t = delta_table(f)
        assert rows(t, 2) == [[1, 1, 1, 1], [0, 1, 0]] and zero_after(t, 2)
        assert apolar_rank(f) == 5 and hilbert_function(f) == (1, 2, 1, 1)
    report(capsys, 2, "delta_table(x1^3-x2^2), rank 5", 1, body)


def test_c03_table(capsys):
    def body():
        t = delta_table(P("x1^3-x1*x2", 2))
        assert rows(t, 2) == [[1, 1, 1, 1], [0, 0, 0]] and zero_after(t, 2)
    report(capsys, 3, "delta_table(x1^3-x1x2)", 1, body)


def test_c04_table(capsys):
    def body():
        t = delta_table(P("x1^4-12*x1^2*x2", 2))
        assert rows(t, 3) == [[1, 1, 1, 1, 1], [0, 0, 0, 0], [0, 1, 0]] and zero_after(t, 3)
    report(capsys, 4, "delta_table(x1^4-12x1^2x2)", 1, body)


def test_c05_apolar_generators(capsys):
    def body():
        Y = VarContext.dual(2)
        pres = apolar_generators(P("x1^2+x1*x2", 2))
        want = [parse_poly("y2^2", Y), parse_poly("y1^2-2*y1*y2", Y)]
        got = TruncatedIdeal(pres.generators, 3, local=True, ctx=Y)
        assert got.span == TruncatedIdeal(want, 3, local=True, ctx=Y).span
    report(capsys, 5, "apolar_generators(x1^2+x1x2)", 1, body)


def test_c06_tangent(capsys):
    def body():
        f = P("x1^4+x2^4+x3^4+x4^2*(x1+x2)", 4)
        assert tangent_rank(f) == 52 and apolar_rank(f) == 13
    report(capsys, 6, "tangent_rank = 52, apolar_rank = 13", 120, body)


def test_c07_initial_span(capsys):
    def body():
        ctx = VarContext.plain(["x", "y"])
        gens = [parse_poly("x^2-1", ctx), parse_poly("x*y-1", ctx)]
        G = initial_span(truncate_ideal(gens, 4), WeightVector((1, 1)), 4)
        want = truncate_ideal([parse_poly("x-y", ctx), parse_poly("x^2", ctx)], 4)
        naive = truncate_ideal([parse_poly("x^2", ctx), parse_poly("x*y", ctx)], 4)
        assert G.span == want.span
        assert G.span.contains_span(naive.span) and naive.rank < G.rank
    report(capsys, 7, "initial_span((x^2-1, xy-1)) = (x-y, x^2)", 1, body)


def test_c08_flat_family(capsys):
    def body():
        ctx = VarContext.plain(["x", "y", "t"], parameter="t")
        gens = [parse_poly("x^2+t*y*x", ctx), parse_poly("y^2", ctx)]
        rep = flatness_certificate(ParamFamily(gens, "t"), (0, 1, -1, 2), torsion_cap=6)
        ranks = rep.check("fibre ranks").data["ranks"]
        assert ranks == {"0": 4, "1": 4, "-1": 4, "2": 4}, ranks
        assert rep.check("torsion").data["witness"] is None
    report(capsys, 8, "flatness_certificate((x^2+tyx, y^2))", 5, body)


def test_c09_torsion(capsys):
    def body():
        ctx = VarContext.plain(["x", "t"], parameter="t")
        gens = [parse_poly("t^2*x-t", ctx), parse_poly("t*x^2-x", ctx)]
        w = torsion_witness(truncate_ideal(gens, 4), "t", 4)
        assert w is not None and w.witness == parse_poly("t*x-1", ctx)
    report(capsys, 9, "torsion witness tx-1 on (tx-1) meet (t,x)", 1, body)


def test_c10_quartic_family(capsys):
    def body():
        f = P("x1^4+x2^4+x3^4", 3)
        d = parse_poly("(y1^3+y2^3)/6", dual_context(f.ctx))
        s = build_family(f, d, 2)
        assert check_hypotheses(s).verdict == PROVED
        for lam in (0, 1):
            assert settled_quotient_rank(s.generators(lam), s.dual_ctx)[0] == 13
        rep = verify_fiber_decomposition(s, 1)
        assert rep.passed
        assert rep.check("local rank at origin").data["rank"] == 11
        assert rep.check("local rank at alpha=1").data["rank"] == 2
    report(capsys, 10, "family of x1^4+x2^4+x3^4: 13 = 11 + 2", 30, body)


def test_c11_reject_table(capsys):
    def body():
        t = DeltaTable.from_rows(5, [[1, 1, 1, 1, 1, 1], [0, 0, 1, 0, 0], [0, 0, 0, 0], [0, 1, 0]])
        rep = verify_table(t, t.column_sums())
        assert rep.verdict == FAILED
        assert rep.first_failure.data.get("partial_sum") == [1, 1, 2, 1, 1, 1]
    report(capsys, 11, "verify_table rejects partial sum (1,1,2,1,1,1)", 1, body)


def test_c12_admissible(capsys):
    def body():
        ts = admissible_tables(3, (1, 2, 1, 1))
        assert len(ts) == 1 and rows(ts[0], 2) == [[1, 1, 1, 1], [0, 1, 0]]
    report(capsys, 12, "admissible_tables(3, (1,2,1,1)) is unique", 1, body)


# criterion 13


def prop_module_action(rng):
    n = rng.randint(1, 3)
    X, Y = VarContext.primal(n), VarContext.dual(n)
    f = random_poly(rng, X, rng.randint(1, 5))
    a = random_poly(rng, Y, 2, terms=3, exact_degree=False)
    b = random_poly(rng, Y, 2, terms=3, exact_degree=False)
    assert contract(a * b, f) == contract(a, contract(b, f))


def prop_rows(rng):
    f = random_f(rng, 3, 5)
    t, h = delta_table(f), hilbert_function(f)
    assert all(r == r[::-1] for r in t.rows)
    assert t.column_sums() == h + (0,) * (t.j + 1 - len(h))


def prop_top_form(rng):
    f = random_f(rng, 3, 5)
    t = delta_table(f)
    h = hilbert_function(f.top_form())
    assert t.rows[0] == h + (0,) * (t.j + 1 - len(h))


def prop_perturbation(rng):
    f1 = random_f(rng, 3, 5)
    j = int(f1.degree)
    a = rng.randint(1, max(1, j - 1))
    if a >= j:
        return
    f2 = f1 + random_poly(rng, f1.ctx, j - a, exact_degree=False)
    assert delta_table(f1).rows[:a] == delta_table(f2).rows[:a]


def prop_adjoin(rng):
    n = rng.randint(1, 2)
    X, Y = VarContext.primal(n), VarContext.dual(n)
    j = rng.randint(1, 4)
    f = random_poly(rng, X, j, terms=3)
    low = (j + 2) // 2  # 2*low > j, so d^2 kills f
    terms = {}
    for e in monomial_basis(n, j):
        if sum(e) >= low and rng.random() < 0.5:
            terms[e] = rng.randint(-2, 2)
    d = Poly(Y, {e: c for e, c in terms.items() if c})
    m = rng.randint(2, 3)
    gens = adjoin_variable_annihilator(f, d, m, verify=False)
    g = adjoined_polynomial(f, d, m)
    D = gens[0].ctx
    cap = int(g.degree) + 1
    brute = Span.from_polys(brute_annihilator(g, cap, D), D, cap)
    assert TruncatedIdeal(gens, cap, local=True, ctx=D).span == brute


def prop_quotient_rank(rng):
    f = random_f(rng, 3, 4)
    pres = apolar_generators(f, verify=False)
    assert settled_quotient_rank(pres.generators, pres.dual_ctx, local=True)[0] == apolar_rank(f)


PROPERTIES = [prop_module_action, prop_rows, prop_top_form, prop_perturbation, prop_adjoin,
              prop_quotient_rank]


def test_c13_properties(capsys):
    def body():
        for k, prop in enumerate(PROPERTIES):
            for i in range(INSTANCES):
                rng = random.Random(1000 * k + i)
                try:
                    prop(rng)
                except AssertionError:
                    raise AssertionError(f"{prop.__name__} failed on seed {1000 * k + i}") from None
    report(capsys, 13, f"property suite, {INSTANCES} seeded instances x {len(PROPERTIES)}", 600, body)


GOLDEN = [("x1^3-x2^2", 2), ("x1^3-x1*x2", 2), ("x1^4-12*x1^2*x2", 2), ("x1^2+x1*x2", 2),
          ("x1^5+x2^4+x3^4", 3), ("x1^4+x2^4+x3^4+x4^2*(x1+x2)", 4), ("x1^3+(x1+x2)^2", 2),
          ("x1^4+x2^4+x3^4", 3)]


@pytest.mark.parametrize("text,n", GOLDEN)
def test_c14_standardize(capsys, text, n):
    def body():
        f = P(text, n)
        r = standardize(f)
        assert not support_violations(r.g, r.e_vector)
        assert delta_table(r.g) == delta_table(f)
        rep = verify_standard_form(f, r)
        assert rep.verdict == PROVED, rep.render()
    report(capsys, 14, f"standardize postconditions on {text}", 10, body)
