import json
from fractions import Fraction

import pytest

from apolar.apolarity import apolar_rank, dual_context, hilbert_function
from apolar.deform import (FamilyError, FamilySpec, ParamFamily, adjoin_variable_annihilator,
                           adjoined_polynomial, build_family, check_hypotheses, flatness_certificate,
                           local_rank_at, rational_roots, same_as_annihilator, tangent_rank,
                           verify_fiber_decomposition)
from apolar.ideals import TruncatedIdeal, settled_quotient_rank
from apolar.polycore import Span, VarContext, parse_poly
from apolar.report import EVIDENCE, FAILED, PROVED

from oracles import brute_annihilator

X1, X3, X4 = VarContext.primal(1), VarContext.primal(3), VarContext.primal(4)
QUARTICS = "x1^4+x2^4+x3^4"


def P(text, ctx):
    return parse_poly(text, ctx)


def D(text, f):
    return parse_poly(text, dual_context(f.ctx))


class TestAdjoin:
    def test_cube(self):
        f = P("x1^3", X1)
        d = D("y1^3", f)
        g = adjoined_polynomial(f, d, 2)
        assert g == P("x1^3 + 6*x2^2", g.ctx)
        gens = adjoin_variable_annihilator(f, d, 2)
        Y = gens[0].ctx
        want = [P(s, Y) for s in ["y1^4", "y2*y1", "y2^2 - 2*y1^3"]]
        assert same_as_annihilator(want, g, Y)
        assert same_as_annihilator(gens, g, Y)

    def test_degenerate(self):
        f = P("x1^2", VarContext.primal(2))
        d = D("y2", f)
        gens = adjoin_variable_annihilator(f, d, 2)
        assert same_as_annihilator(gens, adjoined_polynomial(f, d, 2), gens[0].ctx)

    def test_quartic_family_polynomial(self):
        f = P(QUARTICS, X3)
        d = D("(y1^3+y2^3)/6", f)
        g = adjoined_polynomial(f, d, 2)
        assert g == P("x1^4+x2^4+x3^4+4*x4^2*(x1+x2)", g.ctx)
        # rescaling d by 1/4 gives the polynomial with unit coefficient
        g1 = adjoined_polynomial(f, D("(y1^3+y2^3)/24", f), 2)
        assert g1 == P("x1^4+x2^4+x3^4+x4^2*(x1+x2)", g.ctx)
        gens = adjoin_variable_annihilator(f, d, 2)
        cap = int(g.degree) + 1
        Y = gens[0].ctx
        brute = Span.from_polys(brute_annihilator(g, cap, Y), Y, cap)
        assert TruncatedIdeal(gens, cap, local=True, ctx=Y).span == brute

    def test_hypothesis_enforced(self):
        f = P("x1^3", X1)
        with pytest.raises(FamilyError):
            adjoin_variable_annihilator(f, D("y1", f), 2)
        with pytest.raises(FamilyError):
            adjoin_variable_annihilator(f, D("y1^3", f), 1)


class TestFamily:
    def test_cube_generators(self):
        f = P("x1^3", X1)
        s = build_family(f, D("y1^3", f), 2)
        gens = s.generators()
        ctx = s.ctx
        want = {P(t, ctx) for t in ["y2^2 - t*y2 - 2*y1^3", "y1^4", "y2*y1"]}
        assert set(gens) == want

    def test_json_round_trip(self):
        f = P(QUARTICS, X3)
        s = build_family(f, D("(y1^3+y2^3)/6", f), 2)
        back = FamilySpec.from_json(json.dumps(s.to_json()))
        assert [str(g) for g in back.generators(1)] == [str(g) for g in s.generators(1)]
        assert back.source[2] == 2

    def test_constant_dual_image(self):
        # d applied to f gives a constant: one simple point splits off
        f = P("x1^2", X1)
        s = build_family(f, D("y1^2/2", f), 2)
        rep = verify_fiber_decomposition(s, 1)
        assert rep.passed
        assert rep.check("local rank at alpha=1").data["rank"] == 1


class TestHypotheses:
    def test_cube_family(self):
        f = P("x1^3", X1)
        assert check_hypotheses(build_family(f, D("y1^3", f), 2)).verdict == PROVED

    def test_quartic_family(self):
        f = P(QUARTICS, X3)
        assert check_hypotheses(build_family(f, D("(y1^3+y2^3)/6", f), 2)).verdict == PROVED

    def test_empty_j(self):
        s = FamilySpec.from_json({"o": 2, "c": 1, "q": "y1", "J": [], "adjoined": "a"})
        assert check_hypotheses(s).verdict == PROVED

    def test_q_containment_violated(self):
        s = FamilySpec.from_json({"o": 2, "c": 1, "q": "y1", "J": ["a*y1"], "adjoined": "a"})
        rep = check_hypotheses(s)
        assert rep.verdict == FAILED
        assert rep.first_failure.name == "ann(alpha^o) in ann(q)"

    def test_c_containment_violated(self):
        s = FamilySpec.from_json({"o": 2, "c": 1, "q": "y1", "J": ["a^2*y1"], "adjoined": "a"})
        rep = check_hypotheses(s)
        assert rep.first_failure.name == "ann(alpha^o) in ann(alpha^c)"

    def test_bad_exponents(self):
        s = FamilySpec.from_json({"o": 2, "c": 2, "q": "y1", "J": [], "adjoined": "a"})
        assert check_hypotheses(s).first_failure.name == "0 < c < o"


class TestFibres:
    def test_cube(self):
        f = P("x1^3", X1)
        s = build_family(f, D("y1^3", f), 2)
        rep = verify_fiber_decomposition(s, 1)
        assert rep.passed
        assert rep.check("general fibre rank").data["rank"] == 5
        assert rep.check("local rank at origin").data["rank"] == 4
        g = adjoined_polynomial(f, D("y1^3", f), 2)
        assert hilbert_function(g) == (1, 2, 1, 1)
        assert settled_quotient_rank(s.generators(0), s.dual_ctx)[0] == apolar_rank(g) == 5

    def test_quartic_family(self):
        f = P(QUARTICS, X3)
        s = build_family(f, D("(y1^3+y2^3)/6", f), 2)
        rep = verify_fiber_decomposition(s, 1)
        assert rep.passed
        assert rep.check("general fibre rank").data["rank"] == 13
        assert rep.check("local rank at origin").data["rank"] == 11
        assert rep.check("local rank at alpha=1").data["rank"] == 2

    def test_rational_roots(self):
        assert sorted(rational_roots(Fraction(4), 2)) == [Fraction(-2), Fraction(2)]
        assert rational_roots(Fraction(2), 2) == []
        assert rational_roots(Fraction(-8), 3) == [Fraction(-2)]

    def test_local_rank_away_from_support(self):
        ctx = VarContext.plain(["x"])
        assert local_rank_at([P("x^2-1", ctx)], ctx, [Fraction(0)]) == 0
        assert local_rank_at([P("x^2-1", ctx)], ctx, [Fraction(1)]) == 1


class TestTangent:
    def test_examples(self):
        assert tangent_rank(P("x1", X1)) == 2
        assert tangent_rank(P("1", X3)) == 3

    def test_quartic_point(self):
        assert tangent_rank(P("x1^4+x2^4+x3^4+x4^2*(x1+x2)", X4)) == 52


class TestFlatness:
    XYT = VarContext.plain(["x", "y", "t"], parameter="t")

    def test_flat_example(self):
        gens = [P("x^2+t*y*x", self.XYT), P("y^2", self.XYT)]
        rep = flatness_certificate(ParamFamily(gens, "t"))
        assert rep.verdict == EVIDENCE
        assert set(rep.check("fibre ranks").data["ranks"].values()) == {4}
        assert rep.check("torsion").data["witness"] is None

    def test_hyperbola_plus_origin(self):
        ctx = VarContext.plain(["x", "t"], parameter="t")
        gens = [P("t^2*x-t", ctx), P("t*x^2-x", ctx)]
        rep = flatness_certificate(ParamFamily(gens, "t"))
        assert rep.verdict == FAILED
        assert P(rep.check("torsion").data["witness"], ctx) == P("t*x-1", ctx)

    def test_constant_family(self):
        gens = [P("x^2", self.XYT), P("y^2", self.XYT)]
        assert flatness_certificate(ParamFamily(gens, "t")).verdict == PROVED

    def test_built_family(self):
        f = P("x1^3", X1)
        rep = flatness_certificate(build_family(f, D("y1^3", f), 2))
        assert rep.verdict in (PROVED, EVIDENCE)
        assert rep.check("hypothesis: J inside (y)").status == PROVED


class TestInvariants:
    GOLDEN = [("x1", 1), ("1", 3), ("x1^3-x2^2", 2), ("x1^2+x1*x2", 2), ("x1^5+x2^4+x3^4", 3),
              ("x1^4+x2^4+x3^4+x4^2*(x1+x2)", 4)]

    @pytest.mark.parametrize("text,n", GOLDEN)
    def test_tangent_matches_direct(self, text, n):
        from apolar.apolarity import apolar_generators
        f = P(text, VarContext.primal(n))
        pres = apolar_generators(f)
        j, Y, gens = pres.socle_degree, pres.dual_ctx, pres.generators
        cap = 2 * j + 1
        prods = [(a * b).truncate(cap) for a in gens for b in gens]
        I2 = TruncatedIdeal(prods, cap, local=True, ctx=Y, known_power=cap + 1)
        assert tangent_rank(f) == I2.quotient_rank() - apolar_rank(f)

    @pytest.mark.parametrize("text,dual,n", [
        ("x1^3", "y1^3", 1), ("x1^4+x2^4+x3^4", "(y1^3+y2^3)/6", 3), ("x1^2*x2", "y1^2", 2),
        ("x1^3+x2^3", "y1^2", 2),
    ])
    def test_rank_additivity(self, text, dual, n):
        f = P(text, VarContext.primal(n))
        s = build_family(f, D(dual, f), 2)
        assert check_hypotheses(s).verdict == PROVED
        base = settled_quotient_rank(s.generators(0), s.dual_ctx)[0]
        for lam in (1, -1, 2):
            assert settled_quotient_rank(s.generators(lam), s.dual_ctx)[0] == base

    def test_degenerate_dual_fails_hypotheses(self):
        # d kills f, so alpha itself joins J
        f = P("x1^3+x2^3", VarContext.primal(2))
        rep = check_hypotheses(build_family(f, D("y1^2*y2", f), 2))
        assert rep.first_failure.name == "J inside (y)"

    @pytest.mark.parametrize("seed", range(12))
    def test_chain_drops_one(self, seed):
        import random
        from apolar.decomposition import delta_table
        from _gen import random_poly
        rng = random.Random(seed)
        n = rng.randint(2, 3)
        X = VarContext.primal(n)
        j = rng.randint(3, 4)
        sub = VarContext.primal(n - 1)
        g_small = random_poly(rng, sub, j, terms=3)
        g = g_small.rename(X, list(range(1, n)))
        f = g + P("x1^2", X)
        s = build_family(f, D("y1^2/2", f), 2)
        assert check_hypotheses(s).verdict == PROVED
        tf, tg = delta_table(f), delta_table(g)
        assert tf.delta(j - 2, 1) - tg.delta(j - 2, 1) == 1
        others = [(a, b) for a in range(j + 1) for b in range(j - a + 1) if (a, b) != (j - 2, 1)]
        assert all(tf.delta(a, b) == tg.delta(a, b) for a, b in others)
