import pytest

from apolar.apolarity import apolar_generators
from apolar.ideals import (TruncatedIdeal, WeightVector, generating_subset, ideal_product,
                           initial_span, membership, settled_quotient_rank, specialize,
                           torsion_witness, truncate_ideal)
from apolar.polycore import Span, VarContext, parse_poly

XY = VarContext.plain(["x", "y"])
XYT = VarContext.plain(["x", "y", "t"], parameter="t")
XT = VarContext.plain(["x", "t"], parameter="t")


def P(text, ctx=XY):
    return parse_poly(text, ctx)


HYPER = ["x^2-1", "x*y-1"]


class TestTruncation:
    def test_cancellation_reaches_degree_one(self):
        I = truncate_ideal([P(g) for g in HYPER], 3)
        assert I.span_upto(1).contains(P("x - y"))

    def test_generator_is_member(self):
        g = P("x^3 - 2*x*y + 5")
        assert truncate_ideal([g], 4).contains(g)

    def test_proper_ideal(self):
        inside, certified = membership(truncate_ideal([P("x"), P("y")], 2), P("1"))
        assert not inside and certified
        inside, certified = membership(truncate_ideal([P(g) for g in HYPER], 4), P("1"))
        assert not inside and certified

    def test_hyperbola_not_in_axes(self):
        I = truncate_ideal([P("t", XT), P("x", XT)], 3)
        assert not I.contains(P("t*x - 1", XT))


class TestProduct:
    def test_examples(self):
        Y1 = VarContext.dual(1)
        I = truncate_ideal([parse_poly("y1^2", Y1)], 5)
        assert ideal_product(I, I, 5).span == truncate_ideal([parse_poly("y1^4", Y1)], 5).span
        m = truncate_ideal([P("x"), P("y")], 4)
        assert ideal_product(m, m, 4).span == truncate_ideal([P("x^2"), P("x*y"), P("y^2")], 4).span

    def test_apolar_square(self):
        Y2 = VarContext.dual(2)
        gens = apolar_generators(parse_poly("x1^2 + x1*x2", VarContext.primal(2))).generators
        I = TruncatedIdeal(gens, 6, local=True, ctx=Y2)
        sq = ideal_product(I, I, 6)
        brute = TruncatedIdeal([a * b for a in gens for b in gens], 6, local=True, ctx=Y2)
        assert sq.span == brute.span


class TestQuotientRank:
    @pytest.mark.parametrize("gens,ctx,want", [
        (["x^2", "y^2"], XY, 4),
        (["x^3"], VarContext.plain(["x"]), 3),
        (HYPER, XY, 2),
    ])
    def test_examples(self, gens, ctx, want):
        assert settled_quotient_rank([P(g, ctx) for g in gens], ctx)[0] == want

    def test_local_sees_only_origin(self):
        # (x^2-1, xy-1) has no point at the origin
        assert settled_quotient_rank([P(g) for g in HYPER], XY, local=True)[0] == 0


class TestInitialSpan:
    def test_hyperbola(self):
        I = truncate_ideal([P(g) for g in HYPER], 4)
        G = initial_span(I, WeightVector((1, 1)), 4)
        assert G.span == truncate_ideal([P("x - y"), P("x^2")], 4).span
        naive = truncate_ideal([P("x^2"), P("x*y")], 4)
        assert naive.rank < G.rank
        assert Span.from_polys(generating_subset(G.span.polys(), XY, 4), XY, 4).rank > 0

    def test_weight_on_x_only(self):
        I = truncate_ideal([P("x^2 + t*y*x", XYT)], 4)
        G = initial_span(I, WeightVector((1, 0, 0)), 4)
        assert G.span == truncate_ideal([P("x^2", XYT)], 4).span

    def test_homogeneous_unchanged(self):
        I = truncate_ideal([P("x^2 - y^2"), P("x*y")], 4)
        assert initial_span(I, WeightVector((1, 1)), 4).span == I.span

    def test_weights_validated(self):
        with pytest.raises(ValueError):
            WeightVector((0, 0))
        with pytest.raises(ValueError):
            WeightVector((1, -1))


class TestTorsion:
    def test_hyperbola_plus_origin(self):
        gens = [P("t^2*x - t", XT), P("t*x^2 - x", XT)]
        w = torsion_witness(truncate_ideal(gens, 4), "t", 4)
        assert w is not None and w.witness == P("t*x - 1", XT)

    @pytest.mark.parametrize("gen", ["t*x - 1", "x"])
    def test_none(self, gen):
        assert torsion_witness(truncate_ideal([P(gen, XT)], 4), "t", 4) is None


class TestSpecialize:
    def test_fibres(self):
        I = truncate_ideal([P("x^2 + t*y*x", XYT), P("y^2", XYT)], 4)
        I0 = specialize(I, "t", 0)
        ctx = I0.ctx
        assert I0.span == truncate_ideal([parse_poly("x^2", ctx), parse_poly("y^2", ctx)], 4).span
        gens1 = specialize(I, "t", 1).gens
        assert settled_quotient_rank(gens1, ctx)[0] == 4

    def test_parameter_free_unchanged(self):
        I = truncate_ideal([P("x^2", XYT), P("y^3", XYT)], 4)
        J = specialize(I, "t", 5)
        assert [str(g) for g in J.gens] == ["x^2", "y^3"]
