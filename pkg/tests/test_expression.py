import pytest

from tropcurve import corpus, sampling
from tropcurve.errors import ExprSyntaxError, UnboundSymbol
from tropcurve.expression import (Const, Gen, Max, Neg, Plus, Scale, eval_expr, expand_scale,
                                  generators, parse_batch, parse_expr, print_expr, symbols)
from tropcurve.extended import INF, NEG_INF, Q
from tropcurve.functions import (RationalFunction, cf, cf_point, evaluate, pl_equal, trop_add,
                                 trop_inv, trop_mul, trop_pow)

CURVES = list(corpus.CORPUS)


class TestGenerators:
    def test_seg4_bindings(self, seg4):
        g = generators(seg4)
        assert sorted(g.symbols()) == ["f@e", "g@e", "h@e", "vinf@u", "vinf@v"]
        p = lambda t: seg4.point("e", t)  # noqa: E731
        assert pl_equal(eval_expr(Gen("f@e"), g), cf_point(seg4, p(2), 2))
        assert pl_equal(eval_expr(Gen("g@e"), g), cf_point(seg4, p(1), 1))
        assert pl_equal(eval_expr(Gen("h@e"), g), cf_point(seg4, p(3), 1))
        assert pl_equal(eval_expr(Gen("vinf@u"), g), cf(seg4, seg4.subgraph((), ["u"]), INF))

    @pytest.mark.parametrize("name,size", [("seg4", 4), ("loop4", 3), ("theta", 8), ("star3", 10),
                                           ("star4", 13), ("dumbbell", 8)])
    def test_counted_size(self, name, size):
        g = generators(corpus.get(name))
        assert g.counted_size() == size
        assert g.counted_size() <= g.bound_size()

    def test_leg_symbol(self, seg4_inf):
        g = generators(seg4_inf)
        assert any(s.startswith("linf@") for s in g.symbols())
        f = eval_expr(Gen("linf@1"), g)
        # the canonical model drops v, so the leg starts at u
        assert evaluate(f, seg4_inf.point(vertex="u")) == 0
        assert evaluate(f, seg4_inf.point(vertex="v")) == -4
        assert evaluate(f, seg4_inf.point(vertex="w")) == NEG_INF

    def test_rebuild_g_from_quotient(self, seg4):
        g = generators(seg4)
        q = Plus((Gen("g@e"), Neg(Gen("h@e"))))
        rebuilt = Plus((Const(Q(-1)), Max((q, Const(Q(0))))))
        assert pl_equal(eval_expr(rebuilt, g), eval_expr(Gen("g@e"), g))

    @pytest.mark.parametrize("name", ["seg4", "loop4", "theta", "star3", "dumbbell"])
    def test_rebuild_on_every_edge(self, name):
        c = corpus.get(name)
        g = generators(c)
        for eid in g.ccurve.edges:
            L = g.ccurve.length(eid)
            q = Plus((Gen(f"g@{eid}"), Neg(Gen(f"h@{eid}"))))
            e = Plus((Const(-L / 4), Max((q, Const(Q(0))))))
            assert pl_equal(eval_expr(e, g), eval_expr(Gen(f"g@{eid}"), g))


class TestEvaluation:
    def test_neg_inf_is_neutral(self, seg4):
        g = generators(seg4)
        x = Gen("f@e")
        assert pl_equal(eval_expr(Max((Const(NEG_INF), x)), g), eval_expr(x, g))

    def test_unbound(self, seg4):
        with pytest.raises(UnboundSymbol):
            eval_expr(Gen("f@zz"), generators(seg4))

    @pytest.mark.parametrize("name", CURVES)
    def test_homomorphism(self, name):
        c = corpus.get(name)
        g = generators(c)
        rng = sampling.make_rng(21)
        syms = g.symbols()
        for _ in range(20):
            a = sampling.random_expr(syms, rng, depth=rng.randint(1, 6))
            b = sampling.random_expr(syms, rng, depth=rng.randint(1, 6))
            fa, fb = eval_expr(a, g), eval_expr(b, g)
            assert pl_equal(eval_expr(Max((a, b)), g), trop_add(fa, fb))
            assert pl_equal(eval_expr(Plus((a, b)), g), trop_mul(fa, fb))
            assert pl_equal(eval_expr(Neg(a), g), trop_inv(fa))

    @pytest.mark.parametrize("k", [-3, -1, 0, 1, 2, 4])
    def test_scale(self, theta, k):
        g = generators(theta)
        x = Max((Gen("f@a"), Plus((Gen("g@c"), Const(Q(1, 2))))))
        s = Scale(x, k)
        want = eval_expr(expand_scale(s), g)
        assert pl_equal(eval_expr(s, g), want)
        assert pl_equal(want, trop_pow(eval_expr(x, g), k))
        if k == 0:
            assert pl_equal(want, RationalFunction.constant(theta, 0))

    def test_on_user_model(self, seg4_inf):
        g = generators(seg4_inf)
        f = eval_expr(Gen("vinf@u"), g)
        assert f.curve is seg4_inf
        assert evaluate(f, seg4_inf.point("e", 3)) == -3


class TestText:
    def test_max(self):
        e = parse_expr("(max f@e (const -1))")
        assert isinstance(e, Max) and isinstance(e.children[0], Gen)
        assert e.children[0].symbol == "f@e" and e.children[1].value == -1

    def test_plus(self):
        e = parse_expr("(plus (neg h@e) (const -1/4))")
        assert isinstance(e, Plus) and isinstance(e.children[0], Neg)
        assert e.children[1].value == Q(-1, 4)

    @pytest.mark.parametrize("s", [
        "(max f@e (const -1))",
        "(plus (neg h@e) (const -1/4))",
        "(scale -2 (max g@a h@b (const 0)))",
        "(max (plus (neg (max (plus (const 1) f@e) (plus (const -1) (neg f@e)))) (const -1) (neg h@e)) (const -1))",
        "(plus linf@1 vinf@u (const -inf))",
    ])
    def test_round_trip(self, s):
        assert print_expr(parse_expr(s)) == s

    def test_random_round_trip(self, theta):
        syms = generators(theta).symbols()
        rng = sampling.make_rng(5)
        for _ in range(50):
            e = sampling.random_expr(syms, rng, depth=5)
            s = print_expr(e)
            assert print_expr(parse_expr(s)) == s

    def test_annotated_form_parses(self):
        e = Max((Plus((Gen("f@e"), Const(Q(1))), "shift"), Const(Q(-2))), "cut")
        t = print_expr(e, annotate=True)
        assert "; cut" in t and "; shift" in t
        assert print_expr(parse_expr(t)) == print_expr(e)
        assert parse_expr(t).tag == "cut"

    def test_batch(self):
        es = parse_batch("; two lines\nf@e\n\n(neg g@e) ; trailing\n")
        assert [print_expr(e) for e in es] == ["f@e", "(neg g@e)"]

    @pytest.mark.parametrize("text,pos", [
        ("(max f@e g@e", 12),
        ("(min f@e g@e)", 1),
        ("(max f@e)", 1),
        ("(const x)", 7),
        ("(scale 1/2 f@e)", 7),
        ("(neg foo)", 5),
        ("f@e )", 4),
    ])
    def test_error_position(self, text, pos):
        with pytest.raises(ExprSyntaxError) as ei:
            parse_expr(text)
        assert ei.value.position == pos

    def test_symbols(self):
        assert symbols(parse_expr("(max f@e (plus f@e (neg vinf@u)))")) == {"f@e", "vinf@u"}
