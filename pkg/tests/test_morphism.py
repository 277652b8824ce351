import pytest

from oracles import sample_points
from tropcurve import corpus, sampling
from tropcurve.errors import ConditionViolated, PreimageCountMismatch
from tropcurve.extended import Q
from tropcurve.functions import (RationalFunction, cf_point, evaluate, pl_equal, trop_add,
                                 trop_mul)
from tropcurve.graph import TropicalCurve
from tropcurve.morphism import (FiniteHarmonicMorphism, check_midpoint_identity, f_edge,
                                fold_example, g_unique_minimum, identity_morphism,
                                loopless_model, module_witness, morphism_ingredients, pullback,
                                refine_morphism, segment_identity, validate_morphism)
from tropcurve.piecewise import PL


def stretch():
    """[0,1] -> [0,2] with degree two."""
    s = TropicalCurve(["a", "b"], [("e", ("a", "b"), 1)])
    t = TropicalCurve(["A", "B"], [("E", ("A", "B"), 2)])
    return FiniteHarmonicMorphism(s, t, {"a": "A", "b": "B"}, {"e": "E"}, {"e": 2})


def double_cover():
    """A 4-cycle wrapping twice around a 2-cycle."""
    s = TropicalCurve(["a", "b", "c", "d"], [("p", ("a", "b"), 1), ("q", ("b", "c"), 1),
                                             ("r", ("c", "d"), 1), ("s", ("d", "a"), 1)])
    t = TropicalCurve(["A", "B"], [("P", ("A", "B"), 1), ("Q", ("B", "A"), 1)])
    return FiniteHarmonicMorphism(s, t, {"a": "A", "b": "B", "c": "A", "d": "B"},
                                  {"p": "P", "q": "Q", "r": "P", "s": "Q"},
                                  {"p": 1, "q": 1, "r": 1, "s": 1})


MORPHISMS = {"fold": fold_example, "stretch": stretch, "double": double_cover,
             "id-seg4": lambda: identity_morphism(corpus.seg4()),
             "id-theta": lambda: identity_morphism(corpus.theta())}


class TestValidation:
    def test_fold(self):
        r = validate_morphism(fold_example())
        assert r.degree == 2 and r.vertex_degrees == {"p0": 1, "p1": 2, "p2": 1}

    def test_identity(self, seg4):
        assert validate_morphism(identity_morphism(seg4)).degree == 1

    @pytest.mark.parametrize("name,deg", [("stretch", 2), ("double", 2), ("id-theta", 1)])
    def test_degrees(self, name, deg):
        assert validate_morphism(MORPHISMS[name]()).degree == deg

    def test_scaling_violation(self):
        m = fold_example()
        src = TropicalCurve(["p0", "p1", "p2"], [("e1", ("p0", "p1"), 1), ("e2", ("p1", "p2"), 3)])
        bad = FiniteHarmonicMorphism(src, m.target, m.vertex_map, m.edge_map, m.deg)
        with pytest.raises(ConditionViolated) as ei:
            validate_morphism(bad)
        assert ei.value.condition == 3

    def test_vertex_map_violation(self):
        m = fold_example()
        bad = FiniteHarmonicMorphism(m.source, m.target, {"p0": "q0", "p1": "zz", "p2": "q0"},
                                     m.edge_map, m.deg)
        with pytest.raises(ConditionViolated) as ei:
            validate_morphism(bad)
        assert ei.value.condition == 1

    def test_harmonicity_violation(self):
        s = TropicalCurve(["p0", "p1", "p2"], [("e1", ("p0", "p1"), 1), ("e2", ("p1", "p2"), 1)])
        t = TropicalCurve(["q0", "q1", "q2"], [("d", ("q0", "q1"), 1), ("d2", ("q1", "q2"), 1)])
        onto = FiniteHarmonicMorphism(s, t, {"p0": "q0", "p1": "q1", "p2": "q2"},
                                      {"e1": "d", "e2": "d2"}, {"e1": 1, "e2": 1})
        assert validate_morphism(onto).degree == 1
        # a third target edge at q1 has nothing over it
        t3 = TropicalCurve(["q0", "q1", "q2", "q3"], [("d", ("q0", "q1"), 1), ("d2", ("q1", "q2"), 1),
                                                      ("d3", ("q1", "q3"), 1)])
        m = FiniteHarmonicMorphism(s, t3, onto.vertex_map, onto.edge_map, onto.deg)
        with pytest.raises(ConditionViolated) as ei:
            validate_morphism(m)
        assert ei.value.condition == 4

    def test_loops_need_a_model(self, loop4):
        with pytest.raises(ConditionViolated) as ei:
            validate_morphism(identity_morphism(loop4))
        assert ei.value.condition == 2
        assert validate_morphism(identity_morphism(loopless_model(loop4))).degree == 1

    def test_points(self):
        p = TropicalCurve(["o"], [])
        m = FiniteHarmonicMorphism(p, p, {"o": "o"}, {}, {}, declared_degree=5)
        assert validate_morphism(m).degree == 5

    @pytest.mark.parametrize("name", list(MORPHISMS))
    def test_refinement_is_stable(self, name):
        m = MORPHISMS[name]()
        base = validate_morphism(m).degree
        tid = sorted(m.target.edges)[0]
        r = refine_morphism(m, tid, m.target.length(tid) / 3)
        assert validate_morphism(r).degree == base


class TestPullback:
    def test_constant(self):
        m = fold_example()
        assert pl_equal(pullback(m, RationalFunction.constant(m.target, 3)),
                        RationalFunction.constant(m.source, 3))

    def test_ramp_becomes_tent(self):
        m = fold_example()
        ramp = RationalFunction(m.target, {"d": PL.linear(1, 0, 1)})
        f = pullback(m, ramp)
        assert evaluate(f, m.source.point(vertex="p1")) == 1
        assert evaluate(f, m.source.point(vertex="p0")) == 0
        assert evaluate(f, m.source.point(vertex="p2")) == 0

    def test_composition(self):
        m = stretch()
        rng = sampling.make_rng(51)
        f = sampling.random_function(m.target, rng)
        g = pullback(m, f)
        for p in sample_points(m.source, 6):
            assert evaluate(g, p) == evaluate(f, m.image(p))

    @pytest.mark.parametrize("name", list(MORPHISMS))
    def test_homomorphism_and_slopes(self, name):
        m = MORPHISMS[name]()
        rng = sampling.make_rng(52)
        for _ in range(10):
            f = sampling.random_function(m.target, rng, depth=3)
            g = sampling.random_function(m.target, rng, depth=3)
            pf, pg = pullback(m, f), pullback(m, g)
            assert pl_equal(pullback(m, trop_add(f, g)), trop_add(pf, pg))
            assert pl_equal(pullback(m, trop_mul(f, g)), trop_mul(pf, pg))
            for eid, piece in pf.pieces.items():
                assert all(s % m.deg[eid] == 0 for s in piece.slopes())


class TestIngredients:
    def test_f_edge_on_seg4(self, seg4):
        f = f_edge(seg4, "e")
        assert evaluate(f, seg4.point("e", 2)) == -2

    @pytest.mark.parametrize("name", ["fold", "double", "id-theta", "id-seg4"])
    def test_g_unique_minimum(self, name):
        m = MORPHISMS[name]()
        ing = morphism_ingredients(m)
        for (v, eid), g in ing.G.items():
            L = m.source.length(eid)
            assert g.vertex_value(v) == -L / 2
            assert g_unique_minimum(m.source, g, v)
            assert ing.K[(v, eid)] >= 1

    def test_infinite_f_edge(self, seg4_inf):
        f = f_edge(seg4_inf, "r")
        assert evaluate(f, seg4_inf.point(vertex="v")) == 0
        assert evaluate(f, seg4_inf.point("r", 5)) == -5

    def test_segment_identity(self, seg4_inf):
        assert segment_identity(seg4_inf, "r", 1, 3).equal
        assert segment_identity(seg4_inf, "r", 0, Q(1, 2)).equal


class TestMidpointIdentity:
    @pytest.mark.parametrize("eid", ["e1", "e2"])
    def test_fold(self, eid):
        assert check_midpoint_identity(fold_example(), eid)

    def test_identity(self, seg4):
        assert check_midpoint_identity(identity_morphism(seg4), "e")

    @pytest.mark.parametrize("name", ["stretch", "double"])
    def test_other_morphisms(self, name):
        m = MORPHISMS[name]()
        for eid in m.source.edges:
            assert check_midpoint_identity(m, eid)


class TestWitness:
    def test_zero_candidate(self):
        m = fold_example()
        w = module_witness(m, [RationalFunction.constant(m.source, 0)], m.target.point("d", Q(1, 2)))
        assert (w.a, w.b) == (1, 2)
        assert evaluate(w.function, w.x1) == 1 and evaluate(w.function, w.x2) == 2
        assert w.p * w.eps > w.a and w.q * w.eps > w.b

    def test_symmetric_candidates(self):
        m = fold_example()
        cands = [pullback(m, cf_point(m.target, m.target.point("d", Q(1, 3)), 1))]
        xp = m.target.point("d", Q(1, 2))
        w = module_witness(m, cands, xp)
        assert w.forbidden == [w.a] and w.b != w.a

    def test_empty(self):
        m = fold_example()
        w = module_witness(m, [], m.target.point("d", Q(1, 4)))
        assert w.forbidden == []
        assert evaluate(w.function, w.x1) == w.a and evaluate(w.function, w.x2) == w.b

    def test_avoids_every_candidate(self):
        m = fold_example()
        rng = sampling.make_rng(53)
        cands = [sampling.random_function(m.source, rng) for _ in range(5)]
        w = module_witness(m, cands, m.target.point("d", Q(1, 2)))
        for f in cands:
            assert w.b - w.a != evaluate(f, w.x2) - evaluate(f, w.x1)
        assert evaluate(w.function, w.x1) == w.a and evaluate(w.function, w.x2) == w.b

    def test_preimage_count(self):
        m = fold_example()
        with pytest.raises(PreimageCountMismatch):
            module_witness(m, [], m.target.point(vertex="q1"))
