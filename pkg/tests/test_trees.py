import pytest

from tropcurve import corpus, sampling
from tropcurve.errors import NotATree
from tropcurve.functions import evaluate, outgoing_slope_sum
from tropcurve.graph import canonical_model
from tropcurve.trees import count_bound, tree_generators, tree_pairing, tree_path


def leaf_ends(tree):
    return {v for v in tree.vertices if tree.degree(v) == 1}


def check_pairing(curve):
    pr = tree_pairing(curve)
    tree = pr.curve
    rest = pr.uncovered()
    assert rest <= ({pr.leftover_edge} if pr.leftover_edge else set())
    used = [v for p in pr.pairs for v in p] + ([pr.leftover] if pr.leftover else [])
    assert sorted(used) == sorted(leaf_ends(tree))
    for p, path in pr.paths.items():
        assert path == tree_path(tree, *p)
    return pr


def check_generators(curve):
    gens = tree_generators(curve)
    assert len(gens) <= count_bound(curve)
    tree = canonical_model(curve).curve
    assert count_bound(curve) == (len(leaf_ends(tree)) + 1) // 2
    pr = tree_pairing(curve)
    ends = [set(p) for p in pr.pairs]
    if pr.leftover:
        e0 = pr.curve.edges[pr.leftover_edge]
        ends.append({e0.u, e0.v})
    assert len(ends) == len(gens)
    for f, f_ends in zip(gens, ends):
        for p in f.pieces.values():
            # slopes are read along each edge's orientation, so a path may run backward
            slopes = p.slopes() + ([p.tail] if p.infinite else [])
            assert {abs(x) for x in slopes} <= {0, 1}
        for v in curve.finite_vertices:
            if v in f_ends or curve.degree(v) == 1:
                continue
            if v in tree.vertices:
                assert outgoing_slope_sum(f, curve.point(vertex=v)) == 0
    return gens


class TestPairing:
    def test_segment(self, seg4):
        pr = check_pairing(seg4)
        assert pr.pairs == [("u", "v")] and pr.leftover is None and not pr.uncovered()

    def test_star3(self):
        pr = check_pairing(corpus.star3())
        assert len(pr.pairs) == 1 and pr.leftover == "l3" and pr.leftover_edge == "e3"

    def test_star4(self):
        pr = check_pairing(corpus.star4())
        assert len(pr.pairs) == 2 and not pr.uncovered()

    def test_improvement_loop_runs(self):
        # consecutive pairing of l1..l4 first yields (l1,l2),(l3,l4), which already covers;
        # a caterpillar forces a re-pairing round
        from tropcurve.graph import TropicalCurve
        c = TropicalCurve(["a", "b", "x", "y", "c", "d"],
                          [("t1", ("a", "x"), 1), ("t2", ("b", "x"), 1), ("t3", ("x", "y"), 1),
                           ("t4", ("c", "y"), 1), ("t5", ("d", "y"), 1)])
        pr = check_pairing(c)
        assert pr.rounds == ["t3"]
        assert not pr.uncovered()

    def test_infinite_leg(self):
        check_pairing(corpus.infseg())
        check_pairing(corpus.seg4_infseg())

    def test_not_a_tree(self, loop4, theta):
        for c in (loop4, theta):
            with pytest.raises(NotATree):
                tree_pairing(c)


class TestGenerators:
    def test_segment_ramp(self, seg4):
        (f,) = check_generators(seg4)
        assert evaluate(f, seg4.point(vertex="u")) == 0
        assert evaluate(f, seg4.point(vertex="v")) == 4

    def test_star3(self):
        assert len(check_generators(corpus.star3())) == 2

    def test_star4(self):
        assert len(check_generators(corpus.star4())) == 2

    def test_infinite(self):
        check_generators(corpus.infseg())
        check_generators(corpus.seg4_infseg())

    def test_random_trees(self):
        rng = sampling.make_rng(41)
        for _ in range(30):
            t = sampling.random_tree(rng)
            check_pairing(t)
            check_generators(t)
