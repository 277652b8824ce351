"""Seeded random curves, points, subgraphs, expressions and functions."""

from __future__ import annotations

import os
import random

from .expression import Const, Gen, Max, Neg, Plus, Scale, eval_expr, generators
from .extended import Q
from .functions import RationalFunction
from .graph import Point, Subgraph, TropicalCurve


def seed() -> int:
    return int(os.environ.get("TROPCURVE_SEED", "0"))


def make_rng(offset: int = 0) -> random.Random:
    return random.Random(seed() * 1000003 + offset)


def rational(rng: random.Random, lo, hi, den: int = 12) -> Q:
    """A random rational in the open interval (lo, hi) with small denominator."""
    lo, hi = Q(lo), Q(hi)
    k = rng.randint(1, den - 1)
    return lo + (hi - lo) * Q(k, den)


def interior_point(curve: TropicalCurve, rng: random.Random, finite_only: bool = True) -> Point:
    edges = [e for e in curve.edges.values() if not (finite_only and e.infinite)]
    e = rng.choice(edges)
    L = e.length if not e.infinite else Q(rng.randint(1, 6))
    return curve.point(e.id, rational(rng, 0, L))


def any_point(curve: TropicalCurve, rng: random.Random) -> Point:
    if rng.random() < 0.2:
        v = rng.choice([v for v in curve.vertices if v not in curve.infinite_vertices])
        return curve.vertex_point(v)
    return interior_point(curve, rng, finite_only=False)


def _piece(curve, rng):
    """A point, a vertex, or a closed interval inside one edge."""
    roll = rng.random()
    if roll < 0.2:
        v = rng.choice([v for v in curve.vertices if v not in curve.infinite_vertices])
        return curve.subgraph((), [v])
    e = rng.choice([e for e in curve.edges.values() if not e.infinite] or list(curve.edges.values()))
    L = e.length if not e.infinite else Q(4)
    a = rational(rng, 0, L)
    if roll < 0.5:
        return curve.subgraph([(e.id, a, a)])
    b = rational(rng, a, L) if rng.random() < 0.8 else L
    return curve.subgraph([(e.id, a, b)])


def proper_subgraph(curve: TropicalCurve, rng: random.Random, max_components: int = 3,
                    tries: int = 200) -> Subgraph:
    """A random admissible proper subgraph with 1 to ``max_components`` components."""
    for _ in range(tries):
        want = rng.randint(1, max_components)
        s = curve.union(*[_piece(curve, rng) for _ in range(want)])
        if curve.is_whole(s) or not curve.admissible(s):
            continue
        return s
    raise RuntimeError("could not sample a proper subgraph")


def connected_subgraph(curve: TropicalCurve, rng: random.Random, tries: int = 200) -> Subgraph:
    for _ in range(tries):
        s = _piece(curve, rng)
        if not curve.is_whole(s) and curve.admissible(s):
            return s
    raise RuntimeError("could not sample a connected subgraph")


def random_expr(symbols, rng: random.Random, depth: int = 4):
    """Random expression tree over ``symbols`` with exponents in {-2..2}."""
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.25 or not symbols:
            return Const(Q(rng.randint(-8, 8), rng.choice([1, 2, 3, 4])))
        return Gen(rng.choice(symbols))
    op = rng.choice(["max", "max", "plus", "plus", "neg", "scale"])
    if op == "neg":
        return Neg(random_expr(symbols, rng, depth - 1))
    if op == "scale":
        return Scale(random_expr(symbols, rng, depth - 1), rng.choice([-2, 2]))
    kids = [random_expr(symbols, rng, depth - 1) for _ in range(rng.randint(2, 3))]
    return Max(kids) if op == "max" else Plus(kids)


def random_function(curve: TropicalCurve, rng: random.Random, depth: int = 4) -> RationalFunction:
    gens = generators(curve)
    return eval_expr(random_expr(gens.symbols(), rng, depth), gens)


def random_tree(rng: random.Random, max_leaves: int = 12) -> TropicalCurve:
    """A random metric tree with between 2 and ``max_leaves`` leaves."""
    target = rng.randint(2, max_leaves)
    verts = ["n0", "n1"]
    edges = [("t0", ("n0", "n1"), rational(rng, 0, 3, 4))]
    degree = {"n0": 1, "n1": 1}

    def leaves():
        return sum(1 for d in degree.values() if d == 1)

    while leaves() < target:
        parent = rng.choice(verts)
        child = f"n{len(verts)}"
        edges.append((f"t{len(edges)}", (parent, child), rational(rng, 0, 3, 4)))
        verts.append(child)
        degree[child] = 1
        degree[parent] += 1
    return TropicalCurve(verts, edges)
