"""Finite harmonic morphisms: validation, pull-back, ingredient functions, witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import ConditionViolated, PreimageCountMismatch
from .extended import INF, Q, ceil_div, is_inf, to_value
from .functions import (RationalFunction, cf, cf_point, compare, trop_add, trop_mul,
                        trop_pow, trop_prod)
from .graph import Edge, Point, TropicalCurve
from .piecewise import PL


@dataclass
class FiniteHarmonicMorphism:
    source: TropicalCurve
    target: TropicalCurve
    vertex_map: dict
    edge_map: dict
    deg: dict
    declared_degree: Optional[int] = None   # only used for a point mapping to a point

    def forward(self, eid: str) -> bool:
        """Whether edge ``eid`` runs in the same direction as its image."""
        e = self.source.edges[eid]
        t = self.target.edges[self.edge_map[eid]]
        return self.vertex_map[e.u] == t.u

    def image(self, p: Point) -> Point:
        if p.vertex is not None:
            return self.target.point(vertex=self.vertex_map[p.vertex])
        t = self.target.edges[self.edge_map[p.edge]]
        s = self.deg[p.edge] * p.offset
        if not self.forward(p.edge):
            s = t.length - s
        return self.target.point(t.id, s)

    def preimages(self, p: Point) -> list:
        if p.vertex is not None:
            return sorted((self.source.point(vertex=v) for v, w in self.vertex_map.items()
                           if w == p.vertex), key=Point.sort_key)
        out = []
        for eid, tid in sorted(self.edge_map.items()):
            if tid != p.edge:
                continue
            t = self.target.edges[tid]
            s = p.offset if self.forward(eid) else t.length - p.offset
            out.append(self.source.point(eid, s / self.deg[eid]))
        return out


@dataclass
class DegreeReport:
    vertex_degrees: dict
    edge_degrees: dict
    degree: int


def validate_morphism(m: FiniteHarmonicMorphism) -> DegreeReport:
    src, tgt = m.source, m.target
    # (1) vertices go to vertices
    for v in src.vertices:
        if v not in m.vertex_map:
            raise ConditionViolated(1, v, "vertex has no image")
        if m.vertex_map[v] not in tgt.incidence:
            raise ConditionViolated(1, v, f"image {m.vertex_map[v]} is not a vertex")
    # loopless models are required
    for curve, name in ((src, "source"), (tgt, "target")):
        for e in curve.edges.values():
            if e.is_loop:
                raise ConditionViolated(2, e.id, f"{name} model has a loop; use loopless_model first")
    # (2) edges go to edges with matching ends
    for eid, e in src.edges.items():
        if eid not in m.edge_map or m.edge_map[eid] not in tgt.edges:
            raise ConditionViolated(2, eid, "edge has no image edge")
        t = tgt.edges[m.edge_map[eid]]
        ends = {m.vertex_map[e.u], m.vertex_map[e.v]}
        if ends != {t.u, t.v}:
            raise ConditionViolated(2, eid, f"ends map to {sorted(ends)}, not to the ends of {t.id}")
        k = m.deg.get(eid)
        if not isinstance(k, int) or k < 1:
            raise ConditionViolated(3, eid, f"degree {k!r} is not a positive integer")
    # (3) metric scaling
    for eid, e in src.edges.items():
        t = tgt.edges[m.edge_map[eid]]
        if e.infinite != t.infinite:
            raise ConditionViolated(3, eid, "finite and infinite edges are mixed")
        if not e.infinite and t.length != m.deg[eid] * e.length:
            raise ConditionViolated(
                3, eid, f"image length {t.length} != {m.deg[eid]} * {e.length}")
    # (4) harmonicity
    vdeg = {}
    for v in src.vertices:
        w = m.vertex_map[v]
        sums = {tid: 0 for tid, _ in tgt.incidence[w]}
        for eid, _ in src.incidence[v]:
            sums[m.edge_map[eid]] += m.deg[eid]
        values = set(sums.values())
        if len(values) > 1:
            raise ConditionViolated(4, v, f"local degrees differ across target edges: {sums}")
        if values:
            vdeg[v] = values.pop()
        else:
            vdeg[v] = m.declared_degree if m.declared_degree is not None else 1
    totals = {w: 0 for w in tgt.vertices}
    for v, k in vdeg.items():
        totals[m.vertex_map[v]] += k
    if len(set(totals.values())) > 1:
        raise ConditionViolated(4, "global", f"preimage degree sums differ: {totals}")
    return DegreeReport(vdeg, dict(m.deg), next(iter(totals.values())))


# pull-back ------------------------------------------------------------------------

def _pull_piece(piece: PL, k: int, forward: bool) -> PL:
    if not forward:
        piece = piece.reversed()
    return piece.stretch(Q(1, k))


def pullback(m: FiniteHarmonicMorphism, fp: RationalFunction) -> RationalFunction:
    if fp.is_neg_inf:
        return RationalFunction.neg_inf(m.source)
    if not m.target.edges:
        return RationalFunction.constant(m.source, fp.const)
    pieces = {eid: _pull_piece(fp.pieces[m.edge_map[eid]], m.deg[eid], m.forward(eid))
              for eid in m.source.edges}
    if not m.source.edges:
        v = m.source.vertices[0]
        return RationalFunction.constant(m.source, fp.vertex_value(m.vertex_map[v]))
    return RationalFunction(m.source, pieces)


# ingredient functions ---------------------------------------------------------------

def complement_of_interior(curve: TropicalCurve, eid: str):
    """``Γ \\ e°`` for a finite edge, the closure of ``Γ \\ e`` for an infinite one."""
    e = curve.edges[eid]
    ivs = [(f, 0, g.length) for f, g in curve.edges.items() if f != eid]
    verts = [v for v in curve.vertices if v not in curve.infinite_vertices]
    if not e.infinite:
        verts = sorted(set(verts) | {e.u, e.v})
    return curve.subgraph(ivs, verts)


def f_edge(curve: TropicalCurve, eid: str) -> RationalFunction:
    e = curve.edges[eid]
    s = complement_of_interior(curve, eid)
    return cf(curve, s, INF if e.infinite else e.length / 2)


def steep_slope(curve: TropicalCurve, v: str, eid: str) -> int:
    """``K = 1 + ceil(l(e) / (2 * shortest other finite edge at v))``."""
    others = [curve.edges[f].length for f, _ in curve.incidence[v]
              if f != eid and not curve.edges[f].infinite]
    if not others:
        return 1
    return 1 + int(ceil_div(curve.edges[eid].length, 2 * min(others)))


def g_vertex_edge(curve: TropicalCurve, v: str, eid: str, K: Optional[int] = None):
    """Slope 1 from ``v`` to the midpoint of ``eid``, slope ``K`` on the other edges at ``v``.

    Returns ``(function, K)``.  The minimum ``-l(e)/2`` is attained only at ``v``.
    """
    e = curve.edges[eid]
    if e.infinite:
        raise ValueError("G is only defined for finite edges")
    if K is None:
        K = steep_slope(curve, v, eid)
    half = e.length / 2
    pieces = {}
    for fid, f in curve.edges.items():
        ends = [end for g, end in curve.incidence[v] if g == fid]
        if fid == eid:
            ramp = PL.from_points(f.length, [(0, -half), (half, 0), (f.length, 0)])
            pieces[fid] = ramp if ends == [0] else ramp.reversed()
        elif ends:
            r = half / K
            if f.infinite:
                pieces[fid] = PL.from_points(INF, [(0, -half), (r, 0)], 0)
            else:
                ramp = PL.from_points(f.length, [(0, -half), (r, 0), (f.length, 0)])
                pieces[fid] = ramp if ends == [0] else ramp.reversed()
        else:
            pieces[fid] = PL.constant(f.length, Q(0))
    return RationalFunction(curve, pieces), K


def segment_function(curve: TropicalCurve, eid: str, x, y) -> RationalFunction:
    """On an infinite edge: 0 up to ``x``, slope 1 from ``x`` to ``y``, then constant."""
    e = curve.edges[eid]
    if not e.infinite:
        raise ValueError("segment functions live on infinite edges")
    x = to_value(x)
    y = to_value(y)
    pieces = {f: PL.constant(g.length, Q(0)) for f, g in curve.edges.items()}
    if is_inf(y):
        pieces[eid] = PL.from_points(INF, [(0, 0), (x, 0)], 1)
    else:
        pieces[eid] = PL.from_points(INF, [(0, 0), (x, 0), (y, y - x)], 0)
    return RationalFunction(curve, pieces)


@dataclass
class MorphismIngredients:
    F: dict                     # edge -> F_e
    G: dict                     # (vertex, edge) -> G_{v,e}
    K: dict                     # (vertex, edge) -> steep slope used
    segments: dict = field(default_factory=dict)   # infinite edge -> g_{[v, y]}


def morphism_ingredients(m: FiniteHarmonicMorphism, y=1) -> MorphismIngredients:
    validate_morphism(m)
    c = m.source
    F = {eid: f_edge(c, eid) for eid in c.edges}
    G, K = {}, {}
    segs = {}
    for eid, e in c.edges.items():
        if e.infinite:
            segs[eid] = segment_function(c, eid, 0, y)
            continue
        for v in sorted({e.u, e.v}):
            G[(v, eid)], K[(v, eid)] = g_vertex_edge(c, v, eid)
    return MorphismIngredients(F, G, K, segs)


def g_unique_minimum(curve: TropicalCurve, g: RationalFunction, v: str) -> bool:
    """Whether ``g`` attains its minimum only at vertex ``v``.

    A piecewise-linear minimum is reached at a breakpoint, so it suffices that
    every breakpoint away from ``v`` lies strictly above ``g(v)``.
    """
    low = g.vertex_value(v)
    for eid, piece in g.pieces.items():
        e = curve.edges[eid]
        for x, y in zip(piece.xs, piece.ys):
            at_v = (x == 0 and e.u == v) or (x == e.length and e.v == v)
            if y < low or (y == low and not at_v):
                return False
        if piece.infinite and piece.tail < 0:
            return False
    return True


def segment_identity(curve: TropicalCurve, eid: str, x, y):
    """``g_[x,y]^-1 = g_[x,w]^-1 ⊕ (-(y - x))`` with ``w`` the point at infinity."""
    x, y = Q(to_value(x)), Q(to_value(y))
    lhs = segment_function(curve, eid, x, y).__invert__()
    rhs = trop_add(segment_function(curve, eid, x, INF).__invert__(),
                   RationalFunction.constant(curve, -(y - x)))
    return compare(lhs, rhs)


def midpoint_identity_sides(m: FiniteHarmonicMorphism, eid: str):
    """Both sides of the identity for ``x`` the midpoint of a finite edge.

    ``l_x`` is ``l(e)/2``; ``l_{φ(x)}`` is the distance from ``φ(x)`` to the ends
    of ``φ(e)``, which is ``deg_e * l(e) / 2``.
    """
    c = m.source
    e = c.edges[eid]
    lx = e.length / 2
    k = m.deg[eid]
    x = c.point(eid, lx)
    px = m.image(x)
    lhs = trop_mul(cf_point(c, x, lx), RationalFunction.constant(c, -(k - 1) * lx))
    factors = [pullback(m, cf_point(m.target, px, k * lx))]
    if k > 1:
        factors.append(trop_pow(f_edge(c, eid), k - 1))
    for e1 in sorted(c.edges):
        if e1 != eid and m.edge_map[e1] == m.edge_map[eid]:
            factors.append(trop_pow(f_edge(c, e1), m.deg[e1]))
    return lhs, trop_prod(factors)


def check_midpoint_identity(m: FiniteHarmonicMorphism, eid: str) -> bool:
    validate_morphism(m)
    lhs, rhs = midpoint_identity_sides(m, eid)
    return compare(lhs, rhs).equal


# the module witness -------------------------------------------------------------------

@dataclass
class ModuleWitness:
    a: Q
    b: Q
    x1: Point
    x2: Point
    forbidden: list
    function: RationalFunction
    eps: Q
    p: int
    q: int


def module_witness(m: FiniteHarmonicMorphism, candidates, xp: Point) -> ModuleWitness:
    """Values ``(a, b)`` at the two preimages of ``xp`` that no ``φ*(f') ⊙ f_j`` reaches."""
    pre = m.preimages(xp)
    if len(pre) != 2:
        raise PreimageCountMismatch(f"{xp} has {len(pre)} preimages, expected 2")
    x1, x2 = pre
    a = Q(1)
    forbidden = sorted({a - f(x1) + f(x2) for f in candidates})
    b = Q(1)
    while b in forbidden:
        b += 1
    c = m.source
    eps = c.dist(x1, x2) / 2
    p = int(a // eps) + 1
    q = int(b // eps) + 1
    zero = RationalFunction.constant(c, 0)
    left = trop_add(trop_mul(trop_pow(cf_point(c, x1, eps), p), RationalFunction.constant(c, a)), zero)
    right = trop_add(trop_mul(trop_pow(cf_point(c, x2, eps), q), RationalFunction.constant(c, b)), zero)
    return ModuleWitness(a, b, x1, x2, forbidden, trop_mul(left, right), eps, p, q)


# models -------------------------------------------------------------------------------

def loopless_model(curve: TropicalCurve) -> TropicalCurve:
    """Subdivide every loop at its midpoint; new vertices are named ``<edge>#m``."""
    verts = list(curve.vertices)
    edges = []
    for eid, e in curve.edges.items():
        if e.is_loop:
            mid = f"{eid}#m"
            verts.append(mid)
            edges.append((f"{eid}#1", (e.u, mid), e.length / 2))
            edges.append((f"{eid}#2", (mid, e.v), e.length / 2))
        else:
            edges.append(e)
    return TropicalCurve(verts, edges)


def subdivide_edge(curve: TropicalCurve, eid: str, t, name: str) -> TropicalCurve:
    """Insert a valence-2 vertex ``name`` at offset ``t`` of edge ``eid``."""
    e = curve.edges[eid]
    t = Q(to_value(t))
    rest = INF if e.infinite else e.length - t
    edges = [f for f in curve.edges.values() if f.id != eid]
    edges += [Edge(f"{eid}#1", e.u, name, t), Edge(f"{eid}#2", name, e.v, rest)]
    return TropicalCurve(list(curve.vertices) + [name], edges)


def refine_morphism(m: FiniteHarmonicMorphism, tid: str, t) -> FiniteHarmonicMorphism:
    """Subdivide target edge ``tid`` at offset ``t`` and every preimage edge to match."""
    t = Q(to_value(t))
    name = f"{tid}#m"
    target = subdivide_edge(m.target, tid, t, name)
    source = m.source
    vmap, emap, deg = dict(m.vertex_map), dict(m.edge_map), dict(m.deg)
    for eid in sorted(e for e, img in m.edge_map.items() if img == tid):
        k = m.deg[eid]
        fwd = m.forward(eid)
        s = t / k if fwd else (m.target.edges[tid].length - t) / k
        new = f"{eid}#m"
        source = subdivide_edge(source, eid, s, new)
        vmap[new] = name
        del emap[eid], deg[eid]
        first, second = (f"{tid}#1", f"{tid}#2") if fwd else (f"{tid}#2", f"{tid}#1")
        emap[f"{eid}#1"], emap[f"{eid}#2"] = first, second
        deg[f"{eid}#1"] = deg[f"{eid}#2"] = k
    return FiniteHarmonicMorphism(source, target, vmap, emap, deg, m.declared_degree)


# example fold ---------------------------------------------------------------------------

def fold_example():
    """``[0,2] -> [0,1]`` folding at 1: degree two, each edge of degree one."""
    src = TropicalCurve(["p0", "p1", "p2"], [("e1", ("p0", "p1"), 1), ("e2", ("p1", "p2"), 1)])
    tgt = TropicalCurve(["q0", "q1"], [("d", ("q0", "q1"), 1)])
    return FiniteHarmonicMorphism(src, tgt, {"p0": "q0", "p1": "q1", "p2": "q0"},
                                  {"e1": "d", "e2": "d"}, {"e1": 1, "e2": 1})


def identity_morphism(curve: TropicalCurve) -> FiniteHarmonicMorphism:
    return FiniteHarmonicMorphism(curve, curve, {v: v for v in curve.vertices},
                                  {e: e for e in curve.edges}, {e: 1 for e in curve.edges})
