"""Rewriting chip-firing moves and rational functions as expressions over the generator set.

Everything is computed on the metric graph ``Γ'`` of the canonical model
(equal to the canonical curve when there are no ∞ edges).  Expressions are
evaluated on the canonical curve, where a ``Γ'`` function means its constant
extension along the ∞ legs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import (InvalidCurve, IterationBudgetExceeded, NotConnected, NotProper,
                     StepTooLarge, SynthesisError)
from .expression import (Const, Gen, GeneratorSet, Max, Neg, Plus, Scale,
                         generators, tagged)
from .extended import INF, NEG_INF, Q, to_value
from .functions import (RationalFunction, cf, evaluate, restrict, to_canonical,
                        trop_add, trop_inv, trop_mul, trop_pow)
from .graph import Point, Subgraph, TropicalCurve

MAX_DEPTH = 40


def _c(x) -> Const:
    return Const(to_value(x))


def _cut(expr, l):
    """``expr ⊕ (-l)``; cutting at ∞ is the identity and is skipped."""
    if l == INF:
        return expr
    return Max((expr, _c(-l)), "cut at the requested radius")


# -------------------------------------------------------------------------------------
# the extension range l_S
# -------------------------------------------------------------------------------------

def ls_value(curve: TropicalCurve, s: Subgraph) -> Q:
    """The extension range ``l_S`` for a connected proper subgraph of a metric graph."""
    if not curve.is_metric:
        raise InvalidCurve("the extension range needs a metric graph")
    return _edge_range(curve, s)


def _edge_range(curve: TropicalCurve, s: Subgraph):
    """The per-edge minimum behind ``l_S``; ``inf`` is possible when ∞ edges are present."""
    if curve.is_whole(s):
        raise NotProper("the subgraph is the whole curve")
    if not curve.is_connected(s):
        raise NotConnected("the subgraph is not connected")
    key = ("ls", s)
    if key in curve._cache:
        return curve._cache[key]
    diam = curve.diameter()
    best = diam
    for eid in sorted(curve.edges):
        e = curve.edges[eid]
        L = e.length
        ivs = curve.edge_intervals(s, eid)
        if not ivs:
            li = diam
        elif ivs == [(0, L)]:
            li = diam
        elif e.u in s.vertices and e.v in s.vertices:
            li = (L - curve.measure_on_edge(s, eid)) / 2
        elif e.u not in s.vertices and e.v not in s.vertices:
            li = min(curve.dist_subgraph(s, curve.point(vertex=e.u)),
                     curve.dist_subgraph(s, curve.point(vertex=e.v)))
        else:
            li = L - curve.measure_on_edge(s, eid)
        best = min(best, li)
    curve._cache[key] = best
    return best


def extension_range(curve: TropicalCurve, s: Subgraph) -> Q:
    """``l_S`` for a subgraph given on any model; computed on the canonical model."""
    gens = generators(curve)
    return ls_value(gens.work, gens.canon.to_canonical_subgraph(s))


def local_radius(curve: TropicalCurve, p: Point) -> Q:
    """``l_x``: the distance from an interior point to the nearer end of its edge."""
    L = curve.length(p.edge)
    return min(p.offset, L - p.offset)


# -------------------------------------------------------------------------------------
# the extension step and its identities
# -------------------------------------------------------------------------------------

@dataclass
class ExtensionStep:
    s1: Subgraph
    l: Q
    s2: Subgraph
    a: int
    m: int
    l_s2: Q
    identities: list = field(default_factory=list)   # (name, lhs, rhs) on the canonical curve

    @property
    def delta(self) -> Q:
        return self.l_s2 / self.m


def step_indices(l: Q, l_s2: Q) -> tuple:
    a = math.ceil(Q(l) / l_s2)
    m = math.ceil(l_s2 * a / Q(l))
    return a, m


def _tents_rf(curve, centres, r):
    out = RationalFunction.constant(curve, 0)
    for p in centres:
        out = trop_mul(out, trop_mul(cf(curve, curve.point_subgraph(p), r),
                                     RationalFunction.constant(curve, r)))
    return out


def extension_step_work(w: TropicalCurve, s1: Subgraph, l, l_prime=None) -> ExtensionStep:
    """One extension from ``(S₁, l)`` on a metric graph, with the four identities checked as pairs."""
    l = to_value(l)
    ls1 = ls_value(w, s1)
    if l > ls1:
        raise StepTooLarge(f"step {l} exceeds the extension range {ls1}")
    s2 = w.neighborhood(s1, l)
    if w.is_whole(s2):
        raise NotProper("the step already covers the whole curve")
    l_s2 = ls_value(w, s2)
    a, m = step_indices(l, l_s2)
    r, d = l / a, l_s2 / m
    st = ExtensionStep(s1, l, s2, a, m, l_s2)
    grow_rhs = cf(w, s1, r)
    for k in range(1, a + 1):
        grow_rhs = trop_mul(grow_rhs, _tents_rf(w, w.level_set(s1, k * r), r))
    st.identities.append(("grow by layers", cf(w, s2, r), grow_rhs))
    layers = [w.neighborhood(s2, k * d) if k else s2 for k in range(m)]
    for k in range(1, m):
        rhs = trop_mul(cf(w, layers[k - 1], d), _tents_rf(w, w.level_set(s2, k * d), d))
        st.identities.append((f"layer {k}", cf(w, layers[k], d), rhs))
    rhs = trop_add(cf(w, s2, r), RationalFunction.constant(w, -d))
    for k in range(1, m):
        rhs = trop_mul(rhs, cf(w, layers[k], d))
    st.identities.append(("stack layers", cf(w, s2, l_s2), rhs))
    lp = l_s2 if l_prime is None else to_value(l_prime)
    st.identities.append(("extend", cf(w, s1, l + lp), trop_mul(cf(w, s1, l), cf(w, s2, lp))))
    return st


def extension_step(curve: TropicalCurve, s1: Subgraph, l, l_prime=None) -> ExtensionStep:
    gens = generators(curve)
    return extension_step_work(gens.work, gens.canon.to_canonical_subgraph(s1), l, l_prime)


# -------------------------------------------------------------------------------------
# the chip-firing identities of the introduction
# -------------------------------------------------------------------------------------

def example_identities(curve: TropicalCurve, s: Subgraph, l, l_prime, eps=None,
                       other: Optional[Subgraph] = None) -> list:
    """Cut-bottom, cut-top, extend, connect and disjoint-union as ``(name, lhs, rhs)``."""
    l, lp = to_value(l), to_value(l_prime)
    if not (0 < lp <= l):
        raise ValueError("need 0 < l' <= l")
    c = lambda x: RationalFunction.constant(curve, x)  # noqa: E731
    out = []
    base = cf(curve, s, l)
    out.append(("cut bottom", cf(curve, s, lp), trop_add(base, c(-lp))))
    s2 = curve.neighborhood(s, lp) if curve.is_metric or lp != INF else None
    if s2 is not None and not curve.is_whole(s2) and l != INF and lp < l:
        rhs = trop_mul(trop_inv(trop_add(trop_inv(base), c(lp))), c(lp))
        out.append(("cut top", cf(curve, s2, l - lp), rhs))
        out.append(("extend", base, trop_mul(cf(curve, s, lp), cf(curve, s2, l - lp))))
    conn = connect_instance(curve, s, eps)
    if conn is not None:
        out.append(conn)
    if other is not None:
        out.append(("disjoint union", cf(curve, curve.union(s, other), l),
                    trop_add(base, cf(curve, other, l))))
    return out


def connect_instance(curve: TropicalCurve, s: Subgraph, eps=None):
    """The connect identity at the first boundary direction of ``s``; ``None`` if ``s`` has none."""
    if not curve.is_connected(s) or curve.is_whole(s):
        return None
    if eps is None:
        ls = _edge_range(curve, s)
        # an unbounded range only happens along ∞ legs, where any width is safe
        eps = Q(1) if ls == INF else ls / 2
    eps = to_value(eps)
    for eid in sorted(curve.edges):
        e = curve.edges[eid]
        for a, b in curve.edge_intervals(s, eid):
            if b < e.length and not curve.contains(s, curve.point(eid, b + eps)) \
                    and b + eps < e.length:
                seg = (eid, b, b + eps)
                y = curve.point(eid, b + eps)
                break
            if a > 0 and a - eps > 0 and not curve.contains(s, curve.point(eid, a - eps)):
                seg = (eid, a - eps, a)
                y = curve.point(eid, a - eps)
                break
        else:
            continue
        grown = curve.union(s, curve.subgraph([seg]))
        rhs = trop_mul(trop_mul(cf(curve, s, eps), cf(curve, curve.point_subgraph(y), eps)),
                       RationalFunction.constant(curve, eps))
        return ("connect", cf(curve, grown, eps), rhs)
    return None


# -------------------------------------------------------------------------------------
# expression builders
# -------------------------------------------------------------------------------------

class Synthesizer:
    """Expression builders bound to one generator set."""

    def __init__(self, gens: GeneratorSet):
        self.gens = gens
        self.w = gens.work
        if not self.w.edges:
            self.w = None
        self.depth = 0
        self._local: dict = {}

    # generators ----------------------------------------------------------------

    def gen(self, sym: str) -> Gen:
        return Gen(sym)

    def vertex_move(self, v: str):
        """``CF({v}, ∞)`` on Γ'; on a curve with ∞ legs its constant extension."""
        if not self.gens.legs:
            return Gen(f"vinf@{v}")
        legs = tuple(Neg(Gen(f"linf@{i}")) for i in range(1, len(self.gens.legs) + 1))
        return Plus((Gen(f"vinf@{v}"),) + legs, "vertex move made constant on the infinite legs")

    # one point -----------------------------------------------------------------

    def local(self, x: Point):
        """``CF({x}, l_x)`` for ``x`` inside an edge, by the six-case closed forms."""
        key = (x.edge, x.offset)
        if key in self._local:
            return self._local[key]
        out = self._local_build(x)
        self._local[key] = out
        return out

    def closed_form(self, x: Point):
        """The displayed closed form at ``x`` and the radius it realises.

        The radius is ``l_x`` except near the midpoint, where the formula gives
        ``CF({x}, L - 2 l_x)``.
        """
        key = ("closed", x.edge, x.offset)
        if key in self._local:
            return self._local[key]
        eid, t = x.edge, x.offset
        L = self.w.length(eid)
        lx = min(t, L - t)
        f = Gen(f"f@{eid}")
        if t == L / 2:
            out = (f, L / 2)
        else:
            q = L / 4
            if evaluate(self.gens.bindings[f"g@{eid}"], x) == -q:
                k, side = Gen(f"g@{eid}"), "g side"
            elif evaluate(self.gens.bindings[f"h@{eid}"], x) == -q:
                k, side = Gen(f"h@{eid}"), "h side"
            else:
                raise SynthesisError(f"neither quarter move is at its floor at {x}")
            A = Max((Plus((_c(L / 2 - lx), f)), Plus((_c(lx - L / 2), Neg(f)))))
            if lx <= q:
                body = Plus((Neg(A), _c(-q), Neg(k)))
                out = (Max((body, _c(-lx)), f"one-point move, near-end case ({side})"), lx)
            elif lx <= L / 3:
                body = Plus((Neg(A), Scale(Plus((_c(-q), Neg(k))), 2)))
                out = (Max((body, _c(-lx)), f"one-point move, middle case ({side})"), lx)
            else:
                body = Plus((Neg(A), Scale(Plus((_c(-q), Neg(k))), 2)))
                out = (Max((body, _c(2 * lx - L)), f"one-point move, near-midpoint case ({side})"),
                       L - 2 * lx)
        self._local[key] = out
        return out

    def _local_build(self, x: Point):
        w = self.w
        L = w.length(x.edge)
        lx = local_radius(w, x)
        expr, radius = self.closed_form(x)
        if radius == lx:
            return expr
        # near the midpoint: extend the radius L - 2 l_x move out to l_x
        r = L / 2 - lx
        small = _cut(expr, r)
        sx = w.point_subgraph(x)
        s1 = w.neighborhood(sx, r)
        seg = Plus((small,) + tuple(self.tent(p, r) for p in w.level_set(sx, r)),
                   "segment around the point at the small radius")
        rest = self.grow(s1, seg, r, lx - r)
        return Plus((small, rest), "extend the point move out to its local radius")

    def tent(self, p: Point, r):
        """``CF({p}, r) ⊙ r``."""
        return Plus((self.point_small(p, r), _c(r)))

    def point_small(self, p: Point, r):
        """``CF({p}, r)`` using the cheapest available form."""
        key = ("point_small", p, to_value(r))
        if key not in self._local:
            self._local[key] = self._point_small(p, r)
        return self._local[key]

    def _point_small(self, p, r):
        if p.vertex is not None:
            return _cut(self.vertex_move(p.vertex), r)
        expr, radius = self.closed_form(p)
        if r == radius:
            return expr
        if r < radius:
            return _cut(expr, r)
        lx = local_radius(self.w, p)
        if r == lx:
            return self.local(p)
        if r < lx:
            return _cut(self.local(p), r)
        return self.point(p, r)

    def point(self, x: Point, l):
        """``CF({x}, l)``: grow the local move to the whole curve, then cut."""
        key = ("point", x, to_value(l))
        if key not in self._local:
            self._local[key] = self._point(x, l)
        return self._local[key]

    def _point(self, x, l):
        l = to_value(l)
        if x.vertex is not None:
            return _cut(self.vertex_move(x.vertex), l)
        self._enter()
        try:
            start = self.local(x)
            full = self.grow(self.w.point_subgraph(x), start, local_radius(self.w, x), None)
        finally:
            self.depth -= 1
        return tagged(_cut(full, l), "one-point move: grown to the diameter and cut")

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.depth = 0
            raise SynthesisError("expression builders recursed too deeply")

    # growing ------------------------------------------------------------------

    def grow(self, s: Subgraph, expr, rho, target):
        """From ``expr = CF(s, rho)`` with ``rho <= l_s``, build ``CF(s, target)``.

        ``target=None`` grows until the neighbourhood is the whole curve, giving
        ``CF(s, d)``; a finite target is reached and then cut.
        """
        w = self.w
        factors = [expr]
        total = rho
        prev_s, prev_l, prev_e = s, rho, expr
        while True:
            reach = w.neighborhood(s, total)
            if w.is_whole(reach):
                break
            if target is not None and target != INF and total >= target:
                break
            s2, l_s2, e2 = self.extend(prev_s, prev_l, prev_e)
            factors.append(e2)
            total += l_s2
            prev_s, prev_l, prev_e = s2, l_s2, e2
        out = factors[0] if len(factors) == 1 else Plus(tuple(factors), "extension by neighbourhood steps")
        if target is not None and target != INF:
            out = _cut(out, target)
        return out

    def extend(self, s1: Subgraph, l, e1):
        """For ``e1 = CF(s1, l)`` return ``(S₂, l_{S₂}, CF(S₂, l_{S₂}))``."""
        w = self.w
        if l > ls_value(w, s1):
            raise StepTooLarge(f"step {l} exceeds the extension range")
        s2 = w.neighborhood(s1, l)
        l_s2 = ls_value(w, s2)
        a, m = step_indices(l, l_s2)
        r, d = l / a, l_s2 / m
        base = e1 if a == 1 else _cut(e1, r)
        tents = []
        for k in range(1, a + 1):
            tents.extend(self.tent(p, r) for p in w.level_set(s1, k * r))
        grown = Plus((base,) + tuple(tents), "grow by layers of equal width") if tents else base
        layers = [Max((grown, _c(-d)), "first layer")]
        for k in range(1, m):
            ts = tuple(self.tent(p, d) for p in w.level_set(s2, k * d))
            layers.append(Plus((layers[-1],) + ts, f"layer {k}") if ts else layers[-1])
        e2 = layers[0] if m == 1 else Plus(tuple(layers), "stacked layers")
        return s2, l_s2, e2

    # connected subgraphs -------------------------------------------------------

    def connected(self, s: Subgraph, l):
        key = ("connected", s, to_value(l))
        if key not in self._local:
            self._local[key] = self._connected(s, l)
        return self._local[key]

    def _connected(self, s, l):
        w = self.w
        l = to_value(l)
        if w.is_whole(s):
            raise NotProper("the subgraph is the whole curve")
        pts = _single_point(w, s)
        if pts is not None:
            return self.point(pts, l)
        if len(s.intervals) == 1:
            eid, a, b = s.intervals[0]
            L = w.length(eid)
            if not (a == 0 and b == L):
                x = w.point(eid, (a + b) / 2)
                half = (b - a) / 2
                inner = self.point(x, l + half if l != INF else INF)
                out = Neg(Max((Neg(Plus((inner, _c(half)))), _c(0))))
                return tagged(out, "segment inside one edge, from its midpoint")
        self._enter()
        try:
            out = self._general(s, l)
        finally:
            self.depth -= 1
        return out

    def _general(self, s: Subgraph, l):
        w = self.w
        special = [w.point(vertex=v) for v in sorted(s.vertices)]
        for eid, a, b in s.intervals:
            L = w.length(eid)
            if a > 0:
                special.append(w.point(eid, a))
            if b < L:
                special.append(w.point(eid, b))
        shortest = min(b - a for _, a, b in s.intervals)
        eps = min(ls_value(w, s), shortest) / 2
        ends = [self.point_small(p, eps) for p in special]
        first = ends[0] if len(ends) == 1 else Max(tuple(ends), "moves at the special points")
        parts = [first]
        for eid, a, b in s.intervals:
            inner = w.subgraph([(eid, a + eps, b - eps)])
            parts.append(Plus((_c(eps), self.connected(inner, eps))))
        start = Plus(tuple(parts), "connected subgraph at a small radius")
        full = self.grow(s, start, eps, None)
        return tagged(_cut(full, l), "connected subgraph: grown to the diameter and cut")

    # arbitrary subgraphs ----------------------------------------------------------

    def subgraph(self, s: Subgraph, l):
        key = ("subgraph", s, to_value(l))
        if key not in self._local:
            self._local[key] = self._subgraph(s, l)
        return self._local[key]

    def _subgraph(self, s, l):
        w = self.w
        l = to_value(l)
        if w.is_whole(s):
            raise NotProper("the subgraph is the whole curve")
        comps = w.components(s)
        if len(comps) == 1:
            return self.connected(s, l)
        meet = min(_subgraph_distance(w, p, q)
                   for i, p in enumerate(comps) for q in comps[i + 1:]) / 2
        first = Max(tuple(self.connected(c, meet) for c in comps), "components separately")
        grown = w.neighborhood(s, meet)
        if w.is_whole(grown):
            rest = _c(0)
        else:
            self._enter()
            try:
                rest = self.subgraph(grown, INF)
            finally:
                self.depth -= 1
        out = Plus((first, rest), "disjoint components joined where they first meet")
        return tagged(_cut(out, l), "subgraph: cut to the requested radius")


def _single_point(w: TropicalCurve, s: Subgraph) -> Optional[Point]:
    if not s.intervals and len(s.vertices) == 1:
        return w.point(vertex=next(iter(s.vertices)))
    if len(s.intervals) == 1 and not s.vertices:
        eid, a, b = s.intervals[0]
        if a == b:
            return w.point(eid, a)
    return None


def _subgraph_distance(w: TropicalCurve, p: Subgraph, q: Subgraph) -> Q:
    vd = w.vertex_distances(p)
    best = min((vd[v] for v in q.vertices), default=INF)
    for eid, a, b in q.intervals:
        piece = w.distance_piece(p, eid)
        best = min(best, min(piece.restrict(a, b).ys) if a < b else piece.at(a))
    return best


# -------------------------------------------------------------------------------------
# chip-firing decomposition
# -------------------------------------------------------------------------------------

@dataclass
class CfFactorization:
    constant: Q
    factors: list = field(default_factory=list)   # (Subgraph, l, exponent)

    def recompose(self, curve: TropicalCurve) -> RationalFunction:
        out = RationalFunction.constant(curve, self.constant)
        for s, l, k in self.factors:
            out = trop_mul(out, trop_pow(cf(curve, s, l), k))
        return out


def _argmax(f: RationalFunction) -> tuple:
    w = f.curve
    top = max(max(p.ys) for p in f.pieces.values())
    ivs, verts = [], []
    for eid, p in f.pieces.items():
        for a, b in p.sublevel_ge(top):
            ivs.append((eid, a, b))
    for v in w.vertices:
        if f.vertex_value(v) == top:
            verts.append(v)
    return top, w.subgraph(ivs, verts)


def _peel_radius(w: TropicalCurve, f: RationalFunction, s: Subgraph) -> Q:
    comps = w.components(s)
    cands = [ls_value(w, c) for c in comps]
    for i, p in enumerate(comps):
        for q in comps[i + 1:]:
            cands.append(_subgraph_distance(w, p, q) / 2)
    vd = w.vertex_distances(s)
    cands.extend(d for d in vd.values() if d > 0)
    for eid, piece in f.pieces.items():
        dp = w.distance_piece(s, eid)
        for x in piece.xs:
            d = dp.at(x)
            if d > 0:
                cands.append(d)
    return min(cands)


def decompose_work(w: TropicalCurve, f: RationalFunction, budget: Optional[int] = None) -> CfFactorization:
    """Peel the top level set of ``f`` until only a constant is left."""
    if f.is_neg_inf:
        raise ValueError("the constant -inf has no decomposition")
    if f.is_constant():
        return CfFactorization(f.constant_value(), [])
    if budget is None:
        budget = 4 * f.breakpoints() * (f.max_abs_slope() + 1)
    factors = []
    r = f
    while not r.is_constant():
        if len(factors) >= budget:
            raise IterationBudgetExceeded(f"peeling did not finish within {budget} steps")
        _, s = _argmax(r)
        delta = _peel_radius(w, r, s)
        move = cf(w, s, delta)
        factors.append((s, delta, 1))
        r = trop_mul(r, trop_inv(move))
    return CfFactorization(r.constant_value(), factors)


def decompose_into_cf(curve: TropicalCurve, f: RationalFunction, budget: Optional[int] = None) -> CfFactorization:
    if not curve.is_metric:
        raise InvalidCurve("decomposition runs on metric graphs")
    return decompose_work(curve, f, budget)


# -------------------------------------------------------------------------------------
# the ∞-leg lift
# -------------------------------------------------------------------------------------

@dataclass
class LegPiece:
    leg: int            # 1-based
    start: Q     # x_ij as an offset from the attaching vertex
    end: object         # x_{i,j+1}, or inf
    slope: Q     # a_ij


@dataclass
class Lift:
    pieces: list
    factors: list       # one expression per piece
    residual: RationalFunction   # f restricted to Γ'


def lift_infinite(gens: GeneratorSet, fc: RationalFunction) -> Lift:
    """Correction factors along every ∞ leg for a function on the canonical curve."""
    pieces, factors = [], []
    for i, eid in enumerate(gens.legs, 1):
        p = fc.pieces[eid]
        xs = list(p.xs)
        slopes = p.slopes() + [p.tail]
        ends = xs[1:] + [INF]
        for x0, x1, a in zip(xs, ends, slopes):
            pieces.append(LegPiece(i, x0, x1, a))
            factors.append(_correction(i, x0, x1, a))
    return Lift(pieces, factors, restrict(fc, gens.contraction))


def _correction(i: int, x0, x1, a):
    if a == 0:
        return _c(0)
    leg = Gen(f"linf@{i}")
    b0 = -x0
    b1 = NEG_INF if x1 == INF else -x1
    inner = Max((Neg(Max((leg, Const(b1)))), _c(-b0)))
    core = Plus((_c(-b0), Neg(inner)))
    return Scale(core, int(-a), f"correction on leg {i} from offset {x0}")


# -------------------------------------------------------------------------------------
# whole functions
# -------------------------------------------------------------------------------------

@dataclass
class Synthesis:
    expr: object
    factorization: Optional[CfFactorization] = None
    lift: Optional[Lift] = None


def express_function_full(curve: TropicalCurve, f: RationalFunction) -> Synthesis:
    if f.is_neg_inf:
        raise ValueError("the constant -inf has no expression with inverses")
    gens = generators(curve)
    fc = to_canonical(f, gens.canon)
    lift = None
    corrections = []
    residual = fc
    if gens.legs:
        lift = lift_infinite(gens, fc)
        corrections = lift.factors
        residual = lift.residual
    fac = None
    if residual.is_constant():
        parts = [_c(residual.constant_value())]
    else:
        syn = synthesizer(gens)
        fac = decompose_work(gens.work, residual)
        parts = [_c(fac.constant)]
        for s, l, k in fac.factors:
            e = syn.subgraph(s, l)
            parts.append(e if k == 1 else Scale(e, k))
    parts.extend(corrections)
    if len(parts) == 1:
        return Synthesis(parts[0], fac, lift)
    return Synthesis(Plus(tuple(parts), "constant times chip-firing factors"), fac, lift)


def express_function(curve: TropicalCurve, f: RationalFunction):
    return express_function_full(curve, f).expr


# -------------------------------------------------------------------------------------
# entry points taking points and subgraphs on the user's model
# -------------------------------------------------------------------------------------

def synthesizer(gens: GeneratorSet) -> Synthesizer:
    """The builder for a generator set, shared so repeated requests reuse subtrees."""
    if "synth" not in gens.ccurve._cache:
        gens.ccurve._cache["synth"] = Synthesizer(gens)
    return gens.ccurve._cache["synth"]


def _metric_synth(curve: TropicalCurve) -> Synthesizer:
    if not curve.is_metric:
        raise InvalidCurve("chip-firing synthesis needs a metric graph; use the function pipeline")
    gens = generators(curve)
    if not gens.work.edges:
        raise InvalidCurve("a singleton has no proper subgraphs")
    return synthesizer(gens)


def express_point_cf_local(curve: TropicalCurve, x: Point):
    syn = _metric_synth(curve)
    p = syn.gens.canon.to_canonical_point(x)
    if p.vertex is not None:
        raise ValueError("the local closed forms are for points inside an edge")
    return syn.local(p)


def express_point_cf(curve: TropicalCurve, x: Point, l):
    syn = _metric_synth(curve)
    return syn.point(syn.gens.canon.to_canonical_point(x), l)


def express_connected_cf(curve: TropicalCurve, s: Subgraph, l):
    syn = _metric_synth(curve)
    sc = syn.gens.canon.to_canonical_subgraph(s)
    if not syn.w.is_connected(sc):
        raise NotConnected("the subgraph is not connected")
    return syn.connected(sc, l)


def express_subgraph_cf(curve: TropicalCurve, s: Subgraph, l):
    syn = _metric_synth(curve)
    return syn.subgraph(syn.gens.canon.to_canonical_subgraph(s), l)


def local_case(expr) -> Optional[str]:
    """Name of the closed-form case an expression from the local builder used."""
    if isinstance(expr, Gen):
        return "midpoint"
    tag = getattr(expr, "tag", None) or ""
    for name in ("near-end", "middle", "near-midpoint"):
        if name in tag:
            return f"{name} ({'g' if 'g side' in tag else 'h'})"
    if isinstance(expr, Plus):
        return local_case(expr.children[0].children[0]) if isinstance(expr.children[0], Max) else None
    return None
