"""The semifield Rat(Γ) of rational functions on a tropical curve."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InadmissibleSubgraph, InvalidFunction, NotInvertible
from .extended import INF, NEG_INF, Q, Value, is_inf, to_value
from .graph import Contraction, Point, Subgraph, TropicalCurve
from .piecewise import PL


class RationalFunction:
    """Piecewise-linear function with integer slopes, or the constant ``-inf``.

    ``pieces`` maps every edge id to a :class:`PL` along that edge.  On an
    edgeless curve the function is the constant ``const``.
    """

    __slots__ = ("curve", "pieces", "const", "_hash")

    def __init__(self, curve: TropicalCurve, pieces: Optional[dict] = None,
                 const: Optional[Value] = None, check: bool = True):
        self.curve = curve
        self.const = const
        self._hash = None
        if const == NEG_INF:
            self.pieces = None
            return
        if pieces is None:
            if const is None:
                raise InvalidFunction("need pieces or a constant")
            c = Q(const)
            pieces = {eid: PL.constant(e.length, c) for eid, e in curve.edges.items()}
        if check:
            self.pieces = {eid: pieces[eid].simplify() for eid in curve.edges}
        else:
            self.pieces = {eid: pieces[eid] for eid in curve.edges}
        if not curve.edges:
            if const is None:
                raise InvalidFunction("an edgeless curve needs a constant value")
            self.const = Q(const)
        if check:
            self._validate()

    def _validate(self):
        for eid, p in self.pieces.items():
            e = self.curve.edges[eid]
            if e.infinite != p.infinite or (not e.infinite and p.length != e.length):
                raise InvalidFunction(f"piece on {eid} has the wrong domain")
            for s in p.all_slopes():
                if Q(s).denominator != 1:
                    raise InvalidFunction(f"non-integer slope {s} on edge {eid}")
        for v in self.curve.finite_vertices:
            vals = {self.pieces[eid].at(self.curve.end_offset(eid, end))
                    for eid, end in self.curve.incidence[v]}
            if len(vals) > 1:
                raise InvalidFunction(f"discontinuous at vertex {v}")

    # constructors -----------------------------------------------------------

    @classmethod
    def constant(cls, curve: TropicalCurve, c) -> "RationalFunction":
        c = to_value(c)
        key = ("const", c)
        hit = curve._cache.get(key)
        if hit is None:
            if c == NEG_INF:
                hit = cls(curve, const=NEG_INF)
            else:
                hit = cls(curve, const=c, check=False)
            if len(curve._cache) < 200000:
                curve._cache[key] = hit
        return hit

    @classmethod
    def neg_inf(cls, curve: TropicalCurve) -> "RationalFunction":
        return cls(curve, const=NEG_INF)

    # basic queries ----------------------------------------------------------

    @property
    def is_neg_inf(self) -> bool:
        return self.pieces is None

    def is_constant(self) -> bool:
        if self.is_neg_inf or not self.curve.edges:
            return True
        vals = set()
        for p in self.pieces.values():
            if any(s != 0 for s in p.all_slopes()):
                return False
            vals.add(p.ys[0])
        return len(vals) == 1

    def constant_value(self) -> Value:
        if self.is_neg_inf:
            return NEG_INF
        if not self.curve.edges:
            return self.const
        return next(iter(self.pieces.values())).ys[0]

    def __call__(self, p: Point) -> Value:
        return evaluate(self, p)

    def vertex_value(self, v: str) -> Value:
        if self.is_neg_inf:
            return NEG_INF
        if not self.curve.edges:
            return self.const
        eid, end = self.curve.incidence[v][0]
        return self.pieces[eid].at(self.curve.end_offset(eid, end))

    def breakpoints(self) -> int:
        if self.is_neg_inf:
            return 0
        return sum(len(p.xs) for p in self.pieces.values())

    def max_abs_slope(self) -> int:
        if self.is_neg_inf:
            return 0
        return int(max((abs(s) for p in self.pieces.values() for s in p.all_slopes()), default=0))

    def __eq__(self, other):
        return isinstance(other, RationalFunction) and pl_equal(self, other)

    def __hash__(self):
        if self._hash is None:
            if self.is_neg_inf:
                self._hash = hash("-inf")
            elif not self.curve.edges:
                self._hash = hash(self.const)
            else:
                self._hash = hash(tuple(sorted((k, p) for k, p in self.pieces.items())))
        return self._hash

    def __repr__(self):
        if self.is_neg_inf:
            return "RationalFunction(-inf)"
        return f"RationalFunction({self.breakpoints()} breakpoints)"

    # operator sugar ---------------------------------------------------------

    def __or__(self, other):   # ⊕
        return trop_add(self, _lift(self.curve, other))

    __ror__ = __or__

    def __and__(self, other):  # ⊙
        return trop_mul(self, _lift(self.curve, other))

    __rand__ = __and__

    def __invert__(self):
        return trop_inv(self)

    def __pow__(self, k: int):
        return trop_pow(self, k)


def _lift(curve, x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction.constant(curve, x)


def _same_curve(f: RationalFunction, g: RationalFunction):
    if f.curve is not g.curve and not f.curve.same_shape(g.curve):
        raise InvalidFunction("functions live on different curves")


def evaluate(f: RationalFunction, p: Point) -> Value:
    """Value at ``p``; at a point at infinity this is the one-sided limit."""
    if f.is_neg_inf:
        return NEG_INF
    if p.vertex is not None:
        return f.vertex_value(p.vertex)
    return f.pieces[p.edge].at(p.offset)


def trop_add(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """Pointwise maximum, with crossing points inserted exactly."""
    _same_curve(f, g)
    if f.is_neg_inf:
        return g
    if g.is_neg_inf:
        return f
    if not f.curve.edges:
        return RationalFunction.constant(f.curve, max(f.const, g.const))
    return RationalFunction(f.curve, {e: f.pieces[e].maximum(g.pieces[e]) for e in f.pieces},
                            check=False)


def trop_mul(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """Pointwise sum; at points at infinity the continuous extension is used."""
    _same_curve(f, g)
    if f.is_neg_inf or g.is_neg_inf:
        return RationalFunction.neg_inf(f.curve)
    if not f.curve.edges:
        return RationalFunction.constant(f.curve, f.const + g.const)
    return RationalFunction(f.curve, {e: f.pieces[e] + g.pieces[e] for e in f.pieces},
                            check=False)


def trop_inv(f: RationalFunction) -> RationalFunction:
    if f.is_neg_inf:
        raise NotInvertible("the constant -inf has no tropical inverse")
    if not f.curve.edges:
        return RationalFunction.constant(f.curve, -f.const)
    return RationalFunction(f.curve, {e: -p for e, p in f.pieces.items()}, check=False)


def trop_pow(f: RationalFunction, k: int) -> RationalFunction:
    """``k``-fold tropical power; negative ``k`` inverts first."""
    if k == 0:
        if f.is_neg_inf:
            raise NotInvertible("(-inf)^0 is undefined")
        return RationalFunction.constant(f.curve, 0)
    if f.is_neg_inf:
        if k < 0:
            raise NotInvertible("the constant -inf has no tropical inverse")
        return f
    if not f.curve.edges:
        return RationalFunction.constant(f.curve, k * f.const)
    return RationalFunction(f.curve, {e: p.scale(k) for e, p in f.pieces.items()}, check=False)


def trop_sum(fs) -> RationalFunction:
    fs = list(fs)
    out = fs[0]
    for f in fs[1:]:
        out = trop_add(out, f)
    return out


def trop_prod(fs) -> RationalFunction:
    fs = list(fs)
    out = fs[0]
    for f in fs[1:]:
        out = trop_mul(out, f)
    return out


@dataclass(frozen=True)
class Comparison:
    equal: bool
    breakpoints_checked: int
    mismatch: Optional[Point] = None
    lhs_value: Optional[Value] = None
    rhs_value: Optional[Value] = None


def compare(f: RationalFunction, g: RationalFunction) -> Comparison:
    """Exact comparison on the union of breakpoints of both operands."""
    _same_curve(f, g)
    curve = f.curve
    if f.is_neg_inf or g.is_neg_inf:
        eq = f.is_neg_inf and g.is_neg_inf
        if eq:
            return Comparison(True, 0)
        p = curve.point(vertex=curve.vertices[0])
        return Comparison(False, 1, p, evaluate(f, p), evaluate(g, p))
    if not curve.edges:
        eq = f.const == g.const
        p = curve.point(vertex=curve.vertices[0])
        return Comparison(eq, 1, None if eq else p, f.const, g.const)
    checked = 0
    for eid in curve.edges:
        ok, n, x = f.pieces[eid].compare(g.pieces[eid])
        checked += n
        if not ok:
            p = curve.point(eid, x)
            return Comparison(False, checked, p, evaluate(f, p), evaluate(g, p))
    return Comparison(True, checked)


def pl_equal(f: RationalFunction, g: RationalFunction) -> bool:
    return compare(f, g).equal


# chip-firing moves ---------------------------------------------------------------

def cf(curve: TropicalCurve, s: Subgraph, l) -> RationalFunction:
    """``CF(s, l)(x) = -min(dist(s, x), l)``."""
    l = to_value(l)
    if not (l == INF or (not is_inf(l) and l > 0)):
        raise ValueError("chip-firing radius must be positive")
    if not curve.admissible(s):
        raise InadmissibleSubgraph("a component consists only of points at infinity")
    key = ("cf", s, l)
    if key in curve._cache:
        return curve._cache[key]
    if not curve.edges:
        out = RationalFunction.constant(curve, 0)
    else:
        pieces = {}
        for eid, e in curve.edges.items():
            d = curve.distance_piece(s, eid)
            if l != INF:
                d = d.minimum(PL.constant(e.length, l))
            pieces[eid] = -d
        out = RationalFunction(curve, pieces, check=False)
    curve._cache[key] = out
    return out


def cf_point(curve: TropicalCurve, p: Point, l) -> RationalFunction:
    return cf(curve, curve.point_subgraph(p), l)


# poles ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Pole:
    location: Point
    degree: int
    at_infinity: bool = False


def outgoing_slope_sum(f: RationalFunction, p: Point) -> int:
    curve = f.curve
    if p.vertex is not None:
        total = 0
        for eid, end in curve.incidence[p.vertex]:
            piece = f.pieces[eid]
            if curve.edges[eid].infinite and end == 1:
                total -= piece.tail
            elif end == 0:
                total += piece.start_slope()
            else:
                total -= piece.end_slope()
        return int(total)
    piece = f.pieces[p.edge]
    t = p.offset
    xs = piece.xs
    left_s = right_s = None
    for x0, x1, s in zip(xs, xs[1:], piece.slopes()):
        if x0 < t <= x1:
            left_s = s
        if x0 <= t < x1:
            right_s = s
    if piece.infinite and t >= xs[-1]:
        right_s = piece.tail
        if t > xs[-1]:
            left_s = piece.tail
    return int(right_s - left_s)


def poles(f: RationalFunction) -> list:
    """Poles with degrees; poles at points at infinity are flagged."""
    if f.is_neg_inf:
        raise NotInvertible("poles of -inf are undefined")
    curve = f.curve
    out = []
    for v in curve.vertices:
        if not curve.incidence[v]:
            continue
        s = outgoing_slope_sum(f, curve.point(vertex=v))
        if s < 0:
            out.append(Pole(curve.point(vertex=v), -s, v in curve.infinite_vertices))
    for eid, piece in f.pieces.items():
        for x in piece.xs[1:] if piece.infinite else piece.xs[1:-1]:
            p = curve.point(eid, x)
            if p.vertex is not None:
                continue
            s = outgoing_slope_sum(f, p)
            if s < 0:
                out.append(Pole(p, -s))
    out.sort(key=lambda q: q.location.sort_key())
    return out


def pole_points(f: RationalFunction) -> set:
    return {q.location for q in poles(f)}


def t_algebra_unreachable(f: RationalFunction, generators) -> bool:
    """True when ``f`` has a pole that no ⊕/⊙ combination of ``generators`` can have.

    Polynomial (inverse-free) expressions in the generators only carry poles
    found among the generators' poles.
    """
    allowed = set()
    for g in generators:
        if not g.is_neg_inf:
            allowed |= pole_points(g)
    return not pole_points(f) <= allowed


def t_algebra_witness(curve: TropicalCurve, generators) -> RationalFunction:
    """A function whose pole lies off every generator's pole set."""
    allowed = set()
    for g in generators:
        if not g.is_neg_inf:
            allowed |= pole_points(g)
    if not curve.edges:
        raise ValueError("a singleton has no poles")
    for eid in sorted(curve.edges):
        e = curve.edges[eid]
        L = Q(1) if e.infinite else e.length
        used = sorted({q.offset for q in allowed if q.edge == eid} | {Q(0), L})
        gaps = [(b - a, a, b) for a, b in zip(used, used[1:])]
        _, a, b = max(gaps)
        x = curve.point(eid, (a + b) / 2)
        return cf_point(curve, x, (b - a) / 4)
    raise AssertionError("unreachable")


# contraction of infinite edges ---------------------------------------------------

def restrict(f: RationalFunction, contraction: Contraction) -> RationalFunction:
    """``f`` restricted to the contracted metric graph ``Γ'``."""
    c = contraction.curve
    if f.is_neg_inf:
        return RationalFunction.neg_inf(c)
    if not c.edges:
        return RationalFunction.constant(c, f.vertex_value(c.vertices[0]))
    return RationalFunction(c, {eid: f.pieces[eid] for eid in c.edges}, check=False)


def extend_constant(fp: RationalFunction, contraction: Contraction) -> RationalFunction:
    """κ: extend a function on ``Γ'`` to ``Γ``, constant on every removed leg."""
    g = contraction.source
    if fp.is_neg_inf:
        return RationalFunction.neg_inf(g)
    pieces = dict(fp.pieces) if fp.curve.edges else {}
    for eid, v in contraction.removed:
        pieces[eid] = PL.constant(INF, fp.vertex_value(v))
    return RationalFunction(g, pieces, check=False)


def restrict_and_extend(f: RationalFunction, contraction: Contraction) -> RationalFunction:
    return extend_constant(restrict(f, contraction), contraction)


# transport between a model and its canonical model -------------------------------

def to_canonical(f: RationalFunction, cm) -> RationalFunction:
    if f.is_neg_inf:
        return RationalFunction.neg_inf(cm.curve)
    if not cm.curve.edges:
        return RationalFunction.constant(cm.curve, f.vertex_value(cm.curve.vertices[0]))
    pieces = {}
    for c, chain in cm.chains.items():
        acc = None
        for eid, fwd in chain:
            p = f.pieces[eid] if fwd else f.pieces[eid].reversed()
            acc = p if acc is None else acc.concat(p)
        pieces[c] = acc
    return RationalFunction(cm.curve, pieces, check=False)


def from_canonical(f: RationalFunction, cm) -> RationalFunction:
    base = cm.base
    if f.is_neg_inf:
        return RationalFunction.neg_inf(base)
    if not base.edges:
        return RationalFunction.constant(base, f.constant_value())
    pieces = {}
    for c, chain in cm.chains.items():
        for (eid, fwd), start in zip(chain, cm.starts[c]):
            L = base.length(eid)
            end = INF if is_inf(L) else start + L
            p = f.pieces[c].restrict(start, end)
            pieces[eid] = p if fwd else p.reversed()
    return RationalFunction(base, pieces, check=False)
