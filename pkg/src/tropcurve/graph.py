"""Tropical curves given by edge-weighted models, with exact metric queries."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import InadmissibleSubgraph, InvalidCurve, InvalidPoint
from .extended import INF, Q, Value, is_inf, to_value
from .piecewise import PL, lower_envelope


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: Value

    @property
    def infinite(self) -> bool:
        return self.length == INF

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class Point:
    """A point of a curve: a vertex, or an interior offset on an edge.

    Build points through :meth:`TropicalCurve.point` so that endpoint
    offsets collapse to vertex references.
    """

    vertex: Optional[str] = None
    edge: Optional[str] = None
    offset: Optional[Q] = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self):
        if self.vertex is not None:
            return (0, self.vertex, Q(0))
        return (1, self.edge, self.offset)

    def __str__(self):
        if self.vertex is not None:
            return self.vertex
        from .extended import fmt
        return f"{self.edge}:{fmt(self.offset)}"


@dataclass(frozen=True)
class Subgraph:
    """Finite union of closed edge intervals and vertices, in normal form.

    ``intervals`` holds ``(edge, a, b)`` triples merged per edge; an interval
    touching an edge end implies that end vertex is listed in ``vertices``.
    """

    intervals: tuple = ()
    vertices: frozenset = frozenset()

    def __str__(self):
        from .extended import fmt
        parts = [f"{e}[{fmt(a)},{fmt(b)}]" for e, a, b in self.intervals]
        parts += sorted(self.vertices)
        return "{" + ", ".join(parts) + "}"


class TropicalCurve:
    """A connected edge-weighted multigraph; edges may have length ``inf``.

    Each edge ``e`` is identified with ``[0, l(e)]`` running from ``e.u`` to
    ``e.v``.  Infinite edges are leaf edges and are stored with the point at
    infinity as ``e.v``.
    """

    def __init__(self, vertices: Iterable[str], edges: Iterable):
        verts = sorted(set(vertices))
        if not verts:
            raise InvalidCurve("a curve needs at least one vertex")
        raw = []
        for e in edges:
            if isinstance(e, Edge):
                raw.append(e)
            else:
                eid, (u, v), length = e
                raw.append(Edge(str(eid), str(u), str(v), to_value(length)))
        ids = [e.id for e in raw]
        if len(set(ids)) != len(ids):
            raise InvalidCurve("duplicate edge ids")
        vset = set(verts)
        degree = {v: 0 for v in verts}
        for e in raw:
            if e.u not in vset or e.v not in vset:
                raise InvalidCurve(f"edge {e.id} references an unknown vertex")
            if not (e.length == INF or (not is_inf(e.length) and e.length > 0)):
                raise InvalidCurve(f"edge {e.id} must have positive length")
            degree[e.u] += 1
            degree[e.v] += 1
        fixed = []
        for e in raw:
            if e.infinite:
                if e.is_loop:
                    raise InvalidCurve(f"infinite edge {e.id} cannot be a loop")
                if degree[e.v] != 1:
                    if degree[e.u] == 1:
                        e = Edge(e.id, e.v, e.u, INF)
                    else:
                        raise InvalidCurve(f"infinite edge {e.id} is not a leaf edge")
            fixed.append(e)
        self.vertices: tuple = tuple(verts)
        self.edges: dict = {e.id: e for e in sorted(fixed, key=lambda e: e.id)}
        self.infinite_vertices: frozenset = frozenset(
            e.v for e in self.edges.values() if e.infinite)
        for e in self.edges.values():
            if e.infinite and e.u in self.infinite_vertices:
                raise InvalidCurve("an edge cannot have two points at infinity")
        self.incidence: dict = {v: [] for v in verts}
        for e in self.edges.values():
            self.incidence[e.u].append((e.id, 0))
            self.incidence[e.v].append((e.id, 1))
        if not self._connected():
            raise InvalidCurve("curve is not connected")
        self._cache: dict = {}

    # structure ------------------------------------------------------------

    def _connected(self) -> bool:
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            x = stack.pop()
            for eid, _ in self.incidence[x]:
                e = self.edges[eid]
                for y in (e.u, e.v):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        return len(seen) == len(self.vertices)

    def __repr__(self):
        return f"TropicalCurve({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def degree(self, v: str) -> int:
        return len(self.incidence[v])

    @property
    def is_metric(self) -> bool:
        return not self.infinite_vertices

    @property
    def finite_vertices(self) -> tuple:
        return tuple(v for v in self.vertices if v not in self.infinite_vertices)

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def length(self, eid: str) -> Value:
        return self.edges[eid].length

    def end_vertex(self, eid: str, end: int) -> str:
        e = self.edges[eid]
        return e.u if end == 0 else e.v

    def end_offset(self, eid: str, end: int) -> Value:
        return Q(0) if end == 0 else self.edges[eid].length

    def same_shape(self, other: "TropicalCurve") -> bool:
        return self.vertices == other.vertices and self.edges == other.edges

    # points ---------------------------------------------------------------

    def point(self, edge: Optional[str] = None, offset=None, vertex: Optional[str] = None) -> Point:
        if vertex is not None:
            if vertex not in self.incidence:
                raise InvalidPoint(f"unknown vertex {vertex}")
            return Point(vertex=vertex)
        if edge not in self.edges:
            raise InvalidPoint(f"unknown edge {edge}")
        e = self.edges[edge]
        t = to_value(offset)
        if t == 0:
            return Point(vertex=e.u)
        if t == e.length:
            return Point(vertex=e.v)
        if is_inf(t) or t < 0 or t > e.length:
            raise InvalidPoint(f"offset {offset} outside edge {edge}")
        return Point(edge=edge, offset=Q(t))

    def vertex_point(self, v: str) -> Point:
        return self.point(vertex=v)

    def is_infinite_point(self, p: Point) -> bool:
        return p.vertex is not None and p.vertex in self.infinite_vertices

    def valence(self, p: Point) -> int:
        if p.vertex is None:
            return 2
        return self.degree(p.vertex)

    def locate(self, p: Point) -> list:
        """``(edge, offset)`` descriptions of ``p`` on every incident edge end."""
        if p.vertex is None:
            return [(p.edge, p.offset)]
        return [(eid, self.end_offset(eid, end)) for eid, end in self.incidence[p.vertex]]

    # subgraphs ------------------------------------------------------------

    def subgraph(self, intervals: Iterable = (), vertices: Iterable = ()) -> Subgraph:
        per_edge: dict = {}
        verts = set(vertices)
        for v in verts:
            if v not in self.incidence:
                raise InadmissibleSubgraph(f"unknown vertex {v}")
        for eid, a, b in intervals:
            if eid not in self.edges:
                raise InadmissibleSubgraph(f"unknown edge {eid}")
            L = self.edges[eid].length
            a, b = to_value(a), to_value(b)
            if is_inf(a) and a > 0:
                verts.add(self.edges[eid].v)
                continue
            if a > b or a < 0 or b > L:
                raise InadmissibleSubgraph(f"bad interval [{a}, {b}] on edge {eid}")
            per_edge.setdefault(eid, []).append((Q(a), b if is_inf(b) else Q(b)))
        out = []
        for eid in sorted(per_edge):
            e = self.edges[eid]
            merged: list = []
            for a, b in sorted(per_edge[eid]):
                if merged and a <= merged[-1][1]:
                    merged[-1] = (merged[-1][0], max(merged[-1][1], b))
                else:
                    merged.append((a, b))
            for a, b in merged:
                if a == 0:
                    verts.add(e.u)
                if b == e.length:
                    verts.add(e.v)
                if a == b and (a == 0 or a == e.length):
                    continue
                out.append((eid, a, b))
        # isolated points on an edge may coincide with listed vertex ends
        if not out and not verts:
            raise InadmissibleSubgraph("subgraph is empty")
        return Subgraph(tuple(out), frozenset(verts))

    def point_subgraph(self, p: Point) -> Subgraph:
        if p.vertex is not None:
            return self.subgraph((), [p.vertex])
        return self.subgraph([(p.edge, p.offset, p.offset)])

    def union(self, *subgraphs: Subgraph) -> Subgraph:
        return self.subgraph(
            [iv for s in subgraphs for iv in s.intervals],
            [v for s in subgraphs for v in s.vertices])

    def whole(self) -> Subgraph:
        return self.subgraph([(eid, 0, e.length) for eid, e in self.edges.items()], self.vertices)

    def is_whole(self, s: Subgraph) -> bool:
        return s == self.whole()

    def contains(self, s: Subgraph, p: Point) -> bool:
        if p.vertex is not None:
            return p.vertex in s.vertices
        return any(eid == p.edge and a <= p.offset <= b for eid, a, b in s.intervals)

    def edge_intervals(self, s: Subgraph, eid: str) -> list:
        """``S`` intersected with the closed edge, as offset intervals."""
        e = self.edges[eid]
        ivs = [(a, b) for x, a, b in s.intervals if x == eid]
        if e.u in s.vertices and not any(a == 0 for a, _ in ivs):
            ivs.append((Q(0), Q(0)))
        if e.v in s.vertices and not any(b == e.length for _, b in ivs):
            ivs.append((e.length, e.length))
        return sorted(ivs)

    def measure_on_edge(self, s: Subgraph, eid: str) -> Q:
        return sum((b - a for a, b in self.edge_intervals(s, eid) if not is_inf(b)), Q(0))

    def components(self, s: Subgraph) -> list:
        """Connected components of ``s``, each as a :class:`Subgraph`."""
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def join(x, y):
            parent[find(x)] = find(y)

        nodes = [("v", v) for v in s.vertices] + [("i", iv) for iv in s.intervals]
        for n in nodes:
            parent[n] = n
        for iv in s.intervals:
            eid, a, b = iv
            e = self.edges[eid]
            if a == 0:
                join(("i", iv), ("v", e.u))
            if b == e.length:
                join(("i", iv), ("v", e.v))
        groups: dict = {}
        for n in nodes:
            groups.setdefault(find(n), []).append(n)
        comps = []
        for members in groups.values():
            ivs = [n[1] for n in members if n[0] == "i"]
            vs = [n[1] for n in members if n[0] == "v"]
            comps.append(self.subgraph(ivs, vs))
        comps.sort(key=lambda c: (sorted(c.vertices), c.intervals))
        return comps

    def is_connected(self, s: Subgraph) -> bool:
        return len(self.components(s)) == 1

    def admissible(self, s: Subgraph) -> bool:
        """No component made only of points at infinity."""
        for c in self.components(s):
            if not c.intervals and c.vertices <= self.infinite_vertices:
                return False
        return True

    def points_of(self, s: Subgraph) -> list:
        """If ``s`` is a finite set of points, list them."""
        pts = [self.point(vertex=v) for v in sorted(s.vertices)]
        for eid, a, b in s.intervals:
            if a != b:
                raise ValueError("subgraph is not a finite point set")
            pts.append(self.point(eid, a))
        return pts

    # distances ------------------------------------------------------------

    def vertex_distances(self, s: Subgraph) -> dict:
        """Exact distance from ``s`` to every vertex (Dijkstra, id tie-break)."""
        key = ("vd", s)
        if key in self._cache:
            return self._cache[key]
        dist = {v: INF for v in self.vertices}
        for v in s.vertices:
            dist[v] = Q(0)
        for eid, a, b in s.intervals:
            e = self.edges[eid]
            dist[e.u] = min(dist[e.u], a)
            if not e.infinite:
                dist[e.v] = min(dist[e.v], e.length - b)
        heap = [(d, v) for v, d in dist.items() if d != INF]
        heapq.heapify(heap)
        done = set()
        while heap:
            d, x = heapq.heappop(heap)
            if x in done or d > dist[x]:
                continue
            done.add(x)
            for eid, end in self.incidence[x]:
                e = self.edges[eid]
                if e.infinite:
                    continue
                y = e.v if end == 0 else e.u
                nd = d + e.length
                if nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        self._cache[key] = dist
        return dist

    def distance_piece(self, s: Subgraph, eid: str) -> PL:
        """``dist(s, .)`` along edge ``eid`` as an exact PL function."""
        key = ("dp", s, eid)
        if key in self._cache:
            return self._cache[key]
        e = self.edges[eid]
        L = e.length
        vd = self.vertex_distances(s)
        cands = []
        if vd[e.u] != INF:
            cands.append(PL.linear(L, vd[e.u], 1))
        if not e.infinite and vd[e.v] != INF:
            cands.append(PL.linear(L, vd[e.v] + L, -1))
        for x, a, b in s.intervals:
            if x != eid:
                continue
            if e.infinite:
                pts = [(0, a), (a, 0)] + ([] if is_inf(b) else [(b, 0)])
                cands.append(PL.from_points(INF, pts, tail=0 if is_inf(b) else 1))
            else:
                cands.append(PL.from_points(L, [(0, a), (a, 0), (b, 0), (L, L - b)]))
        if not cands:
            raise InadmissibleSubgraph("subgraph unreachable from this edge")
        out = lower_envelope(cands)
        self._cache[key] = out
        return out

    def dist_subgraph(self, s: Subgraph, p: Point) -> Value:
        if p.vertex is not None:
            return self.vertex_distances(s)[p.vertex]
        return self.distance_piece(s, p.edge).at(p.offset)

    def dist(self, p: Point, q: Point) -> Value:
        return self.dist_subgraph(self.point_subgraph(p), q)

    def neighborhood(self, s: Subgraph, l) -> Subgraph:
        """Closed ``l``-neighbourhood ``{x : dist(s, x) <= l}``."""
        l = to_value(l)
        if l == INF:
            if not self.is_metric:
                raise ValueError("an infinite neighbourhood is not compact")
            return self.whole()
        vd = self.vertex_distances(s)
        ivs = []
        for eid in self.edges:
            for a, b in self.distance_piece(s, eid).sublevel(l):
                ivs.append((eid, a, b))
        verts = [v for v, d in vd.items() if d <= l]
        return self.subgraph(ivs, verts)

    def level_set(self, s: Subgraph, r) -> list:
        """Points at exact distance ``r > 0`` from ``s``, sorted and deduplicated."""
        r = Q(r)
        pts = set()
        for eid in self.edges:
            for t in self.distance_piece(s, eid).level(r):
                pts.add(self.point(eid, t))
        return sorted(pts, key=Point.sort_key)

    def all_vertex_distances(self) -> dict:
        key = ("apsp",)
        if key not in self._cache:
            self._cache[key] = {v: self.vertex_distances(self.subgraph((), [v]))
                                for v in self.vertices}
        return self._cache[key]

    def diameter(self) -> Value:
        """Largest distance between two points (``inf`` with infinite edges)."""
        if not self.is_metric:
            return INF
        key = ("diam",)
        if key in self._cache:
            return self._cache[key]
        D = self.all_vertex_distances()
        best = Q(0)
        eids = list(self.edges)
        for i, e1 in enumerate(eids):
            for e2 in eids[i:]:
                best = max(best, self._max_dist_edges(D, self.edges[e1], self.edges[e2]))
        self._cache[key] = best
        return best

    @staticmethod
    def _max_dist_edges(D, e1: Edge, e2: Edge) -> Q:
        L1, L2 = e1.length, e2.length
        # affine forms a*s + b*t + c
        to1 = {0: (1, 0), 1: (-1, L1)}
        to2 = {0: (1, 0), 1: (-1, L2)}
        ends1 = {0: e1.u, 1: e1.v}
        ends2 = {0: e2.u, 1: e2.v}
        forms = []
        for i, j in itertools.product((0, 1), (0, 1)):
            a, c1 = to1[i]
            b, c2 = to2[j]
            forms.append((Q(a), Q(b), c1 + c2 + D[ends1[i]][ends2[j]]))
        regions = [None]
        if e1.id == e2.id:
            regions = ["le", "ge"]
        best = Q(0)
        box = [(Q(1), Q(0), Q(0)), (Q(1), Q(0), -L1),
               (Q(0), Q(1), Q(0)), (Q(0), Q(1), -L2)]
        for reg in regions:
            fs = list(forms)
            extra = []
            if reg == "le":  # s <= t, direct path t - s
                fs.append((Q(-1), Q(1), Q(0)))
                extra.append((Q(1), Q(-1), Q(0)))
            elif reg == "ge":
                fs.append((Q(1), Q(-1), Q(0)))
                extra.append((Q(1), Q(-1), Q(0)))
            lines = list(box) + extra
            for f, g in itertools.combinations(fs, 2):
                lines.append((f[0] - g[0], f[1] - g[1], f[2] - g[2]))
            for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(lines, 2):
                det = a1 * b2 - a2 * b1
                if det == 0:
                    continue
                s = (-c1 * b2 + c2 * b1) / det
                t = (-a1 * c2 + a2 * c1) / det
                if not (0 <= s <= L1 and 0 <= t <= L2):
                    continue
                if reg == "le" and s > t or reg == "ge" and s < t:
                    continue
                val = min(a * s + b * t + c for a, b, c in fs)
                best = max(best, val)
        return best


# canonical model ------------------------------------------------------------

@dataclass
class CanonicalModel:
    """The canonical model together with the chain map back to the input model.

    ``chains[c]`` lists ``(original edge, forward)`` pairs traversed in order
    along canonical edge ``c``; ``starts[c]`` the canonical offsets where each
    original edge begins.
    """

    base: TropicalCurve
    curve: TropicalCurve
    chains: dict
    starts: dict = field(default_factory=dict)

    def __post_init__(self):
        self._where = {}
        for c, chain in self.chains.items():
            pos = Q(0)
            self.starts[c] = []
            for eid, fwd in chain:
                self.starts[c].append(pos)
                self._where[eid] = (c, pos, fwd)
                L = self.base.length(eid)
                pos = pos + L if not is_inf(L) else INF

    @property
    def vertex_set(self) -> tuple:
        return self.curve.vertices

    def to_canonical_point(self, p: Point) -> Point:
        if p.vertex is not None and p.vertex in self.curve.incidence:
            return self.curve.point(vertex=p.vertex)
        if p.vertex is not None:
            eid, end = self.base.incidence[p.vertex][0]
            p = Point(edge=eid, offset=self.base.end_offset(eid, end))
        c, start, fwd = self._where[p.edge]
        L = self.base.length(p.edge)
        t = p.offset if fwd else L - p.offset
        return self.curve.point(c, start + t)

    def from_canonical_point(self, p: Point) -> Point:
        if p.vertex is not None:
            return self.base.point(vertex=p.vertex)
        c = p.edge
        for (eid, fwd), start in zip(self.chains[c], self.starts[c]):
            L = self.base.length(eid)
            if start <= p.offset <= start + L:
                t = p.offset - start
                return self.base.point(eid, t if fwd else L - t)
        raise InvalidPoint(f"offset {p.offset} beyond canonical edge {c}")

    def to_canonical_subgraph(self, s: Subgraph) -> Subgraph:
        ivs, verts = [], []
        for v in s.vertices:
            q = self.to_canonical_point(self.base.point(vertex=v))
            if q.vertex is not None:
                verts.append(q.vertex)
            else:
                ivs.append((q.edge, q.offset, q.offset))
        for eid, a, b in s.intervals:
            c, start, fwd = self._where[eid]
            L = self.base.length(eid)
            if fwd:
                ivs.append((c, start + a, start + b if not is_inf(b) else INF))
            else:
                ivs.append((c, start + L - b, start + L - a))
        return self.curve.subgraph(ivs, verts)

    def from_canonical_subgraph(self, s: Subgraph) -> Subgraph:
        verts = list(s.vertices)
        out_iv = []
        for c, a, b in s.intervals:
            for (eid, fwd), start in zip(self.chains[c], self.starts[c]):
                L = self.base.length(eid)
                end = start + L
                lo, hi = max(a, start), min(b, end)
                if lo > hi:
                    continue
                lo, hi = lo - start, hi - start
                if fwd:
                    out_iv.append((eid, lo, hi))
                else:
                    out_iv.append((eid, L - hi, L - lo))
        return self.base.subgraph(out_iv, verts)


def canonical_model(curve: TropicalCurve) -> CanonicalModel:
    """Vertices at points of valence != 2, with the circle and line exceptions."""
    if "canon" in curve._cache:
        return curve._cache["canon"]
    forced = set()
    finite_deg2 = all(curve.degree(v) == 2 for v in curve.finite_vertices)
    if curve.edges and all(curve.degree(v) == 2 for v in curve.vertices):
        first = curve.edges[min(curve.edges)]
        forced.add(first.u)
    elif len(curve.infinite_vertices) == 2 and finite_deg2:
        first = curve.edges[min(e for e, x in curve.edges.items() if x.infinite)]
        forced.add(first.u)
    keep = {v for v in curve.vertices if curve.degree(v) != 2} | forced
    used = set()
    chains: dict = {}
    cedges = []
    for start in sorted(keep):
        for eid, end in list(curve.incidence[start]):
            if eid in used:
                continue
            chain = []
            cur, cur_end = eid, end
            while True:
                used.add(cur)
                chain.append((cur, cur_end == 0))
                e = curve.edges[cur]
                y = e.v if cur_end == 0 else e.u
                if y in keep:
                    break
                nxt = [(f, fe) for f, fe in curve.incidence[y] if f not in used]
                if not nxt:
                    break
                cur, cur_end = nxt[0]
            has_inf = any(curve.edges[c].infinite for c, _ in chain)
            if has_inf and _chain_end(curve, chain, 0) in curve.infinite_vertices:
                chain = [(c, not f) for c, f in reversed(chain)]
            elif not has_inf:
                low = min(chain)[0]
                low_fwd = dict(chain)[low]
                if not low_fwd:
                    chain = [(c, not f) for c, f in reversed(chain)]
            cid = min(c for c, _ in chain)
            cu = _chain_end(curve, chain, 0)
            cv = _chain_end(curve, chain, 1)
            total = Q(0)
            for c, _ in chain:
                L = curve.length(c)
                total = INF if is_inf(L) or is_inf(total) else total + L
            chains[cid] = chain
            cedges.append(Edge(cid, cu, cv, total))
    if not curve.edges:
        chains = {}
    canon = TropicalCurve(sorted(keep) if keep else curve.vertices, cedges)
    cm = CanonicalModel(curve, canon, chains)
    curve._cache["canon"] = cm
    return cm


def _chain_end(curve, chain, which) -> str:
    eid, fwd = chain[0] if which == 0 else chain[-1]
    e = curve.edges[eid]
    if which == 0:
        return e.u if fwd else e.v
    return e.v if fwd else e.u


# contraction of infinite edges --------------------------------------------------

@dataclass
class Contraction:
    """``Γ'`` obtained by deleting every infinite edge and its point at infinity.

    ``removed`` lists ``(edge id, finite end vertex)`` for each component
    ``L_i`` in order; the inclusion ``ι`` is the identity on ids.
    """

    source: TropicalCurve
    curve: TropicalCurve
    removed: list

    @property
    def degenerate(self) -> bool:
        return not self.curve.edges

    def include(self, p: Point) -> Point:
        return p


def contract_infinite_edges(curve: TropicalCurve) -> Contraction:
    removed = [(eid, e.u) for eid, e in curve.edges.items() if e.infinite]
    if not removed:
        return Contraction(curve, curve, [])
    verts = [v for v in curve.vertices if v not in curve.infinite_vertices]
    edges = [e for e in curve.edges.values() if not e.infinite]
    return Contraction(curve, TropicalCurve(verts, edges), removed)
