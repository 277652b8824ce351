"""Independent reference computations used by the tests.

Nothing here goes through the piecewise-linear machinery of the package:
distances are brute-forced over simple paths with networkx and chip-firing
values come straight from the definition.
"""

from fractions import Fraction

import networkx as nx

from tropcurve.extended import INF


def _F(x):
    return Fraction(int(x.numerator), int(x.denominator))


def _graph_with(curve, points):
    """Multigraph of the curve with every point of ``points`` inserted as a node."""
    G = nx.MultiGraph()
    cuts = {eid: set() for eid in curve.edges}
    for p in points:
        if p.vertex is None:
            cuts[p.edge].add(_F(p.offset))
    for v in curve.vertices:
        G.add_node(("v", v))
    for eid, e in curve.edges.items():
        if e.infinite:
            # a far point at infinity is never on a finite shortest path
            offs = sorted(cuts[eid])
            nodes = [("v", e.u)] + [("p", eid, t) for t in offs]
            prev_t = Fraction(0)
            for a, b, t in zip(nodes, nodes[1:], offs):
                G.add_edge(a, b, weight=t - prev_t)
                prev_t = t
            continue
        L = _F(e.length)
        offs = sorted(t for t in cuts[eid] if 0 < t < L)
        nodes = [("v", e.u)] + [("p", eid, t) for t in offs] + [("v", e.v)]
        ts = [Fraction(0)] + offs + [L]
        for a, b, t0, t1 in zip(nodes, nodes[1:], ts, ts[1:]):
            G.add_edge(a, b, weight=t1 - t0)
    return G


def _node(p):
    return ("v", p.vertex) if p.vertex is not None else ("p", p.edge, _F(p.offset))


def brute_dist(curve, p, q):
    """Minimum length over all simple paths between ``p`` and ``q``."""
    if p == q:
        return Fraction(0)
    if curve.is_infinite_point(p) or curve.is_infinite_point(q):
        return INF
    G = _graph_with(curve, [p, q])
    best = None
    for path in nx.all_simple_edge_paths(G, _node(p), _node(q)):
        total = sum(G.edges[e]["weight"] for e in path)
        best = total if best is None or total < best else best
    return best


def subgraph_anchors(curve, s):
    """Points of ``s`` that a shortest path from outside can first touch."""
    pts = [curve.point(vertex=v) for v in s.vertices]
    for eid, a, b in s.intervals:
        pts.append(curve.point(eid, a))
        if b != INF:
            pts.append(curve.point(eid, b))
    return pts


def in_subgraph(curve, s, p):
    if p.vertex is not None:
        return p.vertex in s.vertices
    return any(eid == p.edge and a <= p.offset <= b for eid, a, b in s.intervals)


def brute_dist_subgraph(curve, s, p):
    if in_subgraph(curve, s, p):
        return Fraction(0)
    return min(brute_dist(curve, q, p) for q in subgraph_anchors(curve, s))


def cf_value(curve, s, l, p):
    """``-min(dist(s, p), l)`` straight from the definition."""
    d = brute_dist_subgraph(curve, s, p)
    if l == INF:
        return -d if d != INF else -INF
    return -min(d, _F(l)) if d != INF else -_F(l)


def sample_points(curve, n_per_edge=7):
    """Vertices plus evenly spread interior points on every finite edge."""
    pts = [curve.point(vertex=v) for v in curve.vertices if v not in curve.infinite_vertices]
    for eid, e in curve.edges.items():
        L = e.length if not e.infinite else 6
        for k in range(1, n_per_edge + 1):
            pts.append(curve.point(eid, Fraction(k, n_per_edge + 1) * _F(L)))
    return pts
