"""Leaf-end pairings of trees and the compact tree generating set."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import NotATree
from .extended import INF, Q
from .functions import RationalFunction, from_canonical
from .graph import TropicalCurve, canonical_model
from .piecewise import PL


@dataclass
class LeafPairing:
    curve: TropicalCurve              # the canonical curve the pairing lives on
    pairs: list                       # sorted (v, w) with v < w
    paths: dict                       # pair -> list of (edge, forward)
    leftover: Optional[str] = None
    leftover_edge: Optional[str] = None
    rounds: list = field(default_factory=list)   # edge fixed in each improvement round

    def covered(self) -> set:
        return {eid for path in self.paths.values() for eid, _ in path}

    def uncovered(self) -> set:
        return set(self.curve.edges) - self.covered()


def _check_tree(curve: TropicalCurve):
    if curve.genus != 0:
        raise NotATree(f"curve has genus {curve.genus}")
    if not curve.edges:
        raise NotATree("a single point has no leaf ends")


def tree_path(tree: TropicalCurve, a: str, b: str) -> list:
    """The unique path from vertex ``a`` to ``b`` as ``(edge, forward)`` steps."""
    prev = {a: None}
    todo = deque([a])
    while todo:
        x = todo.popleft()
        if x == b:
            break
        for eid, end in tree.incidence[x]:
            e = tree.edges[eid]
            y = e.v if end == 0 else e.u
            if y not in prev:
                prev[y] = (x, eid, end == 0)
                todo.append(y)
    steps = []
    x = b
    while prev[x] is not None:
        x, eid, fwd = prev[x]
        steps.append((eid, fwd))
    return steps[::-1]


def _side(tree: TropicalCurve, eid: str) -> set:
    """Vertices reachable from ``e.u`` once edge ``eid`` is removed."""
    e = tree.edges[eid]
    seen = {e.u}
    todo = [e.u]
    while todo:
        x = todo.pop()
        for f, end in tree.incidence[x]:
            if f == eid:
                continue
            g = tree.edges[f]
            y = g.v if end == 0 else g.u
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def _key(v, w):
    return (v, w) if v < w else (w, v)


def tree_pairing(curve: TropicalCurve) -> LeafPairing:
    _check_tree(curve)
    tree = canonical_model(curve).curve
    leaves = sorted(v for v in tree.vertices if tree.degree(v) == 1)
    leftover = leftover_edge = None
    if len(leaves) % 2:
        leftover = leaves[-1]
        leftover_edge = tree.incidence[leftover][0][0]
        leaves = leaves[:-1]
    pairs = [_key(leaves[i], leaves[i + 1]) for i in range(0, len(leaves), 2)]
    out = LeafPairing(tree, pairs, {p: tree_path(tree, *p) for p in pairs},
                      leftover, leftover_edge)
    while True:
        todo = sorted(out.uncovered() - {leftover_edge})
        if not todo:
            break
        e = todo[0]
        side = _side(tree, e)
        # every current pair sits on one side of e; take one pair from each side
        a = next(p for p in out.pairs if p[0] in side)
        b = next(p for p in out.pairs if p[0] not in side)
        before = len(out.covered())
        (v, v2), (w, w2) = a, b
        new = [_key(v, w), _key(v2, w2)]
        out.pairs = sorted([p for p in out.pairs if p not in (a, b)] + new)
        out.paths = {p: out.paths.get(p) or tree_path(tree, *p) for p in out.pairs}
        out.rounds.append(e)
        assert len(out.covered()) > before
    return out


def _path_function(tree: TropicalCurve, steps: list, start: str) -> RationalFunction:
    """Slope 1 along ``steps`` away from ``start``, constant off the path.

    The value is 0 at the first finite vertex of the path.
    """
    on_path = {eid: fwd for eid, fwd in steps}
    value = {start: Q(0)}
    x = start
    for eid, fwd in steps:
        e = tree.edges[eid]
        y = e.v if fwd else e.u
        if not e.infinite:
            value[y] = value[x] + e.length
        x = y
    if start in tree.infinite_vertices:
        # shift so the first finite vertex of the path has value 0
        first = tree.edges[steps[0][0]]
        base = first.u
        value = {start: None}
        x = base
        value[base] = Q(0)
        for eid, fwd in steps[1:]:
            e = tree.edges[eid]
            y = e.v if fwd else e.u
            if not e.infinite:
                value[y] = value[x] + e.length
            x = y
    # spread values to the rest of the tree
    todo = [v for v, c in value.items() if c is not None]
    while todo:
        x = todo.pop()
        for eid, end in tree.incidence[x]:
            if eid in on_path:
                continue
            e = tree.edges[eid]
            y = e.v if end == 0 else e.u
            if y not in value:
                value[y] = value[x]
                if y not in tree.infinite_vertices:
                    todo.append(y)
    pieces = {}
    for eid, e in tree.edges.items():
        if eid in on_path:
            fwd = on_path[eid]
            if e.infinite:
                # oriented from the finite end; the path enters or leaves through infinity
                entering = start in tree.infinite_vertices and eid == steps[0][0]
                pieces[eid] = PL.linear(INF, value[e.u], -1 if entering else 1)
            else:
                lo = value[e.u]
                pieces[eid] = PL.linear(e.length, lo, 1 if fwd else -1)
        else:
            pieces[eid] = PL.constant(e.length, value[e.u])
    return RationalFunction(tree, pieces)


def _edge_function(tree: TropicalCurve, eid: str, v0: str) -> RationalFunction:
    """Slope 1 on ``eid`` in the direction toward ``v0``'s neighbour, 0 at ``v0``.

    For a point at infinity ``v0`` the slope runs outward instead and the
    value is 0 at the finite end.
    """
    e = tree.edges[eid]
    if v0 in tree.infinite_vertices:
        steps = [(eid, True)]
        start = e.u
    else:
        steps = [(eid, e.u == v0)]
        start = v0
    return _path_function(tree, steps, start)


def tree_generators(curve: TropicalCurve) -> list:
    """One ramp per pair path plus one on the leftover edge, on ``curve``."""
    pairing = tree_pairing(curve)
    tree = pairing.curve
    cm = canonical_model(curve)
    out = []
    for v, w in pairing.pairs:
        steps = pairing.paths[(v, w)]
        out.append(_path_function(tree, steps, v))
    if pairing.leftover is not None:
        out.append(_edge_function(tree, pairing.leftover_edge, pairing.leftover))
    return [from_canonical(f, cm) for f in out]


def count_bound(curve: TropicalCurve) -> int:
    tree = canonical_model(curve).curve
    leaves = sum(1 for v in tree.vertices if tree.degree(v) == 1)
    return (leaves + 1) // 2
