"""JSON encodings of curves, points, subgraphs, functions and morphisms.

Every rational is a string ``"p/q"`` (or ``"inf"``/``"-inf"``); no floats.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import InvalidCurve, InvalidFunction, InvalidPoint
from .extended import INF, fmt, to_value
from .functions import RationalFunction
from .graph import Point, Subgraph, TropicalCurve
from .morphism import FiniteHarmonicMorphism
from .piecewise import PL


def load_json(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# curves -------------------------------------------------------------------------

def curve_from_json(d: dict) -> TropicalCurve:
    try:
        edges = [(e["id"], tuple(e["ends"]), e["length"]) for e in d["edges"]]
        return TropicalCurve(d["vertices"], edges)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidCurve(f"malformed graph JSON: {exc}") from None


def curve_to_json(c: TropicalCurve) -> dict:
    return {"vertices": list(c.vertices),
            "edges": [{"id": e.id, "ends": [e.u, e.v], "length": fmt(e.length)}
                      for e in c.edges.values()]}


# points and subgraphs ---------------------------------------------------------

def point_from_json(c: TropicalCurve, d) -> Point:
    if isinstance(d, str):
        return parse_point(c, d)
    if "vertex" in d:
        return c.point(vertex=d["vertex"])
    try:
        return c.point(d["edge"], d["offset"])
    except KeyError as exc:
        raise InvalidPoint(f"malformed point JSON: missing {exc}") from None


def parse_point(c: TropicalCurve, text: str) -> Point:
    """``"u"`` for a vertex or ``"e:3/4"`` for an edge offset."""
    if ":" in text:
        eid, off = text.split(":", 1)
        try:
            return c.point(eid, off)
        except (ValueError, ZeroDivisionError):
            raise InvalidPoint(f"bad offset in {text!r}") from None
    return c.point(vertex=text)


def point_to_json(p: Point) -> dict:
    if p.vertex is not None:
        return {"vertex": p.vertex}
    return {"edge": p.edge, "offset": fmt(p.offset)}


def subgraph_from_json(c: TropicalCurve, d: dict) -> Subgraph:
    ivs = [(i["edge"], i["from"], i["to"]) for i in d.get("intervals", [])]
    return c.subgraph(ivs, d.get("vertices", []))


def subgraph_to_json(s: Subgraph) -> dict:
    return {"intervals": [{"edge": e, "from": fmt(a), "to": fmt(b)} for e, a, b in s.intervals],
            "vertices": sorted(s.vertices)}


# functions ----------------------------------------------------------------------

def function_to_json(f: RationalFunction):
    if f.is_neg_inf:
        return "-inf"
    if not f.curve.edges:
        return {"edges": {}, "constant": fmt(f.const)}
    out = {}
    for eid, p in f.pieces.items():
        out[eid] = {"breakpoints": [[fmt(x), fmt(y)] for x, y in zip(p.xs, p.ys)],
                    "terminal_slope": None if p.tail is None else fmt(p.tail)}
    return {"edges": out}


def function_from_json(c: TropicalCurve, d) -> RationalFunction:
    if d == "-inf":
        return RationalFunction.neg_inf(c)
    if not c.edges:
        return RationalFunction.constant(c, d.get("constant", "0"))
    try:
        pieces = {}
        for eid, e in c.edges.items():
            entry = d["edges"][eid]
            pts = [(to_value(x), to_value(y)) for x, y in entry["breakpoints"]]
            tail = entry.get("terminal_slope")
            if e.infinite:
                pieces[eid] = PL.from_points(INF, pts, to_value(tail) if tail is not None else 0)
            else:
                pieces[eid] = PL.from_points(e.length, pts)
        return RationalFunction(c, pieces)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidFunction(f"malformed function JSON: {exc}") from None


# morphisms ----------------------------------------------------------------------

def morphism_from_json(source: TropicalCurve, target: TropicalCurve, d: dict) -> FiniteHarmonicMorphism:
    deg = {k: int(v) for k, v in d.get("deg", {}).items()}
    for eid in source.edges:
        deg.setdefault(eid, 1)
    return FiniteHarmonicMorphism(source, target, dict(d["vertex_map"]), dict(d["edge_map"]),
                                  deg, d.get("degree"))


def morphism_to_json(m: FiniteHarmonicMorphism) -> dict:
    return {"vertex_map": dict(m.vertex_map), "edge_map": dict(m.edge_map),
            "deg": {k: v for k, v in m.deg.items()}}


def error_json(exc: Exception) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    pos = getattr(exc, "position", None)
    if pos is not None:
        out["position"] = pos
    return out
