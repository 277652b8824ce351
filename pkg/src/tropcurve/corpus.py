"""Named curves used by the tests, the acceptance run and the CLI."""

from __future__ import annotations

from typing import Callable, Dict

from .extended import INF
from .graph import TropicalCurve


def seg4() -> TropicalCurve:
    return TropicalCurve(["u", "v"], [("e", ("u", "v"), 4)])


def loop4() -> TropicalCurve:
    return TropicalCurve(["v"], [("e", ("v", "v"), 4)])


def theta() -> TropicalCurve:
    # u and v joined by three edges of lengths 1, 1, 2
    return TropicalCurve(["u", "v"], [
        ("a", ("u", "v"), 1), ("b", ("u", "v"), 1), ("c", ("u", "v"), 2)])


def star(lengths) -> TropicalCurve:
    leaves = [f"l{i}" for i in range(1, len(lengths) + 1)]
    edges = [(f"e{i}", ("c", leaf), L) for i, (leaf, L) in enumerate(zip(leaves, lengths), 1)]
    return TropicalCurve(["c"] + leaves, edges)


def star3() -> TropicalCurve:
    return star([1, 1, 1])


def star4() -> TropicalCurve:
    return star([1, 1, 1, 1])


def dumbbell() -> TropicalCurve:
    return TropicalCurve(["p", "q"], [
        ("la", ("p", "p"), 2), ("br", ("p", "q"), 1), ("lb", ("q", "q"), 3)])


def seg4_infseg() -> TropicalCurve:
    """SEG4 with an infinite leaf edge attached at ``v``."""
    return TropicalCurve(["u", "v", "w"], [("e", ("u", "v"), 4), ("r", ("v", "w"), INF)])


def infseg() -> TropicalCurve:
    return TropicalCurve(["v", "w"], [("r", ("v", "w"), INF)])


CORPUS: Dict[str, Callable[[], TropicalCurve]] = {
    "seg4": seg4,
    "loop4": loop4,
    "theta": theta,
    "star3": star3,
    "star4": star4,
    "dumbbell": dumbbell,
    "seg4+infseg": seg4_infseg,
}

METRIC_CORPUS = [name for name in CORPUS if name != "seg4+infseg"]


def get(name: str) -> TropicalCurve:
    try:
        return CORPUS[name]()
    except KeyError:
        raise KeyError(f"unknown corpus curve {name!r}; known: {', '.join(CORPUS)}") from None
