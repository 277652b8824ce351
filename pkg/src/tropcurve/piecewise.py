"""Continuous piecewise-linear functions on ``[0, L]`` or ``[0, inf]``.

A :class:`PL` stores sorted breakpoints ``xs`` (always starting at 0) with
values ``ys``.  On a bounded interval the last breakpoint is ``L``.  On
``[0, inf]`` the last breakpoint is finite and ``tail`` is the slope used
beyond it; the value at infinity is the limit.

Slopes are arbitrary rationals here; integrality is enforced one level up.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .extended import INF, NEG_INF, Q, Value

_ZERO = Q(0)


@dataclass(frozen=True)
class PL:
    xs: tuple
    ys: tuple
    tail: Optional[Q] = None

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or not self.xs:
            raise ValueError("breakpoint offsets and values must be nonempty and aligned")
        if self.xs[0] != 0:
            raise ValueError("first breakpoint must be at offset 0")
        for a, b in zip(self.xs, self.xs[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        if self.tail is None and len(self.xs) < 2:
            raise ValueError("a bounded piece needs both endpoints")

    # construction ---------------------------------------------------------

    @staticmethod
    def _make(xs: tuple, ys: tuple, tail=None) -> "PL":
        """Trusted constructor for results of internal operations."""
        out = object.__new__(PL)
        object.__setattr__(out, "xs", xs)
        object.__setattr__(out, "ys", ys)
        object.__setattr__(out, "tail", tail)
        return out

    @classmethod
    def constant(cls, length: Value, c: Q) -> "PL":
        if length == INF:
            return cls((_ZERO,), (Q(c),), _ZERO)
        return cls((_ZERO, Q(length)), (Q(c), Q(c)))

    @classmethod
    def linear(cls, length: Value, start: Q, slope: Q) -> "PL":
        start, slope = Q(start), Q(slope)
        if length == INF:
            return cls((_ZERO,), (start,), slope)
        length = Q(length)
        return cls((_ZERO, length), (start, start + slope * length))

    @classmethod
    def from_points(cls, length: Value, points: Iterable, tail=None) -> "PL":
        """Build from (offset, value) pairs, dropping exact duplicates."""
        pts = sorted((Q(x), Q(y)) for x, y in points)
        xs, ys = [], []
        for x, y in pts:
            if xs and xs[-1] == x:
                if ys[-1] != y:
                    raise ValueError(f"two values at offset {x}")
                continue
            xs.append(x)
            ys.append(y)
        if length == INF:
            return cls(tuple(xs), tuple(ys), Q(tail if tail is not None else 0))
        return cls(tuple(xs), tuple(ys))

    # basic queries --------------------------------------------------------

    @property
    def infinite(self) -> bool:
        return self.tail is not None

    @property
    def length(self) -> Value:
        return INF if self.infinite else self.xs[-1]

    def at(self, t: Value) -> Value:
        if t == INF:
            if not self.infinite:
                raise ValueError("offset inf on a bounded piece")
            if self.tail > 0:
                return INF
            if self.tail < 0:
                return NEG_INF
            return self.ys[-1]
        t = Q(t)
        if t < 0 or (not self.infinite and t > self.xs[-1]):
            raise ValueError(f"offset {t} outside [0, {self.length}]")
        if t >= self.xs[-1]:
            return self.ys[-1] + (self.tail or 0) * (t - self.xs[-1])
        i = bisect_right(self.xs, t) - 1
        if self.xs[i] == t:
            return self.ys[i]
        x0, x1, y0, y1 = self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]
        return y0 + (y1 - y0) * (t - x0) / (x1 - x0)

    def slopes(self) -> list:
        return [(y1 - y0) / (x1 - x0)
                for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:])]

    def all_slopes(self) -> list:
        s = self.slopes()
        if self.infinite:
            s.append(self.tail)
        return s

    def start_slope(self) -> Q:
        """Slope leaving offset 0 toward increasing offsets."""
        s = self.slopes()
        return s[0] if s else self.tail

    def end_slope(self) -> Q:
        """Slope arriving at the far end (bounded pieces only)."""
        return self.slopes()[-1]

    @property
    def start_value(self) -> Q:
        return self.ys[0]

    @property
    def end_value(self) -> Value:
        return self.at(INF) if self.infinite else self.ys[-1]

    # refinement and pointwise arithmetic ----------------------------------

    def _check_same_domain(self, other: "PL"):
        if self.infinite != other.infinite or (not self.infinite and self.xs[-1] != other.xs[-1]):
            raise ValueError("pieces live on different intervals")

    def refine(self, offsets: Iterable) -> "PL":
        extra = {Q(t) for t in offsets if t != INF}
        xs = sorted(set(self.xs) | {t for t in extra
                                    if 0 <= t and (self.infinite or t <= self.xs[-1])})
        return PL._make(tuple(xs), tuple(self.sample(xs)), self.tail)

    def sample(self, xs) -> list:
        """Values at increasing offsets ``xs`` in one pass."""
        out = []
        px, py = self.xs, self.ys
        n = len(px)
        i = 0
        for t in xs:
            while i + 1 < n and px[i + 1] <= t:
                i += 1
            if px[i] == t:
                out.append(py[i])
            elif i + 1 < n:
                out.append(py[i] + (py[i + 1] - py[i]) * (t - px[i]) / (px[i + 1] - px[i]))
            else:
                out.append(py[i] + self.tail * (t - px[i]))
        return out

    def _combine(self, other: "PL", op: Callable) -> "PL":
        self._check_same_domain(other)
        if self.xs == other.xs:
            xs = self.xs
            ys = tuple(op(a, b) for a, b in zip(self.ys, other.ys))
        else:
            xs = sorted(set(self.xs) | set(other.xs))
            ys = tuple(op(a, b) for a, b in zip(self.sample(xs), other.sample(xs)))
        tail = op(self.tail, other.tail) if self.infinite else None
        return PL._make(tuple(xs), ys, tail).simplify()

    def __add__(self, other: "PL") -> "PL":
        return self._combine(other, lambda a, b: a + b)

    def __neg__(self) -> "PL":
        return PL._make(self.xs, tuple(-y for y in self.ys),
                  None if self.tail is None else -self.tail)

    def __sub__(self, other: "PL") -> "PL":
        return self + (-other)

    def shift(self, c: Q) -> "PL":
        c = Q(c)
        return PL._make(self.xs, tuple(y + c for y in self.ys), self.tail)

    def scale(self, k) -> "PL":
        k = Q(k)
        if k == 0:
            return PL.constant(self.length, _ZERO)
        return PL._make(self.xs, tuple(k * y for y in self.ys),
                  None if self.tail is None else k * self.tail)

    def maximum(self, other: "PL") -> "PL":
        self._check_same_domain(other)
        xs = sorted(set(self.xs) | set(other.xs))
        ya, yb = self.sample(xs), other.sample(xs)
        diff = [a - b for a, b in zip(ya, yb)]
        if all(d >= 0 for d in diff) and (not self.infinite or self.tail >= other.tail):
            return self
        if all(d <= 0 for d in diff) and (not self.infinite or other.tail >= self.tail):
            return other
        out_x, out_y = [], []
        for i, x in enumerate(xs):
            if i:
                d0, d1 = diff[i - 1], diff[i]
                if d0 * d1 < 0:
                    x0 = xs[i - 1]
                    c = x0 + (x - x0) * d0 / (d0 - d1)
                    out_x.append(c)
                    out_y.append(ya[i - 1] + (ya[i] - ya[i - 1]) * (c - x0) / (x - x0))
            out_x.append(x)
            out_y.append(ya[i] if diff[i] >= 0 else yb[i])
        tail = None
        if self.infinite:
            last = xs[-1]
            d = diff[-1]
            ds = self.tail - other.tail
            if d * ds < 0:
                c = last - d / ds
                out_x.append(c)
                out_y.append(ya[-1] + self.tail * (c - last))
            tail = self.tail if ds > 0 or (ds == 0 and d >= 0) else other.tail
        return PL._make(tuple(out_x), tuple(out_y), tail).simplify()

    def minimum(self, other: "PL") -> "PL":
        return -((-self).maximum(-other))

    def simplify(self) -> "PL":
        """Drop interior breakpoints where the slope does not change."""
        xs, ys = self.xs, self.ys
        n = len(xs)
        if n <= 2 and not self.infinite:
            return self
        keep_x, keep_y = [xs[0]], [ys[0]]
        slopes = [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(n - 1)]
        for i in range(1, n - 1):
            if slopes[i - 1] != slopes[i]:
                keep_x.append(xs[i])
                keep_y.append(ys[i])
        if len(xs) > 1:
            keep_x.append(xs[-1])
            keep_y.append(ys[-1])
        if self.infinite and len(keep_x) > 1:
            s_in = (keep_y[-1] - keep_y[-2]) / (keep_x[-1] - keep_x[-2])
            if s_in == self.tail:
                keep_x.pop()
                keep_y.pop()
        return PL._make(tuple(keep_x), tuple(keep_y), self.tail)

    # geometry of level sets -----------------------------------------------

    def level(self, c: Q) -> list:
        """Offsets where the value equals ``c`` (flat pieces give their ends)."""
        c = Q(c)
        out = set()
        for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:]):
            if y0 == c:
                out.add(x0)
            if y1 == c:
                out.add(x1)
            if (y0 - c) * (y1 - c) < 0:
                out.add(x0 + (x1 - x0) * (c - y0) / (y1 - y0))
        if self.ys[-1] == c:
            out.add(self.xs[-1])
        if self.infinite and self.tail != 0 and (c - self.ys[-1]) / self.tail > 0:
            out.add(self.xs[-1] + (c - self.ys[-1]) / self.tail)
        return sorted(out)

    def sublevel(self, c: Q) -> list:
        """Closed intervals ``[a, b]`` where the value is at most ``c``.

        ``b`` may be ``INF`` on an unbounded piece that stays below ``c``.
        """
        c = Q(c)
        pts = sorted(set(self.xs) | set(self.level(c)))
        ref = self.refine(pts)
        intervals: list = []

        def push(a, b):
            if intervals and intervals[-1][1] >= a:
                intervals[-1] = (intervals[-1][0], max(intervals[-1][1], b))
            else:
                intervals.append((a, b))

        for i, (x, y) in enumerate(zip(ref.xs, ref.ys)):
            if y <= c:
                push(x, x)
            if i + 1 < len(ref.xs):
                mid = (x + ref.xs[i + 1]) / 2
                if ref.at(mid) <= c:
                    push(x, ref.xs[i + 1])
        if self.infinite:
            last_x, last_y = ref.xs[-1], ref.ys[-1]
            if self.tail < 0 or (self.tail == 0 and last_y <= c):
                push(last_x, INF)
            elif self.tail > 0 and last_y < c:
                push(last_x, last_x + (c - last_y) / self.tail)
        return intervals

    def argmax_intervals(self) -> tuple:
        """Maximum value and the closed intervals where it is attained."""
        if self.infinite and self.tail > 0:
            return INF, [(INF, INF)]
        m = max(self.ys)
        return m, self.sublevel_ge(m)

    def sublevel_ge(self, c: Q) -> list:
        return [(a, b) for a, b in (-self).sublevel(-c)]

    # reparametrisation ----------------------------------------------------

    def restrict(self, a: Q, b: Value) -> "PL":
        """The piece on ``[a, b]`` re-based to start at offset 0."""
        a = Q(a)
        if b == INF:
            xs = [a] + [x for x in self.xs if x > a]
            return PL._make(tuple(x - a for x in xs), tuple(self.at(x) for x in xs), self.tail).simplify()
        b = Q(b)
        xs = [a] + [x for x in self.xs if a < x < b] + [b]
        return PL._make(tuple(x - a for x in xs), tuple(self.at(x) for x in xs)).simplify()

    def reversed(self) -> "PL":
        if self.infinite:
            raise ValueError("cannot reverse an unbounded piece")
        L = self.xs[-1]
        return PL._make(tuple(L - x for x in reversed(self.xs)), tuple(reversed(self.ys)))

    def concat(self, other: "PL") -> "PL":
        if self.infinite:
            raise ValueError("nothing can follow an unbounded piece")
        if self.ys[-1] != other.ys[0]:
            raise ValueError("pieces do not join continuously")
        L = self.xs[-1]
        xs = self.xs + tuple(L + x for x in other.xs[1:])
        ys = self.ys + other.ys[1:]
        return PL._make(xs, ys, other.tail).simplify()

    def stretch(self, k) -> "PL":
        """Reparametrise ``t -> t / k``: the domain grows by the factor ``k``."""
        k = Q(k)
        return PL._make(tuple(x * k for x in self.xs), self.ys,
                  None if self.tail is None else self.tail / k)

    def compare(self, other: "PL") -> tuple:
        """Exact comparison on the common refinement.

        Returns ``(equal, offsets_checked, first_mismatch_offset)``.
        """
        self._check_same_domain(other)
        xs = sorted(set(self.xs) | set(other.xs))
        for x in xs:
            if self.at(x) != other.at(x):
                return False, len(xs), x
        if self.infinite and self.tail != other.tail:
            return False, len(xs), INF
        return True, len(xs), None


def lower_envelope(pieces: list) -> PL:
    out = pieces[0]
    for p in pieces[1:]:
        out = out.minimum(p)
    return out


def upper_envelope(pieces: list) -> PL:
    out = pieces[0]
    for p in pieces[1:]:
        out = out.maximum(p)
    return out
