"""Exact extended rationals: GMP rationals plus the two infinities.

Finite values are ``gmpy2.mpq`` (exact, and much faster than ``Fraction``,
with which it interoperates).  Infinities are the float values ``math.inf`` /
``-math.inf``; they compare correctly against rationals and never enter
arithmetic with finite breakpoint data.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from gmpy2 import mpq as Q

from .errors import IndeterminateAtInfinity

INF = math.inf
NEG_INF = -math.inf

QType = type(Q())
Value = Union[QType, float]


def is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def to_value(x) -> Value:
    """Coerce ints, rationals, rational strings and ``"inf"`` spellings."""
    if isinstance(x, QType):
        return x
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    if isinstance(x, bool):
        raise TypeError("booleans are not values")
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError(f"floats are not exact: {x!r}")
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "∞"):
            return INF
        if s in ("-inf", "-infinity", "-∞"):
            return NEG_INF
        f = Fraction(s)
        return Q(f.numerator, f.denominator)
    raise TypeError(f"cannot interpret {x!r} as an extended rational")


def fmt(x: Value) -> str:
    """Render a value as the canonical string used in files."""
    if is_inf(x):
        return "inf" if x > 0 else "-inf"
    x = to_value(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def trop_add_scalar(a: Value, b: Value) -> Value:
    return a if a >= b else b


def trop_mul_scalar(a: Value, b: Value) -> Value:
    """Tropical product of two extended scalars.

    ``-inf`` absorbs; ``+inf`` meeting ``-inf`` has no meaning for bare
    scalars and raises.
    """
    if is_inf(a) and is_inf(b) and a != b:
        raise IndeterminateAtInfinity("+inf and -inf met in a scalar product")
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


def ceil_div(a, b) -> int:
    return math.ceil(Q(a) / Q(b))
