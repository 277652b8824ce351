from fractions import Fraction as F

import pytest

from tropcurve.errors import IndeterminateAtInfinity
from tropcurve.extended import (INF, NEG_INF, Q, ceil_div, fmt, to_value, trop_add_scalar,
                                trop_mul_scalar)


@pytest.mark.parametrize("text,value", [("3/4", F(3, 4)), ("-2", -2), (" 5 ", 5), ("6/8", F(3, 4))])
def test_parse_rationals(text, value):
    assert to_value(text) == value


def test_parse_infinities():
    assert to_value("inf") == INF and to_value("-inf") == NEG_INF


def test_rejects_floats_and_bools():
    with pytest.raises(TypeError):
        to_value(0.5)
    with pytest.raises(TypeError):
        to_value(True)


@pytest.mark.parametrize("value,text", [(Q(3, 4), "3/4"), (Q(-8, 4), "-2"), (INF, "inf"),
                                        (NEG_INF, "-inf"), (F(1, 3), "1/3")])
def test_format(value, text):
    assert fmt(value) == text
    assert to_value(text) == value


def test_scalar_semifield():
    assert trop_add_scalar(Q(1), Q(2)) == 2
    assert trop_add_scalar(NEG_INF, Q(2)) == 2
    assert trop_mul_scalar(Q(1), Q(2)) == 3
    assert trop_mul_scalar(NEG_INF, Q(2)) == NEG_INF


def test_opposite_infinities_have_no_product():
    with pytest.raises(IndeterminateAtInfinity):
        trop_mul_scalar(INF, NEG_INF)


@pytest.mark.parametrize("a,b,c", [(7, 2, 4), (6, 2, 3), (Q(1, 2), Q(1, 3), 2), (-3, 2, -1)])
def test_ceil_div(a, b, c):
    assert ceil_div(Q(a), Q(b)) == c
