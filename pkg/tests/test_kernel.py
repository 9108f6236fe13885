import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from horoteich.kernel import (
    Bracket,
    Mat2,
    UpperHalfPoint,
    as_float_down,
    as_float_up,
    hyperbolic_distance,
    is_exact,
    mobius_apply,
)


def test_is_exact():
    assert is_exact(3)
    assert is_exact(Fraction(1, 3))
    assert not is_exact(0.5)


def test_mat2_det_and_inverse():
    m = Mat2(Fraction(2), Fraction(1), Fraction(1), Fraction(1))
    assert m.det() == 1
    assert m.is_unimodular()
    inv = m.inverse()
    prod = m @ inv
    assert (prod.a, prod.b, prod.c, prod.d) == (1, 0, 1 * 0, 1)


def test_mat2_apply():
    m = Mat2(1, 2, 3, 4)
    assert m.apply((1, 1)) == (3, 7)


def test_mat2_singular_inverse_rejected():
    with pytest.raises(ValueError):
        Mat2(1, 2, 2, 4).inverse()


def test_upper_half_point_validation():
    with pytest.raises(ValueError):
        UpperHalfPoint(0.0, -1.0)
    with pytest.raises(ValueError):
        UpperHalfPoint(0.0, 0.0)
    assert UpperHalfPoint(1.0, 2.0).tau == 1 + 2j


def test_mobius_identity_and_translation():
    z = UpperHalfPoint(0.3, 1.7)
    assert mobius_apply(Mat2(1.0, 0.0, 0.0, 1.0), z) == z
    w = mobius_apply(Mat2(1.0, 2.0, 0.0, 1.0), z)
    assert w.x == pytest.approx(2.3) and w.y == pytest.approx(1.7)


def test_mobius_rejects_negative_det():
    with pytest.raises(ValueError):
        mobius_apply(Mat2(1.0, 0.0, 0.0, -1.0), UpperHalfPoint(0.0, 1.0))


def test_hyperbolic_distance_on_imaginary_axis():
    a = UpperHalfPoint(0.0, 1.0)
    b = UpperHalfPoint(0.0, math.e)
    assert hyperbolic_distance(a, b) == pytest.approx(1.0)
    assert hyperbolic_distance(a, a) == 0.0


@given(
    st.floats(-5, 5), st.floats(0.1, 5), st.floats(-5, 5), st.floats(0.1, 5)
)
def test_hyperbolic_distance_symmetric(x1, y1, x2, y2):
    a, b = UpperHalfPoint(x1, y1), UpperHalfPoint(x2, y2)
    assert hyperbolic_distance(a, b) == pytest.approx(hyperbolic_distance(b, a))


def test_mobius_isometry():
    m = Mat2(2.0, 1.0, 1.0, 1.0)
    a = UpperHalfPoint(0.2, 0.9)
    b = UpperHalfPoint(-1.1, 2.4)
    d0 = hyperbolic_distance(a, b)
    d1 = hyperbolic_distance(mobius_apply(m, a), mobius_apply(m, b))
    assert d1 == pytest.approx(d0, abs=1e-12)


def test_bracket_basic():
    b = Bracket(1.0, 2.0)
    assert b.contains(1.5)
    assert not b.contains(2.5)
    with pytest.raises(ValueError):
        Bracket(2.0, 1.0)


def test_bracket_exact_encloses():
    v = Fraction(1, 3)
    b = Bracket.exact(v)
    assert Fraction(b.lo) <= v <= Fraction(b.hi)
    assert b.width < 1e-15


def test_bracket_arithmetic_outward():
    a = Bracket.exact(Fraction(1, 3))
    b = Bracket.exact(Fraction(1, 7))
    s = a + b
    assert Fraction(s.lo) <= Fraction(1, 3) + Fraction(1, 7) <= Fraction(s.hi)
    p = a.mul_nonneg(b)
    assert Fraction(p.lo) <= Fraction(1, 21) <= Fraction(p.hi)
    lg = a.log()
    assert lg.lo <= math.log(1 / 3) <= lg.hi


def test_bracket_infinite_upper():
    b = Bracket(1.0, math.inf)
    assert (b + Bracket.exact(1)).hi == math.inf
    assert b.log().hi == math.inf


def test_rounding_helpers():
    v = Fraction(1, 3)
    assert Fraction(as_float_down(v)) <= v <= Fraction(as_float_up(v))
    assert as_float_down(Fraction(1, 2)) == 0.5 == as_float_up(Fraction(1, 2))
