import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from horoteich.kernel import Mat2, UpperHalfPoint
from horoteich import torus as T


def curve(p, q):
    return T.TorusCurve(p, q)


def fol(p, q, w=Fraction(1)):
    return T.WeightedTorusFoliation(w, curve(p, q))


def primitive_pairs(bound):
    for p in range(-bound, bound + 1):
        for q in range(-bound, bound + 1):
            if (p, q) != (0, 0) and math.gcd(abs(p), abs(q)) == 1:
                yield p, q


# ---------------------------------------------------------------------------
# Curves and extremal length


def test_curve_canonical_sign():
    assert curve(-1, 2) == curve(1, -2)
    assert curve(0, -1) == curve(0, 1)
    with pytest.raises(ValueError):
        T.TorusCurve(2, 4)
    with pytest.raises(ValueError):
        T.TorusCurve(0, 0)


def test_boundary_points():
    assert curve(1, 0).boundary_point() == T.INFINITY
    assert curve(0, 1).boundary_point() == 0
    assert curve(1, 2).boundary_point() == Fraction(-1, 2)


def test_extremal_length_closed_forms():
    tau = UpperHalfPoint(0.0, 2.0)
    assert T.extremal_length(tau, fol(1, 0)) == 0.5
    i = UpperHalfPoint(0.0, 1.0)
    assert T.extremal_length(i, fol(1, 1)) == pytest.approx(2.0)
    assert T.extremal_length(i, fol(0, 1)) == pytest.approx(1.0)


def test_extremal_length_weight_scaling():
    tau = UpperHalfPoint(0.4, 1.3)
    base = T.extremal_length(tau, fol(2, 3))
    assert T.extremal_length(tau, fol(2, 3, Fraction(3))) == pytest.approx(9 * base)


def test_intersection_values():
    assert T.intersection(curve(1, 0), curve(0, 1)) == 1
    assert T.intersection(curve(1, 1), curve(1, -1)) == 2
    assert T.intersection(curve(2, 1), curve(2, 1)) == 0


@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9))
def test_intersection_symmetric(p1, q1, p2, q2):
    if math.gcd(abs(p1), abs(q1)) != 1 or math.gcd(abs(p2), abs(q2)) != 1:
        return
    a, b = curve(p1, q1), curve(p2, q2)
    assert T.intersection(a, b) == T.intersection(b, a) >= 0


def test_curve_transform_preserves_ext():
    from horoteich.kernel import mobius_apply

    g = Mat2(2, 1, 1, 1)
    tau = UpperHalfPoint(0.3, 0.8)
    image = mobius_apply(g, tau)
    for p, q in [(1, 0), (0, 1), (3, 2), (5, -2)]:
        c = curve(p, q)
        c2 = T.curve_transform(g, c)
        e1 = T.extremal_length(tau, T.WeightedTorusFoliation(Fraction(1), c))
        e2 = T.extremal_length(image, T.WeightedTorusFoliation(Fraction(1), c2))
        assert e2 == pytest.approx(e1, rel=1e-12)


# ---------------------------------------------------------------------------
# Kerckhoff distance


def test_kerckhoff_vertical_pair():
    r = T.kerckhoff_distance(
        UpperHalfPoint(0.0, 1.0), UpperHalfPoint(0.0, 2.0), tol=1e-9
    )
    assert r.certified
    assert r.value == pytest.approx(0.5 * math.log(2.0), abs=1e-8)
    assert r.closed_form == pytest.approx(0.5 * math.log(2.0), abs=1e-12)


def test_kerckhoff_known_value():
    r = T.kerckhoff_distance(
        UpperHalfPoint(0.0, 1.0), UpperHalfPoint(1.0, 1.0), tol=1e-9
    )
    expected = 0.5 * math.log((3.0 + math.sqrt(5.0)) / 2.0)
    assert r.value == pytest.approx(expected, abs=1e-8)


def test_kerckhoff_symmetric_and_below_oracle():
    a = UpperHalfPoint(-0.7, 0.6)
    b = UpperHalfPoint(1.2, 2.9)
    r1 = T.kerckhoff_distance(a, b, tol=1e-8)
    r2 = T.kerckhoff_distance(b, a, tol=1e-8)
    assert r1.value == pytest.approx(r2.value, abs=1e-7)
    assert r1.value <= r1.closed_form + 1e-12
    assert r1.closed_form == pytest.approx(T.teich_distance(a, b), abs=1e-12)


def test_kerckhoff_budget_exhaustion():
    with pytest.raises(T.EnumerationBudgetError) as info:
        T.kerckhoff_distance(
            UpperHalfPoint(0.0, 1.0), UpperHalfPoint(0.3, 1.4), tol=1e-12, cap=3
        )
    assert info.value.lower_bound > 0


def test_ext_sup_enumeration_matches_closed_form():
    tau = UpperHalfPoint(0.37, 1.21)
    f = fol(2, 3)
    res = T.ext_sup_enumeration(tau, f, tol=1e-9)
    assert res.certified
    exact = T.extremal_length(tau, f)
    # closed form and enumeration agree to float noise on top of tol
    assert res.lower <= exact + 1e-9
    assert res.upper >= exact - 1e-8
    assert res.upper - res.lower <= 1e-9


# ---------------------------------------------------------------------------
# Geodesics, Minsky equality, tangency


def test_geodesic_endpoints_and_minsky_equality():
    f, g = curve(1, 0), curve(0, 1)
    geo = T.geodesic_between(f, g)
    assert geo.endpoint_a == T.INFINITY and geo.endpoint_b == 0
    i2 = T.intersection(f, g) ** 2
    for t in np.linspace(-3, 3, 13):
        pt = geo.point_at(float(t))
        prod = T.extremal_length(pt, fol(1, 0)) * T.extremal_length(pt, fol(0, 1))
        assert prod == pytest.approx(i2, rel=1e-10)


def test_geodesic_unit_speed():
    geo = T.geodesic_between(curve(1, 0), curve(0, 1))
    d = T.teich_distance(geo.point_at(0.0), geo.point_at(1.5))
    assert d == pytest.approx(1.5, abs=1e-9)


def test_minsky_inequality_random():
    rng = np.random.default_rng(7)
    curves = [curve(p, q) for p, q in primitive_pairs(6)]
    for _ in range(300):
        tau = UpperHalfPoint(float(rng.uniform(-2, 2)), float(rng.uniform(0.25, 4)))
        a, b = rng.choice(len(curves), size=2, replace=False)
        ca, cb = curves[a], curves[b]
        lhs = T.intersection(ca, cb) ** 2
        rhs = T.extremal_length(tau, T.WeightedTorusFoliation(Fraction(1), ca)) * (
            T.extremal_length(tau, T.WeightedTorusFoliation(Fraction(1), cb))
        )
        assert lhs <= rhs * (1 + 1e-12) + 1e-12


def test_tangent_point_level():
    f = fol(1, 0)
    g = fol(0, 1)
    pt = T.tangent_point(f, Fraction(1, 2), g)
    assert T.extremal_length(pt, f) == pytest.approx(0.5, abs=1e-10)
    # on the geodesic, Ext(g) = i^2 / Ext(f) = 2
    assert T.extremal_length(pt, g) == pytest.approx(2.0, abs=1e-9)


def test_horocycle_point_lies_on_level_set():
    for p, q in [(1, 0), (0, 1), (2, 3), (3, -1)]:
        f = fol(p, q)
        for level in (Fraction(1, 2), Fraction(2), Fraction(7, 3)):
            for sigma in (-3.0, 0.0, 0.25, 10.0):
                x = T.horocycle_point(f, level, sigma)
                assert T.extremal_length(x, f) == pytest.approx(
                    float(level), rel=1e-9
                )


def test_horocycle_samples_ext_vectorized():
    f, g = fol(1, 0), fol(0, 1)
    sig = np.linspace(-5, 5, 41)
    vals = T.horocycle_samples_ext(f, Fraction(1), g, sig)
    for s, v in zip(sig, vals):
        x = T.horocycle_point(f, Fraction(1), float(s))
        assert v == pytest.approx(T.extremal_length(x, g), rel=1e-12)


def test_horospec_normalization():
    f = T.WeightedTorusFoliation(Fraction(2), curve(1, 0))
    h1 = T.HoroSpec.create(f, Fraction(4))
    h2 = T.HoroSpec.create(fol(1, 0), Fraction(1))
    assert h1 == h2


def test_tangency_examples():
    h1 = T.HoroSpec.create(fol(1, 0), Fraction(1))
    h2 = T.HoroSpec.create(fol(0, 1), Fraction(1))
    assert T.tangency_check(h1, h2)
    h3 = T.HoroSpec.create(fol(0, 1), Fraction(1, 2))
    assert not T.tangency_check(h1, h3)
    pt = T.tangency_point(h1, h2)
    assert T.extremal_length(pt, h1.foliation) == pytest.approx(1.0, abs=1e-10)
    assert T.extremal_length(pt, h2.foliation) == pytest.approx(1.0, abs=1e-10)


def test_triple_tangency_levels():
    assert T.triple_tangency_levels(1, 1, 1) == (1, 1, 1)
    assert T.triple_tangency_levels(2, 3, 6) == (1, 4, 9)
    assert T.triple_tangency_levels(5, 5, 5) == (5, 5, 5)
    with pytest.raises(ValueError):
        T.triple_tangency_levels(0, 1, 1)


@given(
    st.fractions(min_value=Fraction(1, 50), max_value=50),
    st.fractions(min_value=Fraction(1, 50), max_value=50),
    st.fractions(min_value=Fraction(1, 50), max_value=50),
)
def test_triple_tangency_products(a, b, c):
    r, s, t = T.triple_tangency_levels(a, b, c)
    assert r * s == a * a and r * t == b * b and s * t == c * c


# ---------------------------------------------------------------------------
# Ratio-curve search


def test_ratio_curve_examples():
    g = T.ratio_curve_search(curve(1, 0), curve(0, 1), Fraction(1), Fraction(1, 100))
    assert g == curve(1, 1)
    g2 = T.ratio_curve_search(curve(1, 0), curve(0, 1), Fraction(2), Fraction(1, 100))
    assert T.intersection(curve(1, 0), g2) == 2 * T.intersection(curve(0, 1), g2)


def test_ratio_curve_random_targets():
    rng = np.random.default_rng(3)
    a, b = curve(1, 2), curve(1, -1)
    for _ in range(25):
        target = float(rng.uniform(0.1, 10.0))
        g = T.ratio_curve_search(a, b, target, 1e-3)
        ratio = T.intersection(a, g) / T.intersection(b, g)
        assert abs(ratio - target) < 1e-3


# ---------------------------------------------------------------------------
# Equidistance, Busemann, metric balls


def test_equidistance_basic():
    rep = T.equidistance_check(fol(1, 1), Fraction(1), Fraction(4), samples=3)
    assert rep.ok
    assert rep.expected == pytest.approx(0.5 * math.log(4.0))


def test_busemann_closed_vs_limit():
    x0 = UpperHalfPoint(0.0, 1.0)
    f = fol(1, 0)
    for x in [UpperHalfPoint(0.5, 0.7), UpperHalfPoint(-1.2, 2.5)]:
        closed = T.busemann(x0, f, x)
        limit = T.busemann_limit(x0, f, x, tol=1e-8)
        assert limit == pytest.approx(closed, abs=2e-8)


def test_busemann_on_ray():
    x0 = UpperHalfPoint(0.0, 1.0)
    f = fol(1, 0)
    ray, _, _ = T.torus_ray(x0, f)
    assert T.busemann(x0, f, ray(1.25)) == pytest.approx(-1.25, abs=1e-9)
    assert T.busemann(x0, f, x0) == 0.0


def test_ray_distance_stable_at_huge_times():
    x0 = UpperHalfPoint(0.0, 1.0)
    f = fol(1, 0)
    _, m, u0 = T.torus_ray(x0, f)
    minv = m.inverse()
    y = UpperHalfPoint(0.4, 2.0)
    d_small = T.ray_distance_minus_t(minv, u0, y, 30.0)
    d_huge = T.ray_distance_minus_t(minv, u0, y, float(2**20))
    assert math.isfinite(d_huge)
    assert d_huge <= d_small + 1e-9
    assert d_huge == pytest.approx(T.busemann(x0, f, y), abs=1e-6)


def test_metric_ball_limit_small_sample():
    x0 = UpperHalfPoint(0.0, 1.0)
    f = fol(1, 0)
    sample = [UpperHalfPoint(0.3, 2.5), UpperHalfPoint(-0.4, 0.5), UpperHalfPoint(1.0, 1.4)]
    sample = [x for x in sample if abs(T.busemann(x0, f, x)) >= 1e-3]
    rep = T.metric_ball_limit_check(x0, f, sample)
    assert rep.ok and not rep.inconclusive
