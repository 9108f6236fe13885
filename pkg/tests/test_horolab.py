import math
from fractions import Fraction

import numpy as np
import pytest

from horoteich.kernel import UpperHalfPoint
from horoteich import horolab as H
from horoteich import origami as O
from horoteich import torus as T


BE = H.TorusBackend()
L = O.build_origami([2, 1, 3], [3, 2, 1])
OB = H.OrigamiBackend(L)


def tspec(p, q, level):
    f = T.WeightedTorusFoliation(Fraction(1), T.TorusCurve(p, q))
    return T.HoroSpec.create(f, Fraction(level))


# ---------------------------------------------------------------------------
# classify


def test_classify_transverse_tags():
    assert H.classify(tspec(1, 0, 1), tspec(0, 1, 1), BE).tag == H.TANGENT
    assert (
        H.classify(tspec(1, 0, Fraction(1, 2)), tspec(0, 1, 1), BE).tag
        == H.DISJOINT_BALLS
    )
    assert H.classify(tspec(1, 0, 2), tspec(0, 1, 1), BE).tag == H.OVERLAPPING


def test_classify_perturbation_flips_tag():
    eps = Fraction(1, 10**6)
    h2 = tspec(0, 1, 1)
    assert H.classify(tspec(1, 0, 1 + eps), h2, BE).tag == H.OVERLAPPING
    assert H.classify(tspec(1, 0, 1 - eps), h2, BE).tag == H.DISJOINT_BALLS


def test_classify_swap_symmetry():
    rng = np.random.default_rng(11)
    curves = [(1, 0), (0, 1), (1, 1), (2, 1), (3, -2)]
    for _ in range(50):
        i1, i2 = rng.choice(len(curves), 2, replace=False)
        l1 = Fraction(int(rng.integers(1, 40)), int(rng.integers(1, 40)))
        l2 = Fraction(int(rng.integers(1, 40)), int(rng.integers(1, 40)))
        h1 = tspec(*curves[i1], l1)
        h2 = tspec(*curves[i2], l2)
        t1 = H.classify(h1, h2, BE).tag
        t2 = H.classify(h2, h1, BE).tag
        swap = {H.NESTED_FORWARD: H.NESTED_BACKWARD, H.NESTED_BACKWARD: H.NESTED_FORWARD}
        assert t2 == swap.get(t1, t1)


def test_classify_parallel_nests_by_level():
    rel = H.classify(tspec(1, 0, 2), tspec(1, 0, 1), BE)
    assert rel.tag == H.NESTED_FORWARD  # smaller ball (second) sits inside
    rel = H.classify(tspec(1, 0, 1), tspec(1, 0, 2), BE)
    assert rel.tag == H.NESTED_BACKWARD


def test_classify_origami_component_nesting():
    fv = O.canonical_vertical_foliation(L)
    comp = O.MulticurveFoliation((fv.components[0],))
    rel = H.classify(H.HoroBall(comp, Fraction(3)), H.HoroBall(fv, Fraction(3)), OB)
    assert rel.tag == H.NESTED_FORWARD
    rel = H.classify(H.HoroBall(fv, Fraction(3)), H.HoroBall(comp, Fraction(3)), OB)
    assert rel.tag == H.NESTED_BACKWARD


def test_classify_origami_transverse():
    fv = O.canonical_vertical_foliation(L)
    fh = O.canonical_horizontal_foliation(L)
    i = OB.intersect(fv, fh)
    assert i > 0
    rel = H.classify(H.HoroBall(fv, i), H.HoroBall(fh, i), OB)
    assert rel.tag == H.TANGENT


# ---------------------------------------------------------------------------
# triple_solve


def test_triple_solve_examples():
    assert H.triple_solve(1, 1, 1) == (1, 1, 1)
    assert H.triple_solve(2, 3, 6) == (1, 4, 9)
    assert H.triple_solve(5, 5, 5) == (5, 5, 5)
    with pytest.raises(ValueError):
        H.triple_solve(0, 1, 1)


# ---------------------------------------------------------------------------
# busemann_estimate


def test_busemann_estimate_trivial_and_on_ray():
    x0 = UpperHalfPoint(0.0, 1.0)
    f = T.WeightedTorusFoliation(Fraction(1), T.TorusCurve(1, 0))
    est = H.busemann_estimate(x0, f, x0, BE, tol=1e-9)
    assert est.certified and abs(est.value) < 1e-9
    ray = BE.ray(x0, f)
    est = H.busemann_estimate(x0, f, ray(0.75), BE, tol=1e-9)
    assert est.certified and est.value == pytest.approx(-0.75, abs=1e-8)


def test_busemann_estimate_matches_closed_form():
    rng = np.random.default_rng(5)
    for _ in range(20):
        x0 = UpperHalfPoint(float(rng.uniform(-2, 2)), float(rng.uniform(0.5, 3)))
        x = UpperHalfPoint(float(rng.uniform(-2, 2)), float(rng.uniform(0.5, 3)))
        f = T.WeightedTorusFoliation(Fraction(1), T.TorusCurve(1, int(rng.integers(-3, 4))))
        est = H.busemann_estimate(x0, f, x, BE, tol=1e-7)
        assert est.certified
        assert est.value == pytest.approx(T.busemann(x0, f, x), abs=2e-7)
        # recorded trace is non-increasing
        ds = [d for _, d in est.trace]
        assert all(b <= a + 1e-9 for a, b in zip(ds, ds[1:]))


# ---------------------------------------------------------------------------
# inclusion_probe


def test_probe_same_foliation_sublevels_nest():
    res = H.inclusion_probe(tspec(1, 0, 1), tspec(1, 0, 2), BE)
    assert res.tag == H.INCLUDED_CERTIFIED
    assert res.bound == 1


def test_probe_transverse_always_excluded():
    res = H.inclusion_probe(tspec(1, 0, 1), tspec(0, 1, 5), BE)
    assert res.tag == H.EXCLUDED_WITNESS
    assert T.extremal_length(res.witness, tspec(0, 1, 5).foliation) > 5


def test_probe_origami_component_bound():
    fv = O.canonical_vertical_foliation(L)
    comp = O.MulticurveFoliation((fv.components[0],))
    full = H.HoroBall(fv, Fraction(2))
    # paper constant: (sum a_i^2) * k * t = 1 * 2 * 2 = 4
    res = H.inclusion_probe(full, H.HoroBall(comp, Fraction(4)), OB)
    assert res.tag == H.INCLUDED_CERTIFIED and res.bound == 4
    low = H.inclusion_probe(full, H.HoroBall(comp, Fraction(1, 100)), OB)
    assert low.tag in (H.EXCLUDED_WITNESS, H.INCONCLUSIVE)


def test_probe_rigidity_randomized():
    """Non-proportional pairs are never certified included (rigidity)."""
    rng = np.random.default_rng(17)
    curves = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (3, 1), (2, -3)]
    tested = 0
    for _ in range(10**4):
        i1, i2 = rng.choice(len(curves), 2, replace=False)
        l1 = Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20)))
        l2 = Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20)))
        res_tag = H.inclusion_probe(
            tspec(*curves[i1], l1), tspec(*curves[i2], l2), BE
        ).tag
        assert res_tag != H.INCLUDED_CERTIFIED
        tested += 1
    assert tested == 10**4


def test_threads_env(monkeypatch):
    monkeypatch.setenv("HOROTEICH_THREADS", "4")
    res = H.inclusion_probe(tspec(1, 0, 1), tspec(0, 1, 5), BE)
    assert res.tag == H.EXCLUDED_WITNESS
    monkeypatch.setenv("HOROTEICH_THREADS", "bogus")
    assert H._threads() == 1
