import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sympb import curve2d, map2d
from sympb.curve2d import EllipseCurve, FourierCurve, LpCurve, circle
from sympb.errors import BoundaryChord

TREFOIL = FourierCurve(1.0, [[0, 0], [0, 0], [0.1, 0]])


def test_circle_step_is_rotation():
    c = circle()
    for t1, t2 in [(0.0, 1.0), (2.0, 2.3), (-1.0, 1.5)]:
        assert map2d.third_point(c, t1, t2) == pytest.approx(2 * t2 - t1, abs=1e-13)


def test_ellipse_step_is_affine_rotation():
    # the ellipse is diag(a, b) applied to the circle; the map commutes with it
    a, b = 2.0, 1.0
    e = EllipseCurve(a, b)
    theta = lambda x: math.atan2(x[1] / b, x[0] / a)
    for t1, t2 in [(0.0, 1.0), (0.5, 2.0), (3.0, 3.4)]:
        t3 = map2d.third_point(e, t1, t2)
        th3 = 2 * theta(e.point(t2)) - theta(e.point(t1))
        np.testing.assert_allclose(e.point(t3), [a * math.cos(th3), b * math.sin(th3)], atol=1e-12)


def test_reflection_residual_small():
    for t1, t2 in [(0.0, 1.0), (1.0, 3.0), (4.0, 4.2)]:
        t3 = map2d.third_point(TREFOIL, t1, t2)
        assert map2d.reflection_residual(TREFOIL, t1, t2, t3) < 1e-13
        assert t2 < t3 < TREFOIL.opposite(t2)


def test_boundary_chord_rejected():
    c = circle()
    with pytest.raises(BoundaryChord):
        map2d.third_point(c, 0.0, math.pi)
    with pytest.raises(BoundaryChord):
        map2d.make_chord(c, 0.0, 0.0)


def test_phase_area_ellipse_value():
    assert map2d.phase_area(EllipseCurve(2, 1)) == pytest.approx(8 * math.pi, rel=1e-12)
    assert map2d.phase_area(circle()) == pytest.approx(4 * math.pi, rel=1e-12)


def test_phase_area_non_symmetric():
    c = FourierCurve(1.0, [[0.05, 0.03], [0.02, 0.0], [0.0, 0.03]])
    # odd harmonics do not contribute to the symmetrization
    s = FourierCurve(1.0, [[0, 0], [0.02, 0.0], [0, 0]])
    assert map2d.phase_area(c) == pytest.approx(4 * s.area(), rel=1e-10)
    assert map2d.phase_area(c) == pytest.approx(4 * map2d.symmetrized_area(c), rel=1e-10)


def test_invariant_form_preserved():
    for t1, t2 in [(0.1, 1.0), (2.0, 3.5)]:
        assert map2d.invariant_form_defect(TREFOIL, t1, t2) < 1e-8


def test_polygon_image_area_preserved():
    # a small square in phase space and its image have equal invariant area
    c0 = np.array([0.4, 1.6])
    h = 0.05
    sq = c0 + h * np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    edges = []
    for p, q in zip(sq, np.roll(sq, -1, axis=0)):
        for s in np.linspace(0, 1, 40, endpoint=False):
            edges.append(p + s * (q - p))
    edges = np.array(edges)
    img = np.array([[t2, map2d.third_point(TREFOIL, t1, t2)] for t1, t2 in edges])
    before = map2d.weighted_polygon_area(TREFOIL, sq)
    # the image boundary is curved: integrate over a fine polygon
    after = map2d.weighted_polygon_area(TREFOIL, img)
    assert after == pytest.approx(before, rel=1e-5)


def test_generating_function_derivatives():
    # d/dt2 [S(t1, t2) + S(t2, t3)] = 0 along an orbit
    t1, t2 = 0.3, 1.4
    t3 = map2d.third_point(TREFOIL, t1, t2)
    h = 1e-6
    F = lambda s: map2d.generating_function(TREFOIL, t1, s) + map2d.generating_function(TREFOIL, s, t3)
    assert abs((F(t2 + h) - F(t2 - h)) / (2 * h)) < 1e-8


def test_twist_density_positive():
    t1 = np.linspace(0, 6, 20)
    t2 = t1 + 0.7
    assert np.all(map2d.invariant_density(TREFOIL, t1, t2) > 0)


def test_lazutkin_defect_leading_term():
    # delta - eps = k'(t) eps^4 / 30 + O(eps^5) in the affine parameter
    table = curve2d.affine_table(TREFOIL)
    t, h = 0.3, 1e-4
    kp = (table.affine_curvature(t + h) - table.affine_curvature(t - h)) / (2 * h)
    eps = 0.025
    d = map2d.lazutkin_defect(TREFOIL, t, eps, table)
    assert d / eps ** 4 == pytest.approx(kp / 30, rel=5e-3)
    assert kp / 30 == pytest.approx(-0.62820, rel=1e-4)


def test_lazutkin_vanishes_for_conics():
    for c in (circle(), EllipseCurve(2, 1)):
        for eps in (0.2, 0.1, 0.05):
            assert abs(map2d.lazutkin_defect(c, 0.3, eps)) < 1e-13


def test_mather_flat_point_and_circle():
    c = LpCurve(4)
    t3 = map2d.third_point(c, -0.4, 0.0)
    assert abs(map2d.mather_criterion(c, -0.4, 0.0, t3)) < 1e-8
    circ = circle()
    assert map2d.mather_criterion(circ, 0.0, 1.0, 2.0) == pytest.approx(-2 * math.sin(1.0) * 1.0, rel=1e-12)


def test_iterate_and_period_on_square_like_orbit():
    # the circle chord of angle 2 pi / 5 closes after 5 steps
    rec = map2d.iterate(circle(), 0.0, 2 * math.pi / 5, 12)
    assert rec.period == 5
    assert not rec.hit_boundary
    np.testing.assert_allclose(rec.actions, math.sin(2 * math.pi / 5), atol=1e-14)


def test_portrait_deterministic_and_parallel_consistent():
    seeds = [(0.0, 0.5), (1.0, 2.0)]
    a = map2d.portrait(TREFOIL, seeds, 20, workers=1)
    b = map2d.portrait(TREFOIL, seeds, 20, workers=2)
    for ra, rb in zip(a, b):
        assert ra.params == rb.params


def test_radon_four_periodic():
    r = curve2d.RadonCurve(3.0)
    for th in (0.2, 1.0, 2.4, 4.0, 5.5):
        assert map2d.radon_four_orbit_residual(r, th) < 1e-9


@st.composite
def phase_points(draw):
    t1 = draw(st.floats(0, 2 * math.pi))
    frac = draw(st.floats(0.02, 0.98))
    return t1, t1 + frac * math.pi


@settings(max_examples=40, deadline=None)
@given(phase_points())
def test_step_properties(pt):
    t1, t2 = pt
    t3 = map2d.third_point(TREFOIL, t1, t2)
    assert t2 < t3 < t2 + math.pi
    assert map2d.reflection_residual(TREFOIL, t1, t2, t3) < 1e-12
    # positivity is inherited by the image chord
    assert map2d.positivity(TREFOIL, t2, t3) > 0
    # time reversal: stepping back from (t3, t2) lands on t1
    back = map2d.third_point(_Reversed(TREFOIL), -t3, -t2)
    assert -back == pytest.approx(t1, abs=1e-11)


@settings(max_examples=20, deadline=None)
@given(phase_points())
def test_invariant_density_preserved_property(pt):
    assert map2d.invariant_form_defect(TREFOIL, *pt) < 1e-6


class _Reversed(curve2d.ConvexCurve):
    """The same curve traversed backwards, parameter ``-t``; orientation flips
    so it is mirrored to stay positively oriented."""

    def __init__(self, c):
        self.c = c

    def point(self, t):
        x = self.c.point(-np.asarray(t))
        return x * np.array([1.0, -1.0])

    def velocity(self, t):
        return -self.c.velocity(-np.asarray(t)) * np.array([1.0, -1.0])

    def acceleration(self, t):
        return self.c.acceleration(-np.asarray(t)) * np.array([1.0, -1.0])
