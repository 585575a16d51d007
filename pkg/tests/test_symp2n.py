import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sympb import symp2n
from sympb.errors import DegenerateChord, OmegaOutOfRange
from sympb.symp2n import LevelSetBody, WeightedSphere
from sympb.verify import random_sphere_chord


def generic_sphere(a):
    """The weighted sphere through the generic level-set code path."""
    D = np.repeat(np.asarray(a, dtype=float), 2)
    return LevelSetBody(lambda x: float(x @ x), lambda x: 2 * x, lambda x: 2 * np.eye(len(D)), len(D), a)


def test_J_and_omega():
    u = np.array([1.0, 0.0, 0.0, 2.0])
    np.testing.assert_array_equal(symp2n.J(u), [0.0, 1.0, -2.0, 0.0])
    v = np.array([0.0, 1.0, 1.0, 0.0])
    assert symp2n.omega(u, v) == pytest.approx(1.0 - 2.0)
    assert symp2n.omega(u, v, [1.0, 3.0]) == pytest.approx(1.0 - 6.0)
    z = symp2n.to_complex(u)
    np.testing.assert_array_equal(symp2n.to_real(z), u)


def test_closed_form_step_matches_root_finding():
    a = (1.0, 2.0, 3.0)
    table, body = WeightedSphere(a), generic_sphere(a)
    rng = np.random.default_rng(1)
    for _ in range(10):
        Z0, Z1 = random_sphere_chord(table, rng)
        np.testing.assert_allclose(symp2n.step_sphere(table, Z0, Z1), symp2n.step_levelset(body, Z0, Z1), atol=1e-14)


def test_degenerate_chord():
    table = WeightedSphere((1.0, 2.0))
    Z = np.array([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(DegenerateChord):
        symp2n.step_sphere(table, Z, Z)
    with pytest.raises(DegenerateChord):
        symp2n.step_levelset(generic_sphere((1.0, 2.0)), Z, Z)


def test_integrals_conserved_and_equidistant():
    table = WeightedSphere((1.0, 2.0, 3.0))
    Z0, Z1 = random_sphere_chord(table, np.random.default_rng(2))
    orb = symp2n.sphere_orbit(table, Z0, Z1, 2000)
    vals = np.array([symp2n.integrals(table, orb[i], orb[i + 1]) for i in range(len(orb) - 1)])
    assert np.max(np.abs(vals - vals[0])) < 1e-12
    d = np.linalg.norm(np.diff(orb, axis=0), axis=1)
    assert np.ptp(d) < 1e-12
    # I_1 + ... + I_n = <Z_i, Z_{i+1}> is the common chord geometry
    np.testing.assert_allclose(vals[:, :-1].sum(axis=1), 1 - d ** 2 / 2, atol=1e-13)


def test_weighted_omega_not_conserved():
    # <R Z_i, Z_{i+1}> is an integral, the weighted form omega_a(Z_i, Z_{i+1}) is not
    table = WeightedSphere((1.0, 2.0))
    Z0, Z1 = random_sphere_chord(table, np.random.default_rng(3))
    orb = symp2n.sphere_orbit(table, Z0, Z1, 200)
    w = [table.omega(orb[i], orb[i + 1]) for i in range(200)]
    assert np.ptp(w) > 1e-3


def test_hodograph_forward_and_lift():
    table = WeightedSphere((1.0, 2.0))
    rng = np.random.default_rng(4)
    Z0, Z1 = random_sphere_chord(table, rng)
    orb = symp2n.sphere_orbit(table, Z0, Z1, 200)
    assert symp2n.hodo_check(table, orb) < 1e-12
    W = np.array([table.R_inv(Z) for Z in orb[0::2]])
    np.testing.assert_allclose(symp2n.companion_ellipsoid_value(table, W), 1.0, atol=1e-12)
    # the Birkhoff integral is conserved along the independent Birkhoff stepper
    W0 = W[0]
    V0 = symp2n._unit(W[1] - W[0])
    Wb, Vb = symp2n.birkhoff_trajectory(table.a, W0, V0, 50)
    np.testing.assert_allclose(Wb[:20], W[:20], atol=1e-10)
    q = [symp2n.birkhoff_integral(table.a, w, v) for w, v in zip(Wb, Vb)]
    assert np.ptp(q) < 1e-12
    assert symp2n.lift_residual(table, symp2n.lift_birkhoff(table, Wb)) < 1e-12


def test_sphere_explicit_and_two_circles():
    table = WeightedSphere((1.0, 1.0))
    Z0, Z1 = random_sphere_chord(table, np.random.default_rng(5))
    orb = symp2n.sphere_orbit(table, Z0, Z1, 99)
    closed = symp2n.sphere_explicit(Z0, Z1, np.arange(101)[:, None])
    np.testing.assert_allclose(closed, orb, atol=1e-12)
    A, B, al = symp2n.two_circles(symp2n.to_complex(Z0), symp2n.to_complex(Z1))
    for m in range(0, 40, 2):
        assert symp2n.circle_distance(A, B, symp2n.to_complex(orb[m]), 1) < 1e-12
        assert symp2n.circle_distance(A, B, symp2n.to_complex(orb[m + 1]), -1) < 1e-12


def test_sphere_explicit_domain():
    z0 = np.array([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(OmegaOutOfRange):
        symp2n.sphere_explicit(z0, z0, 3)


@pytest.mark.parametrize("q,period", [(5, 10), (6, 6), (7, 14), (8, 8)])
def test_sphere_period(q, period):
    assert symp2n.sphere_period(math.sin(2 * math.pi / q)) == period


def test_extended_precision_orbit():
    table = WeightedSphere((1.0, 1.0))
    Z0, Z1 = random_sphere_chord(table, np.random.default_rng(6))
    ext = symp2n.sphere_orbit(table, Z0, Z1, 999, dtype=np.longdouble)
    closed = symp2n.sphere_explicit(Z0, Z1, np.arange(1001)[:, None])
    assert np.max(np.abs(ext.astype(float) - closed)) < 1e-11


@pytest.mark.parametrize("k", [2, 3, 4, 6, 8])
def test_subspace_bound(k):
    assert symp2n.subspace_bound(k) == (k if k % 2 == 0 else k - 1)


def test_find_periodic_round_sphere_values():
    table = WeightedSphere((1.0, 1.0))
    rng = np.random.default_rng(0)
    for k in (3, 4, 5):
        orb = symp2n.find_periodic(table, k, rng)
        assert symp2n.periodic_residual(table, orb) < 1e-10
        # maximal inscribed k-gon: a regular one in a complex line
        assert symp2n.area_functional(table, orb) == pytest.approx(k * math.sin(2 * math.pi / k), rel=1e-9)


def test_find_periodic_distinct_weights_confined():
    table = WeightedSphere((1.0, 2.0))
    rng = np.random.default_rng(0)
    orb = symp2n.find_periodic(table, 3, rng)
    assert symp2n.periodic_residual(table, orb) < 1e-10
    assert symp2n.subspace_dimension(orb) <= 2


@pytest.mark.parametrize("kind", ["real", "complex"])
def test_find_periodic_quartic(kind):
    body = symp2n.quartic_body(0.1, 4, kind)
    rng = np.random.default_rng(0)
    for k in (2, 3, 4):
        orb = symp2n.find_periodic(body, k, rng)
        assert symp2n.periodic_residual(body, orb) < 1e-8
        np.testing.assert_allclose([body.F(x) for x in orb], 1.0, atol=1e-12)


def test_support_point_and_opposite():
    body = symp2n.quartic_body(0.1, 4, "real")
    u = symp2n._unit(np.array([1.0, 2.0, -0.5, 0.3]))
    x = body.support_point(u)
    assert body.F(x) == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(body.normal(x), u, atol=1e-13)
    np.testing.assert_allclose(body.normal(body.opposite(x)), -u, atol=1e-13)


def test_diameter_orbits_ellipsoid():
    # diameters x and Jx in the complex line of radius sqrt(2) give G = omega(2x, 2Jx) = 8
    body = symp2n.ellipsoid_body((1.0, 2.0))
    orbits = symp2n.find_4periodic_diameters(body, n_starts=8, rng=np.random.default_rng(0))
    for orb in orbits:
        assert symp2n.periodic_residual(body, orb) < 1e-9
    values = sorted({round(symp2n.area_functional(body, o), 8) for o in orbits})
    assert values[-1] == pytest.approx(8.0, rel=1e-9)


def test_diameter_orbits_sphere():
    table = WeightedSphere((1.0, 1.0))
    orbits = symp2n.find_4periodic_diameters(table, n_starts=8, rng=np.random.default_rng(0))
    for orb in orbits:
        z1, z2 = orb[0], orb[1]
        np.testing.assert_allclose(z2, symp2n.J(z1), atol=1e-9)


def test_quartic_real_has_four_diameter_orbits():
    body = symp2n.quartic_body(0.1, 4, "real")
    orbits = symp2n.find_4periodic_diameters(body, n_starts=32, rng=np.random.default_rng(0))
    assert len(orbits) >= 4
    assert max(symp2n.periodic_residual(body, o) for o in orbits) < 1e-10


def test_geodesic_projection():
    for a in ((1.0, 1.0), (1.0, 2.0)):
        A = np.repeat(np.array(a), 2)
        x0 = np.array([0.3, -0.2, 0.5, 0.1])
        x0 = x0 / math.sqrt(np.sum(A * x0 * x0))
        res, drift = symp2n.characteristic_to_geodesic(a, x0, 5.0, 5000, return_drift=True)
        assert res < 1e-8
        assert drift < 1e-10


def test_table_from_dict():
    assert isinstance(symp2n.table_from_dict({"type": "weighted_sphere", "a": [1, 2]}), WeightedSphere)
    body = symp2n.table_from_dict({"type": "level_set_quartic", "eps": 0.1, "dim": 4})
    assert body.dim == 4
    with pytest.raises(ValueError):
        symp2n.table_from_dict({"type": "torus"})


weights = st.lists(st.floats(0.5, 4.0), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(weights, st.integers(0, 10 ** 6))
def test_step_properties(a, seed):
    table = WeightedSphere(a)
    Z0, Z1 = random_sphere_chord(table, np.random.default_rng(seed), margin=1e-2)
    Z2 = symp2n.step_sphere(table, Z0, Z1)
    assert np.linalg.norm(Z2) == pytest.approx(1.0, abs=1e-13)
    assert symp2n.reflection_residual(table, Z0, Z1, Z2) < 1e-12
    np.testing.assert_allclose(symp2n.integrals(table, Z1, Z2), symp2n.integrals(table, Z0, Z1), atol=1e-13)
    assert np.dot(table.R(Z1), Z2) > 0


@settings(max_examples=20, deadline=None)
@given(weights, st.integers(0, 10 ** 6))
def test_hodograph_property(a, seed):
    table = WeightedSphere(a)
    Z0, Z1 = random_sphere_chord(table, np.random.default_rng(seed), margin=1e-2)
    orb = symp2n.sphere_orbit(table, Z0, Z1, 30)
    assert symp2n.hodo_check(table, orb) < 1e-9
