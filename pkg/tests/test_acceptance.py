"""The fourteen acceptance criteria at their stated tolerances.

Each test records one PASS/FAIL line, printed in the pytest terminal
summary (or on stdout when this file is run as a script).  Criteria 5 and 6
are expected to fail; the reasons are given in the failure messages.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from sympb import curve2d, map2d, polymap, spectrum, symp2n, verify
from sympb.errors import NonConvexCurve

try:
    from conftest import ACCEPTANCE
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE = []


def record(num, passed, text):
    ACCEPTANCE.append((num, bool(passed), text))
    assert passed, text


def test_c01_phase_area():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    curves = [curve2d.circle(), curve2d.EllipseCurve(2, 1)] + [curve2d.random_fourier_curve(rng) for _ in range(3)]
    worst = 0.0
    for c in curves:
        exact = 4 * map2d.symmetrized_area(c)
        worst = max(worst, abs(map2d.phase_area(c) - exact) / exact)
    dt = time.perf_counter() - t0
    record(1, worst < 1e-6 and dt < 30, f"phase area = 4 Area(sym), max rel err {worst:.2e} (< 1e-6), {dt:.2f} s (< 30 s)")


def test_c02_regular_polygons():
    t0 = time.perf_counter()
    bad = []
    count = 0
    for n in range(3, 13):
        for k in range(1, (n - 1) // 2 + 1):
            expected, periods = polymap.verify_regular(n, k, samples=100, seed=1000 * n + k)
            count += 1
            if set(periods) != {expected}:
                bad.append((n, k, expected, sorted(set(periods), key=str)))
    dt = time.perf_counter() - t0
    exact4 = polymap.regular_polygon(4).exact
    record(2, not bad and exact4 and dt < 120,
           f"{count} (n, k) pairs x 100 starts all at period 2g/4g, mismatches {bad}, n=4 exact: {exact4}, {dt:.1f} s (< 120 s)")


def test_c03_trapezoids():
    t0 = time.perf_counter()
    bad = []
    for m in range(1, 6):
        expected, periods = polymap.verify_trapezoid(Fraction(2 * m + 1, 2), samples=200, seed=m)
        if set(periods) != expected:
            bad.append((m, sorted(expected), sorted(set(periods), key=str)))
    dt = time.perf_counter() - t0
    record(3, not bad and dt < 300, f"moduli 1-5, 200 exact starts each, period sets = {{16n-4, 16n+4, 16n+12}}; mismatches {bad}, {dt:.1f} s (< 300 s)")


def test_c04_circle_spectrum():
    c = curve2d.circle()
    table = curve2d.affine_table(c)
    n_list = spectrum.DEFAULT_N
    areas = [spectrum.max_inscribed_area(c, n, table=table)[0] for n in n_list]
    area_err = max(abs(a - spectrum.circle_polygon_area(n)) for a, n in zip(areas, n_list))
    fit = spectrum.fit_coefficients(n_list, areas)
    e0 = abs(fit.a0 - math.pi)
    e1 = abs(fit.a1 / (2 * math.pi ** 3 / 3) - 1)
    # A_n = a0 - a1/n^2 - a2/n^4: the circle has a2 = -2 pi^5/15
    e2 = abs(abs(fit.a2) / (2 * math.pi ** 5 / 15) - 1)
    ok = area_err < 1e-9 and e0 < 1e-8 and e1 < 1e-3 and e2 < 1e-2 and fit.a2 < 0
    record(4, ok, f"A_n err {area_err:.1e} (< 1e-9), |a0-pi| {e0:.1e} (< 1e-8), a1 rel {e1:.1e} (< 1e-3), |a2| rel {e2:.1e} (< 1e-2), a2 sign -")


def test_c05_ellipse_recognition():
    slacks = []
    for c in (curve2d.circle(), curve2d.EllipseCurve(2, 1)):
        fit = spectrum.fit_spectrum(c)
        slacks.append(spectrum.ellipse_test(fit) / fit.a0)
    conic_ok = all(abs(s) <= 1e-6 for s in slacks)
    try:
        fit = spectrum.fit_spectrum(curve2d.FourierCurve(1.0, [[0, 0], [0, 0], [0.2, 0]]))
        third = spectrum.ellipse_test(fit) / fit.a0
        third_ok = third >= 1e-3
        third_msg = f"p = 1 + 0.2 cos 3a slack/a0 {third:.2e} (>= 1e-3)"
    except NonConvexCurve:
        third_ok = False
        third_msg = "p = 1 + 0.2 cos 3a is not convex (p + p'' = 1 - 1.6 cos 3a changes sign), no inscribed-polygon spectrum"
    record(5, conic_ok and third_ok, f"slack/a0 circle {slacks[0]:.1e}, ellipse {slacks[1]:.1e} (<= 1e-6); {third_msg}")


def test_c06_lazutkin():
    eps = (0.2, 0.1, 0.05, 0.025)
    curves = [
        curve2d.FourierCurve(1.0, [[0, 0], [0, 0], [0.1, 0]]),
        curve2d.FourierCurve(1.0, [[0, 0], [0.05, 0], [0, 0.03]]),
    ]
    slopes = [map2d.lazutkin_slope(c, 0.3, eps)[0] for c in curves]
    circle_max = max(abs(map2d.lazutkin_defect(curve2d.circle(), 0.3, e)) for e in eps)
    ok = all(2.8 <= s <= 3.2 for s in slopes) and circle_max < 1e-12
    record(6, ok, f"log-log slopes {slopes[0]:.3f}, {slopes[1]:.3f} (want [2.8, 3.2]; leading defect term is k'(t) eps^4/30, slope 4); circle max |delta-eps| {circle_max:.1e}")


def test_c07_mather():
    flat, circ = verify.check_mather(curve2d.LpCurve(4), seed=0, samples=100)
    record(7, flat.passed and circ.passed, f"flat point |S22+S11| {abs(flat.measured):.1e} (< 1e-8); circle max {circ.measured:.3e} (< -1e-6)")


def test_c08_radon():
    (rep,) = verify.check_radon(3.0, samples=50, seed=0)
    record(8, rep.passed, f"p=3 Radon curve, 50 samples, max 4-step residual {rep.measured:.1e} (< 1e-9)")


def test_c09_integrals():
    drift, dist = verify.check_integrals((1.0, 2.0, 3.0), 10_000, seed=0)
    record(9, drift.passed and dist.passed, f"a=(1,2,3), 1e4 steps: integral drift {drift.measured:.1e} (< 1e-9), distance spread {dist.measured:.1e} (< 1e-10)")


def test_c10_hodograph():
    fwd, back = verify.check_hodo((1.0, 2.0), 500, seed=0)
    record(10, fwd.passed and back.passed, f"a=(1,2), 500 steps: Birkhoff residual on E {fwd.measured:.1e} (< 1e-9), lift round trip {back.measured:.1e} (< 1e-9)")


def test_c11_sphere_explicit():
    reps = verify.check_sphere_explicit(2, chords=1000, steps=1000, seed=0)
    record(11, all(r.passed for r in reps),
           f"1e3 chords x 1e3 steps closed form vs iteration {reps[0].measured:.1e} (< 1e-11); periods {reps[1].measured} (want 6), {reps[2].measured} (want 10)")


def test_c12_subspace():
    reps = verify.check_subspace(((1.0, 2.0), (1.0, 2.0, 3.0)), seed=0)
    bad = [r.property for r in reps if not r.passed]
    record(12, not bad, f"{len(reps)} orbits on a=(1,2), (1,2,3) within the dimension bound; violations {bad}")


def test_c13_periodic_existence():
    body = symp2n.quartic_body(0.1, 4, "real")
    rng = np.random.default_rng(0)
    res = {}
    for k in range(2, 9):
        res[k] = symp2n.periodic_residual(body, symp2n.find_periodic(body, k, rng))
    orbits = symp2n.find_4periodic_diameters(body, n_starts=64, rng=np.random.default_rng(0))
    worst = max(res.values())
    record(13, worst < 1e-8 and len(orbits) >= 4,
           f"quartic body in R^4: k=2..8 max residual {worst:.1e} (< 1e-8); {len(orbits)} distinct diameter 4-orbits (>= 4)")


def test_c14_odd_period_neighbours():
    poly, start = polymap.odd_orbit_example()
    p = polymap.detect_period(poly, start, 100)
    hist = polymap.neighborhood_census(poly, start, Fraction(1, 100), samples=100, seed=0)
    ok = p is not None and p % 2 == 1 and dict(hist) == {4 * p: 100}
    record(14, ok, f"odd orbit of period {p}; periods of 100 neighbours {dict(hist)} (want all {4 * (p or 0)})")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                pass
    for num, passed, text in sorted(ACCEPTANCE):
        print(f"{'PASS' if passed else 'FAIL'} criterion {num:2d}: {text}")
