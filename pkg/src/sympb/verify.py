"""Verification checks producing machine-readable reports.

Each check returns a list of :class:`VerifyReport`.  ``passed`` is derived
from the measured value, the expectation and the comparison mode, never
set by hand.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import curve2d, map2d, polymap, spectrum, symp2n

SCHEMA = "sympb/1"


@dataclass
class VerifyReport:
    check: str
    property: str
    measured: object
    expected: object
    tolerance: float
    mode: str = "abs"  # abs | max | min | set
    passed: bool = field(init=False)
    runtime: float = 0.0

    def __post_init__(self):
        m, e, tol = self.measured, self.expected, self.tolerance
        if self.mode == "abs":
            self.passed = bool(abs(m - e) <= tol)
        elif self.mode == "max":
            self.passed = bool(m <= e + tol)
        elif self.mode == "min":
            self.passed = bool(m >= e - tol)
        elif self.mode == "set":
            self.passed = set(m) == set(e)
        else:
            raise ValueError(self.mode)

    def to_dict(self, timing=False):
        d = asdict(self)
        for key in ("measured", "expected"):
            if isinstance(d[key], (set, frozenset, tuple, list)):
                d[key] = sorted(d[key], key=lambda v: (v is None, v))
            elif isinstance(d[key], (np.floating, np.integer)):
                d[key] = d[key].item()
        if not timing:
            d.pop("runtime")
        return d


def _timed(fn):
    def wrapper(*args, **kw):
        t = time.perf_counter()
        reports = fn(*args, **kw)
        dt = time.perf_counter() - t
        for r in reports:
            r.runtime = dt
        return reports

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_phase_area(curve, rtol=1e-6):
    expected = 4.0 * map2d.symmetrized_area(curve)
    measured = map2d.phase_area(curve)
    return [VerifyReport("phase-area", "phase area = 4 x area of central symmetrization", measured, expected, rtol * expected)]


@_timed
def check_mather(curve=None, seed=0, samples=100, flat_tol=1e-8, neg_bound=-1e-6):
    """Vanishing at a flat point, strict negativity on the circle."""
    curve = curve or curve2d.LpCurve(4)
    t1, t2 = -0.4, 0.0  # t2 at the flat point (1, 0)
    t3 = map2d.third_point(curve, t1, t2)
    flat = map2d.mather_criterion(curve, t1, t2, t3)
    circ = curve2d.circle()
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(samples):
        a = rng.uniform(0, 2 * math.pi)
        b = a + rng.uniform(0.05, math.pi - 0.05)
        c = map2d.third_point(circ, a, b)
        worst = max(worst, map2d.mather_criterion(circ, a, b, c))
    return [
        VerifyReport("mather", "S22 + S11 vanishes at a zero-curvature point", flat, 0.0, flat_tol),
        VerifyReport("mather", "S22 + S11 < 0 on the circle (max over samples)", worst, neg_bound, 0.0, mode="max"),
    ]


@_timed
def check_lazutkin(curve, t=0.3, eps=(0.2, 0.1, 0.05, 0.025)):
    slope, _ = map2d.lazutkin_slope(curve, t, eps)
    return [VerifyReport("lazutkin", "log-log slope of |delta - eps| in [2.8, 3.2]", slope, 3.0, 0.2)]


@_timed
def check_spectrum(curve, n_list=spectrum.DEFAULT_N, rtol=1e-6):
    fit = spectrum.fit_spectrum(curve, n_list)
    area = curve.area()
    return [VerifyReport("spectrum", "fitted a0 equals the enclosed area", fit.a0, area, rtol * area)]


@_timed
def check_ellipse_test(curve, is_ellipse, n_list=spectrum.DEFAULT_N):
    fit = spectrum.fit_spectrum(curve, n_list)
    slack = spectrum.ellipse_test(fit)
    if is_ellipse:
        return [VerifyReport("ellipse-test", "slack 2 pi^2 a0 - 3 a1 vanishes for ellipses", slack, 0.0, 1e-6 * fit.a0)]
    return [VerifyReport("ellipse-test", "slack 2 pi^2 a0 - 3 a1 positive off ellipses", slack, 1e-3 * fit.a0, 0.0, mode="min")]


@_timed
def check_regular_ngon(n, k, samples=100, seed=0):
    expected, periods = polymap.verify_regular(n, k, samples, seed)
    return [VerifyReport("regular-ngon", f"regular {n}-gon, rotation number {k}: all periods equal", sorted(set(periods), key=str), [expected], 0.0, mode="set")]


@_timed
def check_trapezoid(modulus, samples=200, seed=0):
    from fractions import Fraction

    expected, periods = polymap.verify_trapezoid(Fraction(2 * modulus + 1, 2), samples, seed)
    return [VerifyReport("trapezoid", f"trapezoid of modulus {modulus}: periods 16n-4, 16n+4, 16n+12", sorted(set(periods), key=str), sorted(expected), 0.0, mode="set")]


@_timed
def check_radon(p=3.0, samples=50, seed=0, tol=1e-9):
    curve = curve2d.RadonCurve(p)
    rng = np.random.default_rng(seed)
    worst = max(map2d.radon_four_orbit_residual(curve, th) for th in rng.uniform(0, 2 * math.pi, samples))
    return [VerifyReport("radon", "x -> y -> x* -> y* closes on the Radon curve", worst, 0.0, tol, mode="max")]


def random_sphere_chord(table, rng, margin=0.05):
    while True:
        Z0 = rng.normal(size=table.dim)
        Z1 = rng.normal(size=table.dim)
        Z0 /= np.linalg.norm(Z0)
        Z1 /= np.linalg.norm(Z1)
        if np.dot(table.R(Z0), Z1) > margin:
            return Z0, Z1


@_timed
def check_integrals(a=(1.0, 2.0, 3.0), iters=10_000, seed=0):
    table = symp2n.WeightedSphere(a)
    rng = np.random.default_rng(seed)
    Z0, Z1 = random_sphere_chord(table, rng)
    orb = symp2n.sphere_orbit(table, Z0, Z1, iters)
    vals = np.array([symp2n.integrals(table, orb[i], orb[i + 1]) for i in range(len(orb) - 1)])
    drift = float(np.max(np.abs(vals - vals[0])))
    dist = np.linalg.norm(np.diff(orb, axis=0), axis=1)
    return [
        VerifyReport("integrals", "I_1..I_n and J conserved", drift, 0.0, 1e-9, mode="max"),
        VerifyReport("integrals", "consecutive points equidistant", float(np.ptp(dist)), 0.0, 1e-10, mode="max"),
    ]


@_timed
def check_hodo(a=(1.0, 2.0), iters=500, seed=0):
    table = symp2n.WeightedSphere(a)
    rng = np.random.default_rng(seed)
    Z0, Z1 = random_sphere_chord(table, rng)
    orb = symp2n.sphere_orbit(table, Z0, Z1, iters)
    forward = symp2n.hodo_check(table, orb)
    # converse: Birkhoff trajectory in E lifted back
    W0 = rng.normal(size=table.dim)
    W0 /= math.sqrt(symp2n.companion_ellipsoid_value(table, W0))
    A = 1.0 / table.D ** 2
    V0 = rng.normal(size=table.dim)
    if np.dot(A * W0, V0) > 0:
        V0 = -V0
    W, _ = symp2n.birkhoff_trajectory(table.a, W0, V0, iters // 2)
    back = symp2n.lift_residual(table, symp2n.lift_birkhoff(table, W))
    return [
        VerifyReport("hodo", "even points obey the Birkhoff law in E", forward, 0.0, 1e-9, mode="max"),
        VerifyReport("hodo", "lifted Birkhoff trajectory is a symplectic orbit", back, 0.0, 1e-9, mode="max"),
    ]


@_timed
def check_sphere_explicit(n=2, chords=1000, steps=1000, seed=0):
    table = symp2n.WeightedSphere(np.ones(n))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(chords):
        Z0, Z1 = random_sphere_chord(table, rng, margin=1e-3)
        orb = symp2n.sphere_orbit(table, Z0, Z1, steps - 1, dtype=np.longdouble).astype(float)
        m = np.arange(steps + 1)[:, None]
        closed = symp2n.sphere_explicit(Z0, Z1, m)
        worst = max(worst, float(np.max(np.abs(closed - orb))))
    reports = [VerifyReport("sphere-explicit", "closed form matches iteration", worst, 0.0, 1e-11, mode="max")]
    for q in (6, 5):
        al = 2 * math.pi / q
        # generic chord with omega(z0, z1) = sin(alpha): z1 leaves the first
        # complex line, so the orbit uses both circles
        beta = 0.3
        phi = math.asin(math.sin(al) / math.cos(beta))
        Z0 = np.zeros(2 * n)
        Z0[0] = 1.0
        Z1 = np.zeros(2 * n)
        Z1[0], Z1[1], Z1[2] = math.cos(beta) * math.cos(phi), math.cos(beta) * math.sin(phi), math.sin(beta)
        orb = symp2n.sphere_orbit(table, Z0, Z1, 4 * q)
        period = next(p for p in range(1, 4 * q + 1) if np.linalg.norm(orb[p] - orb[0]) < 1e-11 and np.linalg.norm(orb[p + 1] - orb[1]) < 1e-11)
        expected = q if q % 2 == 0 else 2 * q
        reports.append(VerifyReport("sphere-explicit", f"alpha = 2 pi/{q}: period {expected}", period, expected, 0.0))
    return reports


@_timed
def check_subspace(weights=((1.0, 2.0), (1.0, 2.0, 3.0)), seed=0):
    reports = []
    rng = np.random.default_rng(seed)
    for a in weights:
        table = symp2n.WeightedSphere(a)
        n = len(a)
        for k in range(3, 2 * n):
            orb = symp2n.find_periodic(table, k, rng)
            dim = symp2n.subspace_dimension(orb)
            reports.append(VerifyReport("subspace", f"a={list(a)}, k={k}: orbit dimension <= bound", dim, symp2n.subspace_bound(k), 0, mode="max"))
        for j in range(n):
            x = np.zeros(2 * n)
            x[2 * j] = 1.0
            orb = np.array([x, table.opposite(x)])
            reports.append(VerifyReport("subspace", f"a={list(a)}, k=2 coordinate diameter {j}", symp2n.subspace_dimension(orb), 2, 0, mode="max"))
    return reports


@_timed
def check_geodesic(a=(1.0, 2.0), T=10.0, h=1e-3):
    A = np.repeat(np.asarray(a, dtype=float), 2)
    x0 = np.arange(1, len(A) + 1, dtype=float)
    x0 /= math.sqrt(np.sum(A * x0 * x0))
    res, drift = symp2n.characteristic_to_geodesic(a, x0, T, int(round(T / h)), return_drift=True)
    return [
        VerifyReport("geodesic", "projected characteristic is a geodesic", res, 0.0, 1e-8, mode="max"),
        VerifyReport("geodesic", "<Ax, x> conserved along the flow", drift, 0.0, 1e-10, mode="max"),
    ]


def report_document(reports, timing=False):
    return {
        "schema": SCHEMA,
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict(timing) for r in reports],
    }
