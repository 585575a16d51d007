"""The planar symplectic billiard map.

A phase point is a chord ``(t1, t2)`` of boundary parameters with
``omega(nu(t1), nu(t2)) > 0``.  The image is ``(t2, t3)`` where
``gamma(t3) - gamma(t1)`` is parallel to the tangent at ``t2``.
Parameters are kept lifted to the real line, so an orbit is an increasing
sequence ``t0 < t1 < t2 < ...``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .curve2d import (
    TWO_PI,
    AffineTable,
    ConvexCurve,
    SupportCurve,
    affine_table,
    cross,
    quad,
    symmetrization,
)
from .errors import BoundaryChord, RootBracketFailure

POSITIVITY_TOL = 1e-9
PARAM_TOL = 1e-14


@dataclass(frozen=True)
class PhaseChord:
    t1: float
    t2: float
    x1: np.ndarray = field(repr=False, compare=False)
    x2: np.ndarray = field(repr=False, compare=False)


def positivity(curve: ConvexCurve, t1, t2):
    """``omega(nu(t1), nu(t2))``; positive exactly on phase space."""
    return cross(curve.normal(t1), curve.normal(t2))


def make_chord(curve: ConvexCurve, t1: float, t2: float, tol=POSITIVITY_TOL) -> PhaseChord:
    if positivity(curve, t1, t2) <= tol:
        raise BoundaryChord(f"chord ({t1}, {t2}) is not inside phase space")
    return PhaseChord(float(t1), float(t2), curve.point(t1), curve.point(t2))


def third_point(curve: ConvexCurve, t1: float, t2: float, tol=POSITIVITY_TOL) -> float:
    """Lifted parameter ``t3`` in ``(t2, t2*)`` with ``gamma(t3) - gamma(t1) || gamma'(t2)``.

    ``g(t) = [gamma(t) - gamma(t1), tau(t2)]`` is positive at ``t2`` and
    negative at the opposite point ``t2*``, and strictly monotone in between.
    """
    if positivity(curve, t1, t2) <= tol:
        raise BoundaryChord(f"chord ({t1}, {t2}) is not inside phase space")
    x1 = curve.point(t1)
    tau = curve.tangent(t2)
    g = lambda t: float(cross(curve.point(t) - x1, tau))
    lo, hi = t2, curve.opposite(t2)
    glo, ghi = g(lo), g(hi)
    if not (glo > 0 > ghi):
        raise RootBracketFailure(f"no sign change on ({lo}, {hi}): {glo}, {ghi}")
    t3 = optimize.brentq(g, lo, hi, xtol=PARAM_TOL, maxiter=200)
    # one Newton polish: g'(t) = [gamma'(t), tau]
    d = float(cross(curve.velocity(t3), tau))
    if d != 0.0:
        cand = t3 - g(t3) / d
        if lo < cand < hi and abs(g(cand)) <= abs(g(t3)):
            t3 = cand
    return t3


def step(curve: ConvexCurve, chord: PhaseChord, tol=POSITIVITY_TOL) -> PhaseChord:
    t3 = third_point(curve, chord.t1, chord.t2, tol)
    return PhaseChord(chord.t2, t3, chord.x2, curve.point(t3))


def reflection_residual(curve: ConvexCurve, t1, t2, t3):
    """``|[gamma(t3) - gamma(t1), tau(t2)]|``, zero for a genuine step."""
    return abs(float(cross(curve.point(t3) - curve.point(t1), curve.tangent(t2))))


def generating_function(curve: ConvexCurve, t1, t2):
    return cross(curve.point(t1), curve.point(t2))


def invariant_density(curve: ConvexCurve, t1, t2):
    """``S_12 = [gamma'(t1), gamma'(t2)]``, the density of the invariant area form."""
    return cross(curve.velocity(t1), curve.velocity(t2))


def phase_area(curve: SupportCurve, inner=96, outer=256) -> float:
    """Total invariant area of phase space by double quadrature of ``S_12``.

    For support curves phase space is ``a1 < a2 < a1 + pi`` and the
    integrand is smooth and periodic in ``a1``: Gauss-Legendre inside,
    trapezoid (spectrally accurate) outside.
    """
    x, w = np.polynomial.legendre.leggauss(inner)
    u = 0.5 * math.pi * (x + 1.0)
    w = 0.5 * math.pi * w
    a1 = np.linspace(0.0, TWO_PI, outer, endpoint=False)
    r1 = curve.rho(a1)
    a2 = a1[:, None] + u[None, :]
    r2 = curve.rho(a2)
    inner_vals = np.sum(r2 * np.sin(u)[None, :] * w[None, :], axis=1)
    return float(np.sum(r1 * inner_vals) * TWO_PI / outer)


def symmetrized_area(curve: SupportCurve) -> float:
    return symmetrization(curve).area()


def mather_criterion(curve: ConvexCurve, t1, t2, t3):
    """``S_22(t1, t2) + S_11(t2, t3) = [gamma(t1) - gamma(t3), gamma''(t2)]``.

    Expressed in the curve's own parameter.  Along a genuine orbit the
    tangential part of ``gamma''`` drops out, so the value is proportional
    to the curvature at ``t2``.
    """
    return float(cross(curve.point(t1) - curve.point(t3), curve.acceleration(t2)))


def lazutkin_defect(curve: ConvexCurve, t: float, eps: float, table: AffineTable | None = None) -> float:
    """``delta - eps`` for the step ``(t - eps, eps) -> (t, delta)`` in affine coordinates."""
    table = table or affine_table(curve)
    s1, s2 = table.param_of(np.array([t - eps, t]))
    s3 = third_point(curve, float(s1), float(s2))
    return float(table.t_of(s3)) - t - eps


def lazutkin_slope(curve: ConvexCurve, t: float, eps_list=(0.2, 0.1, 0.05, 0.025), table=None):
    """Log-log regression slope of ``|delta - eps|`` against ``eps``.

    Returns ``(slope, defects)``.
    """
    table = table or affine_table(curve)
    d = np.array([lazutkin_defect(curve, t, e, table) for e in eps_list])
    slope = np.polyfit(np.log(eps_list), np.log(np.abs(d)), 1)[0]
    return float(slope), d


@dataclass
class OrbitRecord:
    initial: PhaseChord
    params: list
    actions: list
    hit_boundary: bool = False
    period: int | None = None

    def chords(self):
        return list(zip(self.params[:-1], self.params[1:]))


def iterate(curve: ConvexCurve, t1: float, t2: float, n: int) -> OrbitRecord:
    """Orbit of ``(t1, t2)``; a boundary hit terminates it early."""
    rec = OrbitRecord(make_chord(curve, t1, t2), [float(t1), float(t2)], [])
    for _ in range(n):
        a, b = rec.params[-2], rec.params[-1]
        rec.actions.append(float(generating_function(curve, a, b)))
        try:
            rec.params.append(third_point(curve, a, b))
        except BoundaryChord:
            rec.hit_boundary = True
            break
    rec.period = detect_period(curve, rec.params)
    return rec


def detect_period(curve: ConvexCurve, params, tol=1e-9):
    """Least ``k`` with chord ``k`` equal to chord ``0`` modulo the period."""
    P = curve.period
    t0 = np.array(params[:2])
    for k in range(1, len(params) - 1):
        d = np.array(params[k:k + 2]) - t0
        w = np.round(d[0] / P)
        if np.all(np.abs(d - w * P) < tol):
            return k
    return None


def _orbit_job(args):
    curve, seed, n = args
    return iterate(curve, seed[0], seed[1], n)


def portrait(curve: ConvexCurve, seeds, iterations: int, workers: int = 1):
    """Orbits of several seeds; parallel over seeds when ``workers > 1``."""
    jobs = [(curve, s, iterations) for s in seeds]
    if workers <= 1:
        return [_orbit_job(j) for j in jobs]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_orbit_job, jobs))


def step_jacobian(curve: ConvexCurve, t1, t2, h=1e-5):
    """Central finite-difference Jacobian of ``(t1, t2) -> (t2, t3)``."""
    d1 = (third_point(curve, t1 + h, t2) - third_point(curve, t1 - h, t2)) / (2 * h)
    d2 = (third_point(curve, t1, t2 + h) - third_point(curve, t1, t2 - h)) / (2 * h)
    return np.array([[0.0, 1.0], [d1, d2]])


def invariant_form_defect(curve: ConvexCurve, t1, t2, h=1e-5):
    """Relative change of ``S_12 dt1 dt2`` under one step at ``(t1, t2)``."""
    t3 = third_point(curve, t1, t2)
    jac = step_jacobian(curve, t1, t2, h)
    before = float(invariant_density(curve, t1, t2))
    after = float(invariant_density(curve, t2, t3)) * abs(np.linalg.det(jac))
    return abs(after / before - 1.0)


def weighted_polygon_area(curve: ConvexCurve, pts, sub=8):
    """``int S_12 dt1 dt2`` over a small polygon in the ``(t1, t2)`` plane.

    Green's theorem with ``P = 0, Q = int S_12 dt1`` would need a
    primitive; instead the polygon is fan-triangulated from its centroid
    and each triangle integrated with a degree-``sub`` tensor rule.
    """
    pts = np.asarray(pts, dtype=float)
    c = pts.mean(axis=0)
    x, w = np.polynomial.legendre.leggauss(sub)
    u = 0.5 * (x + 1)
    w = 0.5 * w
    total = 0.0
    for a, b in zip(pts, np.roll(pts, -1, axis=0)):
        # Duffy map of the unit square onto triangle (c, a, b)
        U, V = np.meshgrid(u, u, indexing="ij")
        W = np.outer(w, w) * U
        P = c + U[..., None] * ((a - c) + V[..., None] * (b - a))
        det = cross(a - c, b - a)
        total += det * np.sum(W * invariant_density(curve, P[..., 0], P[..., 1]))
    return float(total)


def radon_partner(curve, theta):
    """Polar angle of the point maximizing ``omega(x, .)`` for a Radon curve.

    That point is the support point in direction ``J x``; per quadrant the
    curve is an l_e circle whose support point in direction ``n`` is
    ``sign(n) |n|^(e'-1)`` normalized, with ``e'`` the conjugate exponent.
    """
    x = curve.point(theta)
    n = np.array([-x[1], x[0]])
    for e in (curve.p, curve.q):
        ed = e / (e - 1.0)
        g = np.sign(n) * np.abs(n) ** (ed - 1.0)
        y = g / np.sum(np.abs(g) ** e) ** (1.0 / e)
        phi = math.atan2(y[1], y[0])
        if abs(curve._exponent(np.array(phi)) - e) < 1e-12:
            break
    phi = theta + np.mod(phi - theta, TWO_PI)
    return float(phi)


def radon_four_orbit_residual(curve, theta):
    """Distance between the chord after four steps and the initial chord."""
    t1, t2 = theta, radon_partner(curve, theta)
    params = [t1, t2]
    for _ in range(4):
        params.append(third_point(curve, params[-2], params[-1]))
    x0, y0 = curve.point(t1), curve.point(t2)
    x4, y4 = curve.point(params[4]), curve.point(params[5])
    return float(max(np.linalg.norm(x4 - x0), np.linalg.norm(y4 - y0)))
