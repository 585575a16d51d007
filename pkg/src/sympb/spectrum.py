"""Maximal inscribed polygons and the asymptotics of their areas.

For a support curve the vertex update of coordinate ascent is explicit:
with ``d = gamma_{i+1} - gamma_{i-1}`` the best vertex maximizes
``[gamma, d]``, i.e. it is the support point in direction ``(d_y, -d_x)``.
A fixed point of the update is an inscribed polygon with
``gamma_{i+1} - gamma_{i-1}`` tangent at ``gamma_i``: a periodic orbit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve2d import TWO_PI, SupportCurve, affine_table, cross
from .errors import ConvergenceFailure

MAX_SWEEPS = 10_000
SWEEP_TOL = 1e-12
N_STARTS = 8


def polygon_area(curve: SupportCurve, alphas) -> float:
    x = curve.point(np.asarray(alphas, dtype=float))
    return 0.5 * float(np.sum(cross(x, np.roll(x, -1, axis=0))))


def closure_residual(curve: SupportCurve, alphas) -> float:
    """Max over vertices of ``|sin|`` of the angle between chord and tangent."""
    a = np.asarray(alphas, dtype=float)
    x = curve.point(a)
    d = np.roll(x, -1, axis=0) - np.roll(x, 1, axis=0)
    return float(np.max(np.abs(cross(curve.tangent(a), d)) / np.linalg.norm(d, axis=1)))


def _colours(n):
    idx = np.arange(n)
    if n % 2 == 0:
        return [idx[0::2], idx[1::2]]
    return [idx[0:n - 1:2], idx[1:n - 1:2], idx[n - 1:]]


def _update(curve, a, idx):
    """Best response of the vertices ``idx`` to their (fixed) neighbours."""
    n = len(a)
    x = curve.point(a)
    d = x[(idx + 1) % n] - x[(idx - 1) % n]
    new = np.arctan2(-d[:, 0], d[:, 1])
    # lift next to the old value; ascent moves are small compared to pi
    return a[idx] + np.mod(new - a[idx] + math.pi, TWO_PI) - math.pi


def _sweep(curve, a):
    a = a.copy()
    for idx in _colours(len(a)):
        a[idx] = _update(curve, a, idx)
    return a


def _gradient_hessian(curve, a):
    """Gradient and Hessian of ``F = 1/2 sum [gamma_i, gamma_{i+1}]``."""
    n = len(a)
    idx = np.arange(n)
    x = curve.point(a)
    v = curve.velocity(a)
    acc = curve.acceleration(a)
    nxt, prv = (idx + 1) % n, (idx - 1) % n
    d = x[nxt] - x[prv]
    g = 0.5 * cross(v, d)
    H = np.zeros((n, n))
    H[idx, idx] = 0.5 * cross(acc, d)
    H[idx, nxt] += 0.5 * cross(v, v[nxt])
    H[idx, prv] += 0.5 * cross(v[prv], v)
    return g, H


def _newton(curve, a, iters=40):
    """Newton iteration for a critical point of ``F`` near a maximum.

    Hessian eigenvalues are replaced by ``-|lambda|`` so each step points
    uphill.  The near-flat phase mode of the polygon makes individual steps
    erratic, so the iterate with the smallest gradient (and no loss of
    area) is returned.
    """
    f0 = polygon_area(curve, a)
    best, best_g = a, np.inf
    for _ in range(iters):
        g, H = _gradient_hessian(curve, a)
        gn = np.linalg.norm(g)
        if gn < best_g and polygon_area(curve, a) >= f0 - 1e-12:
            best, best_g = a, gn
        if gn < 1e-15:
            break
        lam, V = np.linalg.eigh(H)
        mag = np.maximum(np.abs(lam), 1e-14 * np.max(np.abs(lam)))
        a = a + V @ ((V.T @ g) / mag)
    return best


def ascend(curve: SupportCurve, start, max_sweeps=MAX_SWEEPS, tol=SWEEP_TOL, coarse=1e-7, warmup=100):
    """Coordinate ascent from ``start``.

    Plain sweeps run until the displacement drops below ``coarse`` (at most
    ``warmup`` of them; the slow modes of the sweep behave like a discrete
    heat equation).  Newton steps on ``F`` then alternate with blocks of
    sweeps until one sweep moves no vertex by more than ``tol``.
    """
    a = np.array(start, dtype=float)
    sweeps = 0
    disp = np.inf
    while sweeps < min(warmup, max_sweeps) and disp >= coarse:
        new = _sweep(curve, a)
        disp = np.max(np.abs(new - a))
        a = new
        sweeps += 1
    while disp >= tol:
        if sweeps >= max_sweeps:
            raise ConvergenceFailure(f"vertex displacement {disp:.3g} after {sweeps} sweeps")
        polished = _newton(curve, a)
        if polygon_area(curve, polished) >= polygon_area(curve, a) - 1e-13:
            a = polished
        for _ in range(min(50, max_sweeps - sweeps)):
            new = _sweep(curve, a)
            disp = np.max(np.abs(new - a))
            a = new
            sweeps += 1
            if disp < tol:
                break
    return a


def affine_equispaced(curve: SupportCurve, n: int, offset: float = 0.0, table=None):
    table = table or affine_table(curve)
    t = offset + table.length * np.arange(n) / n
    return table.param_of(t)


def max_inscribed_area(curve: SupportCurve, n: int, starts=N_STARTS, table=None):
    """Largest area of an inscribed ``n``-gon and its vertex parameters.

    Multi-start over ``starts`` rotations of the affine-equispaced polygon.
    """
    if n < 3:
        raise ValueError("n >= 3 required")
    table = table or affine_table(curve)
    best = None
    for j in range(starts):
        a = ascend(curve, affine_equispaced(curve, n, j * table.length / (starts * n), table))
        area = polygon_area(curve, a)
        if best is None or area > best[0]:
            best = (area, a)
    return best


def circle_polygon_area(n, r=1.0):
    return 0.5 * n * r * r * math.sin(TWO_PI / n)


@dataclass
class SpectrumFit:
    n: np.ndarray
    areas: np.ndarray
    a0: float
    a1: float
    a2: float
    residual: float
    extra: np.ndarray

    def predict(self, n):
        n = np.asarray(n, dtype=float)
        val = self.a0 - self.a1 / n ** 2 - self.a2 / n ** 4
        for j, c in enumerate(self.extra):
            val = val - c / n ** (6 + 2 * j)
        return val

    def to_dict(self):
        return {
            "n": [int(v) for v in self.n],
            "areas": [float(v) for v in self.areas],
            "a0": self.a0,
            "a1": self.a1,
            "a2": self.a2,
            "extra": [float(v) for v in self.extra],
            "residual": self.residual,
            "slack": ellipse_test(self),
        }


DEFAULT_N = (16, 24, 32, 48, 64, 96, 128)


def fit_coefficients(n_list, areas, extra_terms=2) -> SpectrumFit:
    """Least squares for ``A_n = a0 - a1/n^2 - a2/n^4 - sum c_j/n^(6+2j)``."""
    n = np.asarray(n_list, dtype=float)
    A = np.asarray(areas, dtype=float)
    cols = [np.ones_like(n)] + [-(n ** -(2 * (j + 1))) for j in range(2 + extra_terms)]
    M = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(M, A, rcond=None)
    res = float(np.max(np.abs(M @ coef - A)))
    return SpectrumFit(n, A, float(coef[0]), float(coef[1]), float(coef[2]), res, coef[3:])


def fit_spectrum(curve: SupportCurve, n_list=DEFAULT_N, extra_terms=2, starts=N_STARTS) -> SpectrumFit:
    if len(n_list) < 4 or max(n_list) < 64:
        raise ValueError("need at least 4 values of n with max >= 64")
    table = affine_table(curve)
    areas = [max_inscribed_area(curve, int(n), starts, table)[0] for n in n_list]
    return fit_coefficients(n_list, areas, extra_terms)


def predicted_coefficients(curve: SupportCurve):
    """``(Area, L^3/12, -(L^4/240) int k dt)`` from the affine geometry."""
    table = affine_table(curve)
    L = table.length
    # int k dt = int k rho^(2/3) d alpha over one turn
    x, w = np.polynomial.legendre.leggauss(64)
    cells = 256
    h = TWO_PI / cells
    a = (np.arange(cells)[:, None] + 0.5 * (x + 1.0)) * h
    kt = float(np.sum(table.curve.rho(a) ** (2 / 3) * _k_alpha(curve, a) * w) * h / 2)
    return curve.area(), L ** 3 / 12.0, -(L ** 4) / 240.0 * kt


def _k_alpha(curve, a):
    from .curve2d import affine_curvature_at

    return affine_curvature_at(curve, a)


def ellipse_test(fit: SpectrumFit) -> float:
    """Slack ``2 pi^2 a0 - 3 a1``; nonnegative, zero only for ellipses."""
    return 2.0 * math.pi ** 2 * fit.a0 - 3.0 * fit.a1


def spacing_deviation(curve: SupportCurve, alphas, table=None) -> float:
    """``max_i |(t_{i+1} - t_i) - L/n|`` in the affine parameter."""
    table = table or affine_table(curve)
    t = table.t_of(np.asarray(alphas, dtype=float))
    gaps = np.diff(np.append(t, t[0] + table.length))
    return float(np.max(np.abs(gaps - table.length / len(t))))
