"""Smooth strictly convex planar curves.

Two parameterizations are used.  Curves described by a support function
``p(alpha)`` are parameterized by the direction ``alpha`` of the outward
normal, so that the point with parameter ``alpha`` is::

    gamma(alpha) = p(alpha) (cos a, sin a) + p'(alpha) (-sin a, cos a)

and ``rho = p + p''`` is the radius of curvature.  Curves with points of
zero curvature (and Radon curves, whose curvature blows up at the
junctions) are parameterized by the polar angle instead.

All curves are positively oriented and contain the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .errors import FlatPoint, NonConvexCurve

TWO_PI = 2.0 * math.pi
CONVEXITY_GRID = 4096
CONVEXITY_MARGIN = 1e-9
QUAD_TOL = 1e-12

# 16-point Gauss-Legendre rule on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def cross(u, v):
    """Planar determinant ``[u, v] = u_x v_y - u_y v_x`` (broadcasting)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _stack(x, y):
    return np.stack(np.broadcast_arrays(x, y), axis=-1)


def quad(f, a, b):
    """Adaptive quadrature to the package-wide absolute tolerance."""
    val, _ = integrate.quad(f, a, b, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=1000)
    return val


@dataclass(frozen=True)
class CurvePoint:
    alpha: float
    position: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    curvature: float


class ConvexCurve:
    """Common interface of all planar tables.

    Subclasses provide ``point``, ``velocity`` and ``acceleration`` as
    functions of the curve parameter; everything else has a generic
    default.
    """

    period = TWO_PI

    def point(self, t):
        raise NotImplementedError

    def velocity(self, t):
        raise NotImplementedError

    def acceleration(self, t):
        raise NotImplementedError

    def tangent(self, t):
        v = self.velocity(t)
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    def normal(self, t):
        tau = self.tangent(t)
        return _stack(tau[..., 1], -tau[..., 0])

    def curvature(self, t):
        v = self.velocity(t)
        a = self.acceleration(t)
        return cross(v, a) / np.linalg.norm(v, axis=-1) ** 3

    def affine_speed(self, t):
        """``[gamma', gamma'']^(1/3)``: derivative of affine length w.r.t. ``t``."""
        return np.cbrt(cross(self.velocity(t), self.acceleration(t)))

    def opposite(self, t):
        """Parameter of the point with parallel tangent, in ``(t, t + period)``.

        Found as the root of ``omega(nu(t), nu(s))`` which is positive on
        ``(t, t*)`` and negative on ``(t*, t + period)``.
        """
        nu = self.normal(t)
        g = lambda s: float(cross(nu, self.normal(s)))
        # coarse scan for the sign change, then Brent
        grid = t + self.period * np.linspace(0.0, 1.0, 65)[1:-1]
        vals = cross(nu, self.normal(grid))
        idx = np.nonzero((vals[:-1] > 0) & (vals[1:] <= 0))[0]
        if len(idx) == 0:
            raise NonConvexCurve("could not locate the opposite point")
        i = idx[0]
        return optimize.brentq(g, grid[i], grid[i + 1], xtol=1e-15)

    def area(self):
        return 0.5 * quad(lambda t: float(cross(self.point(t), self.velocity(t))), 0.0, self.period)

    def check_convex(self, n=CONVEXITY_GRID):
        t = np.linspace(0.0, self.period, n, endpoint=False)
        kappa = self.curvature(t)
        if np.any(~np.isfinite(kappa)) or np.any(kappa < -CONVEXITY_MARGIN):
            raise NonConvexCurve("curvature changes sign")
        if np.any(cross(self.point(t), self.tangent(t)) <= 0):
            raise NonConvexCurve("origin is not inside the curve")


def eval_point(curve: ConvexCurve, alpha: float) -> CurvePoint:
    return CurvePoint(
        alpha=float(alpha),
        position=curve.point(alpha),
        tangent=curve.tangent(alpha),
        normal=curve.normal(alpha),
        curvature=float(curve.curvature(alpha)),
    )


class SupportCurve(ConvexCurve):
    """Curve given by its support function, parameterized by normal angle.

    Subclasses implement ``support(alpha, order)`` returning the
    ``order``-th derivative of ``p``.
    """

    def support(self, alpha, order=0):
        raise NotImplementedError

    def rho(self, alpha, order=0):
        """Radius of curvature ``p + p''`` and its derivatives."""
        return self.support(alpha, order) + self.support(alpha, order + 2)

    def point(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        c, s = np.cos(alpha), np.sin(alpha)
        p = self.support(alpha)
        dp = self.support(alpha, 1)
        return _stack(p * c - dp * s, p * s + dp * c)

    def tangent(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        return _stack(-np.sin(alpha), np.cos(alpha))

    def normal(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        return _stack(np.cos(alpha), np.sin(alpha))

    def velocity(self, alpha):
        return self.rho(alpha)[..., None] * self.tangent(alpha)

    def acceleration(self, alpha):
        r = self.rho(alpha)[..., None]
        dr = self.rho(alpha, 1)[..., None]
        return dr * self.tangent(alpha) - r * self.normal(alpha)

    def third_derivative(self, alpha):
        r = self.rho(alpha)[..., None]
        dr = self.rho(alpha, 1)[..., None]
        ddr = self.rho(alpha, 2)[..., None]
        return (ddr - r) * self.tangent(alpha) - 2.0 * dr * self.normal(alpha)

    def curvature(self, alpha):
        return 1.0 / self.rho(alpha)

    def affine_speed(self, alpha):
        return self.rho(alpha) ** (2.0 / 3.0)

    def opposite(self, alpha):
        return alpha + math.pi

    def support_param(self, direction):
        """Parameter of the point whose outward normal is ``direction``."""
        d = np.asarray(direction, dtype=float)
        return np.arctan2(d[..., 1], d[..., 0])

    def area(self):
        return 0.5 * quad(lambda a: float(self.rho(a) * self.support(a)), 0.0, TWO_PI)

    def check_convex(self, n=CONVEXITY_GRID):
        a = np.linspace(0.0, TWO_PI, n, endpoint=False)
        if np.min(self.rho(a)) <= CONVEXITY_MARGIN:
            raise NonConvexCurve("p + p'' must be positive")
        if np.min(self.support(a)) <= 0:
            raise NonConvexCurve("origin must lie inside the curve (p > 0)")


class FourierCurve(SupportCurve):
    """Truncated Fourier support function ``c0 + sum c_k cos k a + s_k sin k a``."""

    def __init__(self, c0, coeffs=(), validate=True):
        self.c0 = float(c0)
        self.coeffs = np.array(coeffs, dtype=float).reshape(-1, 2)
        self._k = np.arange(1, len(self.coeffs) + 1, dtype=float)
        if validate:
            self.check_convex()

    def __repr__(self):
        return f"FourierCurve(c0={self.c0}, coeffs={self.coeffs.tolist()})"

    def support(self, alpha, order=0):
        alpha = np.asarray(alpha, dtype=float)
        ka = alpha[..., None] * self._k
        c, s = self.coeffs[:, 0], self.coeffs[:, 1]
        # d^m/da^m of cos(ka) = k^m cos(ka + m pi/2)
        phase = order * math.pi / 2.0
        km = self._k ** order
        val = np.sum(km * (c * np.cos(ka + phase) + s * np.sin(ka + phase)), axis=-1)
        if order == 0:
            val = val + self.c0
        return val

    def rotated(self, phi):
        """Curve rotated by ``phi`` about the origin."""
        k = self._k
        c, s = self.coeffs[:, 0], self.coeffs[:, 1]
        cc = c * np.cos(k * phi) - s * np.sin(k * phi)
        ss = c * np.sin(k * phi) + s * np.cos(k * phi)
        return FourierCurve(self.c0, np.column_stack([cc, ss]), validate=False)

    def symmetrized(self):
        coeffs = self.coeffs.copy()
        coeffs[0::2] = 0.0  # odd k sit at even indices
        return FourierCurve(self.c0, coeffs, validate=False)


class EllipseCurve(SupportCurve):
    """Centered ellipse with semi-axes ``a`` (along x) and ``b``."""

    def __init__(self, a, b):
        if a <= 0 or b <= 0:
            raise NonConvexCurve("semi-axes must be positive")
        self.a = float(a)
        self.b = float(b)

    def __repr__(self):
        return f"EllipseCurve(a={self.a}, b={self.b})"

    def support(self, alpha, order=0):
        alpha = np.asarray(alpha, dtype=float)
        m = 0.5 * (self.a ** 2 + self.b ** 2)
        d = 0.5 * (self.a ** 2 - self.b ** 2)
        c2, s2 = np.cos(2 * alpha), np.sin(2 * alpha)
        u = [m + d * c2, -2 * d * s2, -4 * d * c2, 8 * d * s2, 16 * d * c2]
        # p = sqrt(u); derivatives from differentiating p*p = u repeatedly
        p0 = np.sqrt(u[0])
        if order == 0:
            return p0
        p1 = u[1] / (2 * p0)
        if order == 1:
            return p1
        p2 = (u[2] / 2 - p1 ** 2) / p0
        if order == 2:
            return p2
        p3 = (u[3] / 2 - 3 * p1 * p2) / p0
        if order == 3:
            return p3
        p4 = (u[4] / 2 - 4 * p1 * p3 - 3 * p2 ** 2) / p0
        if order == 4:
            return p4
        raise ValueError("ellipse support derivatives implemented up to order 4")

    def symmetrized(self):
        return self


class Symmetrization(SupportCurve):
    """Central symmetrization: support ``(p(a) + p(a + pi)) / 2``."""

    def __init__(self, curve: SupportCurve):
        self.base = curve

    def support(self, alpha, order=0):
        alpha = np.asarray(alpha, dtype=float)
        return 0.5 * (self.base.support(alpha, order) + self.base.support(alpha + math.pi, order))


def symmetrization(curve: SupportCurve) -> SupportCurve:
    if hasattr(curve, "symmetrized"):
        return curve.symmetrized()
    return Symmetrization(curve)


class LinearImage(SupportCurve):
    """Image ``A(curve)`` of a support curve under an invertible linear map.

    Only ``support`` (orders 0, 1) and ``rho`` (order 0) are available;
    that is all that lengths, areas and vertex updates need.
    """

    def __init__(self, curve: SupportCurve, matrix):
        self.base = curve
        self.A = np.asarray(matrix, dtype=float)
        self.det = float(np.linalg.det(self.A))
        if self.det <= 0:
            raise ValueError("orientation-preserving map required")

    def _pullback(self, alpha):
        n = super().normal(alpha)
        m = n @ self.A  # A^T n
        beta = np.arctan2(m[..., 1], m[..., 0])
        return beta, np.linalg.norm(m, axis=-1)

    def point(self, alpha):
        beta, _ = self._pullback(alpha)
        return self.base.point(beta) @ self.A.T

    def support(self, alpha, order=0):
        if order == 0:
            return np.sum(self.point(alpha) * super().normal(alpha), axis=-1)
        if order == 1:
            return np.sum(self.point(alpha) * super().tangent(alpha), axis=-1)
        raise NotImplementedError("higher support derivatives of a linear image")

    def rho(self, alpha, order=0):
        if order != 0:
            raise NotImplementedError
        beta, mnorm = self._pullback(alpha)
        # beta = arg(A^T n(alpha)), so d beta / d alpha = det(A) / |A^T n|^2
        dbeta = self.det / mnorm ** 2
        speed = np.linalg.norm(self.base.velocity(beta) @ self.A.T, axis=-1)
        return speed * dbeta


class PolarCurve(ConvexCurve):
    """Star-shaped curve ``r(theta) (cos theta, sin theta)``.

    Subclasses implement ``radius(theta, order)`` for orders 0..2.
    """

    def radius(self, theta, order=0):
        raise NotImplementedError

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)
        r = self.radius(theta)
        return _stack(r * np.cos(theta), r * np.sin(theta))

    def velocity(self, theta):
        theta = np.asarray(theta, dtype=float)
        c, s = np.cos(theta), np.sin(theta)
        r, dr = self.radius(theta), self.radius(theta, 1)
        return _stack(dr * c - r * s, dr * s + r * c)

    def acceleration(self, theta):
        theta = np.asarray(theta, dtype=float)
        c, s = np.cos(theta), np.sin(theta)
        r, dr, ddr = self.radius(theta), self.radius(theta, 1), self.radius(theta, 2)
        return _stack((ddr - r) * c - 2 * dr * s, (ddr - r) * s + 2 * dr * c)

    def area(self):
        return 0.5 * quad(lambda t: float(self.radius(t) ** 2), 0.0, TWO_PI)


def _lp_radius(theta, p, order):
    """Polar radius of the unit circle of the l_p norm and its derivatives."""
    c, s = np.cos(theta), np.sin(theta)
    ac, as_ = np.abs(c), np.abs(s)
    g = ac ** p + as_ ** p
    r = g ** (-1.0 / p)
    if order == 0:
        return r
    g1 = p * c * s * (as_ ** (p - 2) - ac ** (p - 2)) if p >= 2 else _lp_g1(c, s, p)
    r1 = -(1.0 / p) * g ** (-1.0 / p - 1) * g1
    if order == 1:
        return r1
    g2 = p * (c * c - s * s) * (as_ ** (p - 2) - ac ** (p - 2)) + p * (p - 2) * (
        c * c * as_ ** (p - 2) + s * s * ac ** (p - 2)
    )
    return -(1.0 / p) * ((-1.0 / p - 1) * g ** (-1.0 / p - 2) * g1 ** 2 + g ** (-1.0 / p - 1) * g2)


def _lp_g1(c, s, p):
    # same as p c s (|s|^(p-2) - |c|^(p-2)) but finite on the axes for p < 2
    return p * (np.sign(s) * np.abs(s) ** (p - 1) * c - np.sign(c) * np.abs(c) ** (p - 1) * s)


class LpCurve(PolarCurve):
    """Unit circle of the l_p norm; for ``p > 2`` it has four flat points.

    The curvature vanishes at the axis points ``(+-1, 0), (0, +-1)``, which
    makes ``LpCurve(4)`` the standard flat-point table.
    """

    def __init__(self, p=4.0):
        if p <= 1:
            raise NonConvexCurve("l_p circle needs p > 1")
        self.p = float(p)

    def __repr__(self):
        return f"LpCurve(p={self.p})"

    def radius(self, theta, order=0):
        return _lp_radius(np.asarray(theta, dtype=float), self.p, order)

    def tangent(self, theta):
        n = self.normal(theta)
        return _stack(-n[..., 1], n[..., 0])

    def normal(self, theta):
        # gradient of |x|^p + |y|^p
        x = self.point(theta)
        g = np.sign(x) * np.abs(x) ** (self.p - 1)
        return g / np.linalg.norm(g, axis=-1, keepdims=True)

    def opposite(self, theta):
        return theta + math.pi


@dataclass(frozen=True)
class AffineTable:
    """Tabulated affine arc length of a curve.

    ``t_of(s)`` and ``param_of(t)`` convert between the curve parameter and
    the affine parameter (both lifted to the real line), exact to roughly
    machine precision thanks to per-cell Gauss-Legendre integration and a
    Newton inversion.
    """

    curve: ConvexCurve
    grid: np.ndarray
    cumulative: np.ndarray
    length: float
    cells: int = field(default=512)

    def t_of(self, s):
        s = np.asarray(s, dtype=float)
        P = self.curve.period
        wind = np.floor(s / P)
        r = s - wind * P
        h = P / self.cells
        i = np.minimum((r / h).astype(int), self.cells - 1)
        lo = i * h
        width = r - lo
        nodes = lo[..., None] + width[..., None] * _GL_X
        partial = width * np.sum(self.curve.affine_speed(nodes) * _GL_W, axis=-1)
        return wind * self.length + self.cumulative[i] + partial

    def param_of(self, t, tol=1e-15):
        t = np.asarray(t, dtype=float)
        P = self.curve.period
        wind = np.floor(t / self.length)
        r = t - wind * self.length
        s = np.interp(r, self.cumulative, self.grid)
        for _ in range(50):
            err = self.t_of(s) - r
            s = s - err / self.curve.affine_speed(s)
            if np.max(np.abs(err)) < tol:
                break
        return s + wind * P

    def affine_curvature(self, t):
        return affine_curvature_at(self.curve, self.param_of(t))

    def affine_derivatives(self, t):
        """``gamma`` and its first three derivatives in the affine parameter.

        Only available for support-function curves.
        """
        c = self.curve
        a = self.param_of(t)
        q = c.rho(a) ** (1.0 / 3.0)
        dq = c.rho(a, 1) / (3.0 * q * q)
        T, N = c.tangent(a), c.normal(a)
        g1 = q[..., None] * T
        # d/dt = q^-2 d/da
        g2 = (dq / q ** 2)[..., None] * T - (1.0 / q)[..., None] * N
        k = affine_curvature_at(c, a)
        g3 = -k[..., None] * g1
        return c.point(a), g1, g2, g3


def affine_table(curve: ConvexCurve, cells=512) -> AffineTable:
    """Tabulate ``t(s) = int kappa^(1/3) ds``; raises FlatPoint if kappa vanishes."""
    P = curve.period
    probe = np.linspace(0.0, P, CONVEXITY_GRID, endpoint=False)
    if np.min(curve.curvature(probe)) <= CONVEXITY_MARGIN:
        raise FlatPoint("curvature vanishes; affine parameter undefined")
    h = P / cells
    lo = np.arange(cells) * h
    nodes = lo[:, None] + h * _GL_X
    per_cell = h * np.sum(curve.affine_speed(nodes) * _GL_W, axis=1)
    cumulative = np.concatenate([[0.0], np.cumsum(per_cell)])
    return AffineTable(curve, np.append(lo, P), cumulative, float(cumulative[-1]), cells)


def affine_length(curve: ConvexCurve) -> float:
    """Total affine length ``L = int kappa^(1/3) ds`` by adaptive quadrature."""
    P = curve.period
    probe = np.linspace(0.0, P, CONVEXITY_GRID, endpoint=False)
    if np.min(curve.curvature(probe)) <= CONVEXITY_MARGIN:
        raise FlatPoint("curvature vanishes; affine length undefined")
    return quad(lambda s: float(curve.affine_speed(s)), 0.0, P)


def affine_curvature_at(curve: SupportCurve, alpha):
    """Affine curvature at normal angle ``alpha``.

    With ``q = rho^(1/3)`` the affine tangent is ``q T`` and
    ``k = q^-4 - q^-3 d/da (q^-2 dq/da)``, i.e.
    ``k = rho^(-4/3) - rho''/(3 rho^(7/3)) + 4 rho'^2 / (9 rho^(10/3))``.
    """
    if not isinstance(curve, SupportCurve):
        raise TypeError("affine curvature is implemented for support-function curves")
    r = curve.rho(alpha)
    if np.min(r) <= 0:
        raise FlatPoint("radius of curvature must be positive")
    r1 = curve.rho(alpha, 1)
    r2 = curve.rho(alpha, 2)
    return r ** (-4.0 / 3.0) - r2 / (3.0 * r ** (7.0 / 3.0)) + 4.0 * r1 ** 2 / (9.0 * r ** (10.0 / 3.0))


def affine_curvature(curve: SupportCurve, t, table: AffineTable | None = None):
    table = table or affine_table(curve)
    return table.affine_curvature(t)


class RadonCurve(PolarCurve):
    """C^1 Radon curve glued from l_p and l_q quarter circles.

    The quarter ``C1`` of the l_p unit circle joins ``a = (1, 0)`` to
    ``b = (0, 1)``.  In the sectorial parameter (``[C1, C1'] = 1``) its
    velocity is ``C1' = (-y^(p-1), x^(p-1))``, which traces the l_q quarter
    circle from ``b`` to ``-a``; this is ``C2``.  The closed curve is
    ``C1 + C2 - C1 - C2``, i.e. the l_p circle in quadrants I, III and the
    l_q circle in quadrants II, IV.  As a billiard table the curve is
    parameterized by polar angle.
    """

    def __init__(self, p=3.0, samples=2049):
        if p <= 1:
            raise NonConvexCurve("Radon construction needs p > 1")
        self.p = float(p)
        self.q = self.p / (self.p - 1.0)
        theta = np.linspace(0.0, math.pi / 2, samples)
        # sectorial parameter: dt = r^2 dtheta
        self.sector_length = quad(lambda th: float(_lp_radius(th, self.p, 0) ** 2), 0.0, math.pi / 2)
        self._theta_samples = theta
        self.t_samples = np.array([self._sector_t(th) for th in theta])
        self.c1_samples = self.c1(self.t_samples)
        self.c2_samples = self.c2(self.t_samples)

    def __repr__(self):
        return f"RadonCurve(p={self.p})"

    def _exponent(self, theta):
        quadrant = np.floor(np.mod(theta, TWO_PI) / (math.pi / 2)).astype(int) % 4
        return np.where(quadrant % 2 == 0, self.p, self.q)

    def radius(self, theta, order=0):
        theta = np.asarray(theta, dtype=float)
        ex = self._exponent(theta)
        out = np.empty(np.shape(theta))
        for e in (self.p, self.q):
            m = ex == e
            if np.any(m):
                out[m] = _lp_radius(theta[m], e, order)
        return out if out.ndim else float(out)

    def normal(self, theta):
        x = self.point(theta)
        e = self._exponent(np.asarray(theta, dtype=float))[..., None]
        g = np.sign(x) * np.abs(x) ** (e - 1)
        return g / np.linalg.norm(g, axis=-1, keepdims=True)

    def tangent(self, theta):
        n = self.normal(theta)
        return _stack(-n[..., 1], n[..., 0])

    def opposite(self, theta):
        return theta + math.pi

    # --- sectorial parameterization of the quarter arc -------------------
    def _sector_t(self, theta):
        return quad(lambda th: float(_lp_radius(th, self.p, 0) ** 2), 0.0, theta)

    def _theta_of_t(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(t)
        for i, ti in enumerate(t):
            if ti <= 0:
                out[i] = 0.0
            elif ti >= self.sector_length:
                out[i] = math.pi / 2
            else:
                out[i] = optimize.brentq(lambda th: self._sector_t(th) - ti, 0.0, math.pi / 2, xtol=1e-15)
        return out

    def c1(self, t):
        theta = self._theta_of_t(t)
        r = _lp_radius(theta, self.p, 0)
        return _stack(r * np.cos(theta), r * np.sin(theta))

    def c2(self, t):
        """``C1'`` in the sectorial parameter (closed form)."""
        xy = np.clip(self.c1(t), 0.0, None)
        return _stack(-xy[..., 1] ** (self.p - 1), xy[..., 0] ** (self.p - 1))

    def closed_samples(self):
        """Samples of the assembled curve C1, C2, -C1, -C2 in order."""
        return np.concatenate([self.c1_samples, self.c2_samples, -self.c1_samples, -self.c2_samples])

    def junction_tangents(self):
        """One-sided unit tangents at the four junctions (left, right pairs)."""
        out = []
        for k in range(4):
            th = k * math.pi / 2
            left_e = self.q if k % 2 == 0 else self.p
            right_e = self.p if k % 2 == 0 else self.q
            pt = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]][k])
            pts = []
            for e in (left_e, right_e):
                g = np.sign(pt) * np.abs(pt) ** (e - 1)
                g = g / np.linalg.norm(g)
                pts.append(np.array([-g[1], g[0]]))
            out.append((pts[0], pts[1]))
        return out


def circle(r=1.0) -> FourierCurve:
    return FourierCurve(r, ())


def random_fourier_curve(rng: np.random.Generator, harmonics=4, budget=0.6, shift=0.05) -> FourierCurve:
    """Random strictly convex Fourier curve (p + p'' >= 1 - budget)."""
    coeffs = np.zeros((harmonics, 2))
    coeffs[0] = rng.uniform(-shift, shift, 2)
    if harmonics > 1:
        k = np.arange(2, harmonics + 1)
        raw = rng.normal(size=(harmonics - 1, 2))
        weights = rng.dirichlet(np.ones(harmonics - 1)) * budget
        # |c cos + s sin| (k^2 - 1) <= |(c, s)| (k^2 - 1)
        scale = weights / ((k ** 2 - 1) * np.linalg.norm(raw, axis=1))
        coeffs[1:] = raw * scale[:, None]
    return FourierCurve(1.0, coeffs)


def curve_from_dict(d: dict) -> ConvexCurve:
    """Build a curve from its JSON description."""
    kind = d.get("type")
    if kind == "support_fourier":
        return FourierCurve(d["c0"], d.get("coeffs", []))
    if kind == "ellipse":
        return EllipseCurve(d["a"], d["b"])
    if kind == "radon":
        return RadonCurve(d["p"])
    if kind == "circle":
        return circle(d.get("r", 1.0))
    if kind == "lp":
        return LpCurve(d["p"])
    raise ValueError(f"unknown curve type {kind!r}")


def curve_to_dict(curve: ConvexCurve) -> dict:
    if isinstance(curve, FourierCurve):
        return {"type": "support_fourier", "c0": curve.c0, "coeffs": curve.coeffs.tolist()}
    if isinstance(curve, EllipseCurve):
        return {"type": "ellipse", "a": curve.a, "b": curve.b}
    if isinstance(curve, RadonCurve):
        return {"type": "radon", "p": curve.p}
    if isinstance(curve, LpCurve):
        return {"type": "lp", "p": curve.p}
    raise TypeError(f"no JSON form for {type(curve).__name__}")
