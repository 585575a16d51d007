"""Symplectic billiards in R^2n.

Vectors are stored as ``(x1, y1, x2, y2, ...)``; the j-th complex
coordinate is ``z_j = x_j + i y_j`` and ``J`` is multiplication by ``i``.
A table is a convex body ``{F = 1}`` together with a symplectic form
``omega_a(u, v) = <D J u, v>``, ``D = diag(a1, a1, a2, a2, ...)``.  The
characteristic direction at ``x`` is ``R(x) = J D^-1 nu(x)`` and the map
sends ``(x1, x2)`` to ``(x2, x3)`` with ``x3 = x1 + t R(x2)``, ``t > 0``.

The weighted sphere (unit sphere with weights ``a``) is the normal form of
an ellipsoid and has a closed-form step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import optimize

from .errors import ConvergenceFailure, DegenerateChord, OmegaOutOfRange, RootBracketFailure

DEGENERACY_TOL = 1e-12


def J(v):
    """Multiplication by ``i`` in every complex coordinate."""
    v = np.asarray(v)
    if not np.issubdtype(v.dtype, np.floating):
        v = v.astype(float)
    w = np.empty_like(v)
    w[..., 0::2] = -v[..., 1::2]
    w[..., 1::2] = v[..., 0::2]
    return w


def omega(u, v, a=None):
    """``sum a_j (u_xj v_yj - u_yj v_xj)``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    terms = u[..., 0::2] * v[..., 1::2] - u[..., 1::2] * v[..., 0::2]
    if a is not None:
        terms = terms * np.asarray(a, dtype=float)
    return np.sum(terms, axis=-1)


def to_complex(v):
    v = np.asarray(v, dtype=float)
    return v[..., 0::2] + 1j * v[..., 1::2]


def to_real(z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


class LevelSetBody:
    """Strictly convex body ``{F <= 1}`` with weighted symplectic form.

    ``F``, ``grad`` and ``hess`` act on single points of ``R^dim``.
    """

    def __init__(self, F, grad, hess, dim, weights=None, name="level_set"):
        self.F = F
        self.grad = grad
        self.hess = hess
        self.dim = int(dim)
        if self.dim % 2:
            raise ValueError("ambient dimension must be even")
        self.a = np.ones(self.dim // 2) if weights is None else np.asarray(weights, dtype=float)
        if np.any(self.a <= 0):
            raise ValueError("weights must be positive")
        self.D = np.repeat(self.a, 2)
        self.name = name

    def normal(self, x):
        return _unit(self.grad(x))

    def R(self, x):
        """Characteristic direction ``J D^-1 nu(x)``."""
        return J(self.normal(x) / self.D)

    def omega(self, u, v):
        return omega(u, v, self.a)

    def positivity(self, x1, x2):
        """``<R(x1), nu(x2)>``-type positivity: ``omega_a(R(x1), R(x2))``.

        Phase space is where this is positive; it is the condition for the
        step parameter ``t`` to be positive.
        """
        return float(self.omega(self.R(x1), self.R(x2)))

    def support_point(self, u, x0=None, tol=1e-14, iters=50):
        """Point of the body with outward normal ``u``.

        Newton on ``grad F(x) = lam u, F(x) = 1``.
        """
        u = _unit(u)
        x = u.copy() if x0 is None else np.array(x0, dtype=float)
        x = x / math.sqrt(self.F(x)) if self.F(x) > 0 else x
        lam = float(np.dot(self.grad(x), u))
        n = self.dim
        for _ in range(iters):
            g = self.grad(x)
            res = np.concatenate([g - lam * u, [self.F(x) - 1.0]])
            if np.max(np.abs(res)) < tol:
                break
            jac = np.zeros((n + 1, n + 1))
            jac[:n, :n] = self.hess(x)
            jac[:n, n] = -u
            jac[n, :n] = g
            d = np.linalg.solve(jac, -res)
            x = x + d[:n]
            lam = lam + d[n]
        else:
            if np.max(np.abs(res)) > 1e-10:
                raise ConvergenceFailure("support point Newton iteration failed")
        return x

    def opposite(self, x):
        """Point ``x*`` with ``nu(x*) = -nu(x)``."""
        return self.support_point(-self.normal(x), x0=-x)

    def support_jacobian(self, u):
        """``dx/du`` of the support point map, restricted to unit ``u``."""
        u = _unit(u)
        x = self.support_point(u)
        lam = float(np.linalg.norm(self.grad(x)))
        Hi = np.linalg.inv(self.hess(x))
        Hu = Hi @ u
        return x, lam * (Hi - np.outer(Hu, Hu) / float(u @ Hu))

    def check_point(self, x):
        H = self.hess(x)
        if np.linalg.norm(self.grad(x)) == 0 or np.min(np.linalg.eigvalsh(H)) <= 0:
            raise ValueError("body is not strictly convex at the sampled point")

    def random_point(self, rng):
        return self.support_point(rng.normal(size=self.dim))


class WeightedSphere(LevelSetBody):
    """Unit sphere ``S^(2n-1)`` with the form ``sum a_j dx_j ^ dy_j``."""

    def __init__(self, a):
        a = np.asarray(a, dtype=float)
        dim = 2 * len(a)
        super().__init__(
            lambda x: float(np.dot(x, x)),
            lambda x: 2.0 * np.asarray(x, dtype=float),
            lambda x: 2.0 * np.eye(dim),
            dim,
            a,
            name="weighted_sphere",
        )

    def __repr__(self):
        return f"WeightedSphere(a={self.a.tolist()})"

    def normal(self, x):
        return np.asarray(x, dtype=float)

    def R(self, x):
        # keeps extended precision inputs extended
        return J(np.asarray(x) / self.D)

    def R_inv(self, w):
        # (J D^-1)^-1 = D J^-1 = -D J
        return -self.D * J(w)

    def support_point(self, u, x0=None, **kw):
        return _unit(u)

    def opposite(self, x):
        return -np.asarray(x, dtype=float)

    def to_dict(self):
        return {"type": "weighted_sphere", "a": self.a.tolist()}


@dataclass(frozen=True)
class SphereChord:
    Z0: np.ndarray = field(repr=False)
    Z1: np.ndarray = field(repr=False)
    omega: float = 0.0


def make_chord(table: WeightedSphere, Z0, Z1) -> SphereChord:
    Z0 = np.asarray(Z0, dtype=float)
    Z1 = np.asarray(Z1, dtype=float)
    for Z in (Z0, Z1):
        if abs(np.linalg.norm(Z) - 1.0) > 1e-12:
            raise ValueError("chord endpoints must be unit vectors")
    return SphereChord(Z0, Z1, float(table.omega(Z0, Z1)))


def step_sphere(table: WeightedSphere, Z0, Z1, tol=DEGENERACY_TOL):
    """Closed-form step ``Z2 = Z0 + 2 <R Z0, Z1> / |R Z1|^2 R Z1``."""
    RZ1 = table.R(Z1)
    jint = np.dot(table.R(Z0), Z1)
    if jint < tol:
        raise DegenerateChord(f"<R Z0, Z1> = {float(jint):.3g} is not positive")
    return Z0 + 2 * jint / np.dot(RZ1, RZ1) * RZ1


def sphere_orbit(table: WeightedSphere, Z0, Z1, n, dtype=float):
    """Array of ``n + 2`` points ``Z0, Z1, ..., Z_{n+1}``.

    In double precision the phase error of long orbits grows like
    ``eps n^1.5`` (about 1e-11 after 10^3 steps); ``dtype=np.longdouble``
    iterates in extended precision where the platform provides it.
    """
    pts = [np.asarray(Z0, dtype=dtype), np.asarray(Z1, dtype=dtype)]
    for _ in range(n):
        pts.append(step_sphere(table, pts[-2], pts[-1]))
    return np.array(pts)


def step_levelset(body: LevelSetBody, x1, x2, tol=DEGENERACY_TOL):
    """Second intersection of ``x1 + t R(x2)``, ``t > 0``, with the body.

    ``g(t) = F(x1 + t R) - 1`` is convex with ``g(0) = 0`` and ``g'(0) < 0``
    inside phase space, so it has exactly one positive root.
    """
    x1 = np.asarray(x1, dtype=float)
    r = body.R(x2)
    slope = float(np.dot(body.grad(x1), r))
    if -slope < tol * np.linalg.norm(body.grad(x1)):
        raise DegenerateChord("chord is on the boundary of phase space")
    g = lambda t: body.F(x1 + t * r) - 1.0
    hi = 1.0
    for _ in range(200):
        if g(hi) > 0:
            break
        hi *= 2.0
    else:
        raise RootBracketFailure("ray does not leave the body")
    lo = hi
    for _ in range(200):
        lo *= 0.5
        if g(lo) < 0:
            break
    else:
        raise RootBracketFailure("no interior point along the ray")
    t = optimize.brentq(g, lo, hi, xtol=1e-16, maxiter=500)
    for _ in range(3):
        d = float(np.dot(body.grad(x1 + t * r), r))
        if d == 0:
            break
        cand = t - g(t) / d
        if lo <= cand <= hi and abs(g(cand)) <= abs(g(t)):
            t = cand
    return x1 + t * r


def reflection_residual(body: LevelSetBody, x1, x2, x3):
    """Sine of the angle between ``x3 - x1`` and ``R(x2)``."""
    d = _unit(np.asarray(x3) - np.asarray(x1))
    r = _unit(body.R(x2))
    return float(np.linalg.norm(d - np.dot(d, r) * r))


def orbit_residual(body: LevelSetBody, pts):
    """Max reflection residual around a closed polygon ``pts``."""
    pts = np.asarray(pts, dtype=float)
    k = len(pts)
    return max(reflection_residual(body, pts[i - 1], pts[i], pts[(i + 1) % k]) for i in range(k))


def integrals(table: WeightedSphere, Z0, Z1):
    """``(I_1, ..., I_n, J)``: ``I_k = Re(conj(z0_k) z1_k)``, ``J = <R Z0, Z1>``."""
    Z0 = np.asarray(Z0, dtype=float)
    Z1 = np.asarray(Z1, dtype=float)
    I = Z0[0::2] * Z1[0::2] + Z0[1::2] * Z1[1::2]
    return np.append(I, np.dot(table.R(Z0), Z1))


def companion_ellipsoid_value(table: WeightedSphere, W):
    """``sum |w_j|^2 / a_j^2``; equal to 1 on the companion ellipsoid E."""
    W = np.asarray(W, dtype=float)
    val = np.sum(W ** 2 / table.D ** 2, axis=-1)
    return float(val) if val.ndim == 0 else val


def hodo_check(table: WeightedSphere, traj):
    """Max angle defect of the Birkhoff law along ``W_2i = R^-1 Z_2i``.

    At each interior even point the chords to both neighbours, as unit
    vectors, must sum to a positive multiple of the inward normal
    ``R^2 W`` of E.
    """
    W = np.array([table.R_inv(Z) for Z in traj[0::2]])
    worst = 0.0
    for i in range(1, len(W) - 1):
        s = _unit(W[i - 1] - W[i]) + _unit(W[i + 1] - W[i])
        n = _unit(table.R(table.R(W[i])))
        s = _unit(s)
        worst = max(worst, float(np.linalg.norm(s - n)))
    return worst


def birkhoff_step(a, W, V):
    """Birkhoff billiard in ``E = {sum |w_j|^2 / a_j^2 = 1}``.

    Line-ellipsoid intersection followed by specular reflection in the
    gradient normal.  Independent of the symplectic machinery.
    """
    A = 1.0 / np.repeat(np.asarray(a, dtype=float), 2) ** 2
    s = -2.0 * np.dot(A * W, V) / np.dot(A * V, V)
    W1 = W + s * V
    n = _unit(A * W1)
    V1 = V - 2.0 * np.dot(V, n) * n
    return W1, V1


def birkhoff_trajectory(a, W0, V0, m):
    W, V = [np.asarray(W0, dtype=float)], [_unit(V0)]
    for _ in range(m):
        w, v = birkhoff_step(a, W[-1], V[-1])
        W.append(w)
        V.append(v)
    return np.array(W), np.array(V)


def lift_birkhoff(table: WeightedSphere, W, V=None):
    """Symplectic orbit from a Birkhoff trajectory: ``Z_2i = R W_i``.

    Odd points are the normalized chords ``(W_{i+1} - W_i)``, which equals
    the normalized ``R^-1 (Z_{2i+2} - Z_{2i})``.
    """
    Z = []
    for i in range(len(W) - 1):
        Z.append(table.R(W[i]))
        Z.append(_unit(W[i + 1] - W[i]))
    Z.append(table.R(W[-1]))
    return np.array(Z)


def lift_residual(table: WeightedSphere, Z):
    """Max ``|step(Z_{i-1}, Z_i) - Z_{i+1}|`` along a sequence."""
    return max(float(np.linalg.norm(step_sphere(table, Z[i - 1], Z[i]) - Z[i + 1])) for i in range(1, len(Z) - 1))


def birkhoff_integral(a, W, V):
    """``<A W, V>`` with ``A = -R^2 = diag(1 / a_j^2)``."""
    A = 1.0 / np.repeat(np.asarray(a, dtype=float), 2) ** 2
    return float(np.dot(A * np.asarray(W), np.asarray(V)))


def sphere_explicit(z0, z1, n_steps):
    """Closed-form ``z_n`` on the round sphere (all weights 1).

    ``z0, z1`` are complex vectors (or real ``(x, y, ...)`` arrays).
    """
    real_in = np.isrealobj(z0)
    z0c = to_complex(z0) if real_in else np.asarray(z0, dtype=complex)
    z1c = to_complex(z1) if real_in else np.asarray(z1, dtype=complex)
    w = float(np.sum((np.conj(z0c) * z1c).imag))  # omega(z0, z1)
    if not 0.0 < w < 1.0:
        raise OmegaOutOfRange(f"omega = {w} outside (0, 1)")
    al = math.asin(w)
    l1, l2 = np.exp(1j * al), -np.exp(-1j * al)

    def U(m):
        return (l1 ** m - l2 ** m) / (l1 - l2)

    zn = U(n_steps - 1) * z0c + U(n_steps) * z1c
    return to_real(zn) if real_in else zn


def two_circles(z0, z1):
    """Vectors ``(A, B, alpha)``: ``z_m = e^{i m alpha} A + (-1)^m e^{-i m alpha} B``."""
    z0c, z1c = np.asarray(z0, dtype=complex), np.asarray(z1, dtype=complex)
    w = float(np.sum((np.conj(z0c) * z1c).imag))
    al = math.asin(w)
    l1, l2 = np.exp(1j * al), -np.exp(-1j * al)
    A = (z1c - l2 * z0c) / (l1 - l2)
    B = (l1 * z0c - z1c) / (l1 - l2)
    return A, B, al


def circle_distance(A, B, z, sign):
    """Distance of ``z`` from the circle ``{e^{is} A + sign e^{-is} B}``.

    Writing the circle as ``cos s (A + sign B) + sin s i (A - sign B)``,
    the best real coefficients are found by least squares; the defect is
    the fit residual plus the deviation of ``(cos s, sin s)`` from the unit
    circle.
    """
    P = to_real(A + sign * B)
    Q = to_real(1j * (A - sign * B))
    M = np.column_stack([P, Q])
    coef, *_ = np.linalg.lstsq(M, to_real(z), rcond=None)
    fit = float(np.linalg.norm(M @ coef - to_real(z)))
    return fit + abs(float(np.hypot(*coef)) - 1.0)


def sphere_period(omega_value, cap=10 ** 6):
    """Period predicted by ``alpha / 2 pi ~ p / q``: ``q`` if even, ``2q`` if odd."""
    frac = Fraction(math.asin(omega_value) / (2 * math.pi)).limit_denominator(cap)
    q = frac.denominator
    return q if q % 2 == 0 else 2 * q


def subspace_dimension(orbit, tol=1e-10):
    """Real dimension of the smallest coordinate subspace containing the orbit."""
    pts = np.asarray(orbit, dtype=float)
    mod = np.hypot(pts[:, 0::2], pts[:, 1::2])
    return 2 * int(np.sum(np.max(mod, axis=0) > tol))


def subspace_bound(k):
    return k if k % 2 == 0 else k - 1


# --- variational orbit finders ------------------------------------------

def area_functional(body: LevelSetBody, pts):
    pts = np.asarray(pts)
    return float(np.sum(body.omega(pts, np.roll(pts, -1, axis=0))))


def _best_vertex(body, prev, nxt, x0):
    d = nxt - prev
    # omega_a(z, d) = -<z, J D d>
    m = -J(body.D * d)
    if np.linalg.norm(m) < 1e-10:
        return None
    return body.support_point(m, x0=x0)


def find_periodic(body: LevelSetBody, k: int, rng=None, max_sweeps=10_000, tol=1e-13, restarts=20, res_tol=1e-11):
    """A ``k``-periodic orbit maximizing ``sum omega(z_i, z_{i+1})``.

    Cyclic coordinate ascent: each vertex is replaced by the support point
    in the direction that maximizes its two terms.  Starts collapsing to a
    degenerate polygon are restarted.  For ``k = 2`` the functional
    vanishes identically and an affine diameter ``(x, x*)`` is returned.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    if k < 2:
        raise ValueError("k >= 2 required")
    if k == 2:
        x = body.random_point(rng)
        return np.array([x, body.opposite(x)])
    for _ in range(restarts):
        pts = np.array([body.random_point(rng) for _ in range(k)])
        ok = True
        for sweep in range(max_sweeps):
            disp = 0.0
            for i in range(k):
                z = _best_vertex(body, pts[i - 1], pts[(i + 1) % k], pts[i])
                if z is None:
                    ok = False
                    break
                disp = max(disp, float(np.linalg.norm(z - pts[i])))
                pts[i] = z
            if not ok or disp < tol:
                break
            # slow modes: settle for an orbit that already reflects correctly
            if sweep % 100 == 99 and orbit_residual(body, pts) < res_tol:
                break
        if not ok:
            continue
        if disp >= tol and orbit_residual(body, pts) >= res_tol:
            # the ascent creeps along a nearly flat family; Newton lands on
            # the critical point it is approaching
            cand = polish_periodic(body, pts)
            f0 = area_functional(body, pts)
            if area_functional(body, cand) >= f0 - 1e-8 * abs(f0):
                pts = cand
        if disp >= tol and orbit_residual(body, pts) >= res_tol:
            raise ConvergenceFailure(f"ascent stalled with displacement {disp:.3g}")
        if min(np.linalg.norm(pts[(i + 1) % k] - pts[i - 1]) for i in range(k)) < 1e-6:
            continue
        return pts
    raise ConvergenceFailure("only degenerate maximizers found")


def periodic_residual(body: LevelSetBody, pts):
    if len(pts) == 2:
        return float(np.linalg.norm(body.normal(pts[0]) + body.normal(pts[1])))
    return orbit_residual(body, pts)


def diameter_functional(body: LevelSetBody, u1, u2):
    """``omega(x(u1) - x(-u1), x(u2) - x(-u2))`` for unit normals ``u1, u2``."""
    D1 = body.support_point(u1) - body.support_point(-u1)
    D2 = body.support_point(u2) - body.support_point(-u2)
    return float(body.omega(D1, D2))


def _diameter_gradient(body, u1, u2):
    x1, P1 = body.support_jacobian(u1)
    y1, Q1 = body.support_jacobian(-u1)
    x2, P2 = body.support_jacobian(u2)
    y2, Q2 = body.support_jacobian(-u2)
    D1, D2 = x1 - y1, x2 - y2
    # d omega_a(D1, D2) = <D J dD1, D2> + <D J D1, dD2>
    g1 = -(P1 + Q1) @ J(body.D * D2)
    g2 = (P2 + Q2) @ J(body.D * D1)
    g1 = g1 - np.dot(g1, u1) * u1
    g2 = g2 - np.dot(g2, u2) * u2
    return np.concatenate([g1, g2]), (x1, x2, y1, y2)


def _tangent_basis(u):
    # orthonormal basis of u-perp
    q, _ = np.linalg.qr(np.column_stack([u, np.eye(len(u))]))
    return q[:, 1:]


def _sphere_newton(grad_fn, us, iters=60, tol=1e-12, h=1e-6):
    """Newton's method for a critical point on a product of unit spheres.

    ``grad_fn(us)`` returns the ambient gradients, one row per factor.
    The Hessian is a central finite difference of the tangential gradient
    in orthonormal tangent coordinates.
    """
    us = np.array(us, dtype=float)
    k, n = us.shape
    m = n - 1

    def local(vs, bases):
        g = grad_fn(vs)
        return np.concatenate([B.T @ gi for B, gi in zip(bases, g)])

    def retract(bases, xi):
        return np.array([_unit(u + B @ xi[i * m:(i + 1) * m]) for i, (u, B) in enumerate(zip(us, bases))])

    for _ in range(iters):
        bases = [_tangent_basis(u) for u in us]
        gl = local(us, bases)
        if np.linalg.norm(gl) < tol:
            return us, True
        H = np.zeros((k * m, k * m))
        for c in range(k * m):
            xi = np.zeros(k * m)
            xi[c] = h
            H[:, c] = (local(retract(bases, xi), bases) - local(retract(bases, -xi), bases)) / (2 * h)
        step = np.linalg.lstsq(H, -gl, rcond=1e-12)[0]
        nrm = np.linalg.norm(step)
        if nrm > 0.5:
            step *= 0.5 / nrm
        us = retract(bases, step)
    bases = [_tangent_basis(u) for u in us]
    return us, bool(np.linalg.norm(local(us, bases)) < 1e-10)


def _critical_newton(body, u1, u2, **kw):
    n = len(u1)

    def grad(vs):
        g, _ = _diameter_gradient(body, vs[0], vs[1])
        return g.reshape(2, n)

    us, ok = _sphere_newton(grad, [u1, u2], **kw)
    return us[0], us[1], ok


def _polygon_gradient(body, us):
    """Gradient of ``sum omega_a(x_i, x_{i+1})`` w.r.t. the vertex normals."""
    k = len(us)
    xs, Ps = zip(*(body.support_jacobian(u) for u in us))
    xs = np.array(xs)
    out = []
    for i in range(k):
        d = xs[(i + 1) % k] - xs[i - 1]
        out.append(Ps[i] @ (-J(body.D * d)))
    return np.array(out)


def polish_periodic(body: LevelSetBody, pts):
    """Newton refinement of a near-critical inscribed polygon."""
    us = np.array([body.normal(x) for x in pts])
    us, _ = _sphere_newton(lambda vs: _polygon_gradient(body, vs), us, iters=20)
    return np.array([body.support_point(u) for u in us])


def _same_orbit(p, q, tol=1e-6):
    # orbits as unordered vertex sets
    return all(min(np.linalg.norm(a - b) for b in q) < tol for a in p)


def find_4periodic_diameters(body: LevelSetBody, n_starts=64, rng=None, ascent_steps=30):
    """4-periodic orbits ``z1, z2, z1*, z2*`` from pairs of affine diameters.

    Critical points of ``G(u1, u2) = omega(D(u1), D(u2))`` with ``G > 0``,
    located by a short gradient ascent followed by Newton's method on the
    product of unit spheres.  Returns the list of distinct orbits.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    n = body.dim
    found = []
    for _ in range(n_starts):
        u1, u2 = _unit(rng.normal(size=n)), _unit(rng.normal(size=n))
        if diameter_functional(body, u1, u2) < 0:
            u2 = -u2
        for _ in range(ascent_steps):
            g, _ = _diameter_gradient(body, u1, u2)
            u1 = _unit(u1 + 0.1 * g[:n])
            u2 = _unit(u2 + 0.1 * g[n:])
        u1, u2, ok = _critical_newton(body, u1, u2)
        if not ok or diameter_functional(body, u1, u2) <= 0:
            continue
        x1, x2 = body.support_point(u1), body.support_point(u2)
        y1, y2 = body.support_point(-u1), body.support_point(-u2)
        orb = np.array([x1, x2, y1, y2])
        if not any(_same_orbit(orb, o) for o in found):
            found.append(orb)
    if not found:
        raise ConvergenceFailure("no critical diameter pair found")
    return found


# --- example bodies ---------------------------------------------------

def quartic_body(eps=0.1, dim=4, kind="complex") -> LevelSetBody:
    """``F = |z|^2 + eps sum |z_j|^4``.

    ``kind="complex"`` sums over complex coordinates (invariant under the
    torus of coordinate rotations); ``kind="real"`` sums ``x_i^4`` over
    real coordinates, which breaks that symmetry.
    """
    if kind == "complex":
        def F(x):
            r2 = x[0::2] ** 2 + x[1::2] ** 2
            return float(np.dot(x, x) + eps * np.sum(r2 ** 2))

        def grad(x):
            r2 = np.repeat(x[0::2] ** 2 + x[1::2] ** 2, 2)
            return 2 * x + 4 * eps * r2 * x

        def hess(x):
            H = 2 * np.eye(dim)
            for j in range(dim // 2):
                v = x[2 * j:2 * j + 2]
                H[2 * j:2 * j + 2, 2 * j:2 * j + 2] += eps * (4 * np.dot(v, v) * np.eye(2) + 8 * np.outer(v, v))
            return H
    elif kind == "real":
        F = lambda x: float(np.dot(x, x) + eps * np.sum(x ** 4))
        grad = lambda x: 2 * x + 4 * eps * x ** 3
        hess = lambda x: np.diag(2 + 12 * eps * x ** 2)
    else:
        raise ValueError(kind)
    return LevelSetBody(F, grad, hess, dim, name=f"quartic_{kind}")


def ellipsoid_body(a) -> LevelSetBody:
    """``F = sum |z_j|^2 / a_j`` with the standard form.

    The substitution ``z_j = sqrt(a_j) w_j`` maps it to ``WeightedSphere(a)``.
    """
    D = np.repeat(np.asarray(a, dtype=float), 2)
    return LevelSetBody(
        lambda x: float(np.sum(x * x / D)),
        lambda x: 2 * x / D,
        lambda x: np.diag(2 / D),
        len(D),
        name="ellipsoid",
    )


def table_from_dict(d):
    kind = d.get("type")
    if kind == "weighted_sphere":
        return WeightedSphere(d["a"])
    if kind == "level_set_quartic":
        return quartic_body(d.get("eps", 0.1), d.get("dim", 4), d.get("kind", "complex"))
    raise ValueError(f"unknown table type {kind!r}")


# --- characteristics and geodesics ------------------------------------

def characteristic_to_geodesic(A_diag, x0, T, steps, return_drift=False):
    """Geodesic residual of ``y = A^(-1/2) x`` along ``x' = J A x``.

    ``A_diag`` holds one weight per complex coordinate.  The flow is
    integrated by classical RK4; ``y'`` comes from the vector field and
    ``y''`` from fourth-order central differences of the ``y'`` samples.
    Returns the largest component of ``y''`` orthogonal to
    ``span(y', A^2 y)`` (and the drift of ``<A x, x>``).
    """
    A = np.repeat(np.asarray(A_diag, dtype=float), 2)
    f = lambda x: J(A * x)
    h = T / steps
    xs = np.empty((steps + 1, len(A)))
    xs[0] = x0
    x = np.asarray(x0, dtype=float)
    for k in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        xs[k + 1] = x
    s = 1.0 / np.sqrt(A)
    ys = xs * s
    vs = f(xs) * s
    acc = (-vs[4:] + 8 * vs[3:-1] - 8 * vs[1:-3] + vs[:-4]) / (12 * h)
    worst = 0.0
    for y, v, a in zip(ys[2:-2], vs[2:-2], acc):
        basis, _ = np.linalg.qr(np.column_stack([v, A * A * y]))
        perp = a - basis @ (basis.T @ a)
        worst = max(worst, float(np.linalg.norm(perp)))
    if return_drift:
        q = np.sum(A * xs * xs, axis=1)
        return worst, float(np.max(np.abs(q - q[0])))
    return worst
