"""Symplectic billiard in convex polygons.

A phase point is ``(i, s, j, u)``: the first point lies on side ``i`` at
offset ``s`` (``x = v_i + s e_i`` with ``e_i = v_{i+1} - v_i``), the second
on side ``j`` at offset ``u``.  The image point is ``z = x + lam e_j`` with
``lam > 0``, the other intersection of that line with the boundary.

With rational vertices every quantity stays rational and the dynamics is
exact.  The same code runs on floats (regular polygons with irrational
vertices); there equality tests use a small tolerance.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import NonConvexCurve, NonGeneric, ParallelSides, PolygonMapUndefined, VertexHit

FLOAT_TOL = 1e-12
CLOSURE_TOL = 1e-9
START_DENOMINATOR = 10_000


def _num(v):
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    return float(v)


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


@dataclass(frozen=True)
class PolyPhasePoint:
    i: int
    s: object
    j: int
    u: object

    def as_tuple(self):
        return (self.i, self.s, self.j, self.u)


class ConvexPolygon:
    """Positively oriented strictly convex polygon.

    Vertices are kept exactly (``Fraction``) when every coordinate is
    rational, otherwise as floats.
    """

    def __init__(self, vertices):
        verts = [tuple(_num(c) for c in v) for v in vertices]
        self.exact = all(isinstance(c, Fraction) for v in verts for c in v)
        if not self.exact:
            verts = [tuple(float(c) for c in v) for v in verts]
        self.vertices = verts
        self.n = len(verts)
        if self.n < 3:
            raise NonConvexCurve("polygon needs at least 3 vertices")
        self.edges = [
            (verts[(k + 1) % self.n][0] - verts[k][0], verts[(k + 1) % self.n][1] - verts[k][1])
            for k in range(self.n)
        ]
        for k in range(self.n):
            if self.sign(_cross(self.edges[k], self.edges[(k + 1) % self.n])) <= 0:
                raise NonConvexCurve("vertices must be strictly convex and counter-clockwise")
        if len(set(verts)) != self.n:
            raise NonConvexCurve("repeated vertex")

    def __repr__(self):
        return f"ConvexPolygon({[tuple(map(str, v)) for v in self.vertices]})"

    def sign(self, x):
        if self.exact:
            return (x > 0) - (x < 0)
        if abs(x) <= FLOAT_TOL:
            return 0
        return 1 if x > 0 else -1

    def point(self, side, offset):
        v, e = self.vertices[side], self.edges[side]
        return (v[0] + offset * e[0], v[1] + offset * e[1])

    def to_float(self):
        return np.array([[float(c) for c in v] for v in self.vertices])

    def to_dict(self):
        return {"type": "polygon", "vertices": [[str(c) for c in v] for v in self.vertices]}

    def area(self):
        return sum(_cross(self.vertices[k], self.vertices[(k + 1) % self.n]) for k in range(self.n)) / 2


def polygon_from_dict(d) -> ConvexPolygon:
    if d.get("type") != "polygon":
        raise ValueError("expected a polygon description")
    return ConvexPolygon(d["vertices"])


def in_phase_space(poly: ConvexPolygon, pt: PolyPhasePoint) -> bool:
    return poly.sign(_cross(poly.edges[pt.i], poly.edges[pt.j])) > 0


def _check(poly, pt, step=None):
    for off in (pt.s, pt.u):
        if poly.sign(off) <= 0 or poly.sign(off - 1) >= 0:
            raise VertexHit("point at a vertex", step)
    if poly.sign(_cross(poly.edges[pt.i], poly.edges[pt.j])) <= 0:
        raise ParallelSides("sides are parallel or the chord is outside phase space", step)


def poly_step(poly: ConvexPolygon, pt: PolyPhasePoint, step=None) -> PolyPhasePoint:
    """One step of the map; raises VertexHit or ParallelSides where undefined."""
    _check(poly, pt, step)
    x = poly.point(pt.i, pt.s)
    d = poly.edges[pt.j]
    for k in range(poly.n):
        if k == pt.i:
            continue
        ek = poly.edges[k]
        den = _cross(d, ek)
        if poly.sign(den) == 0:
            continue
        # x + lam d = v_k + mu e_k
        vk = poly.vertices[k]
        w = (vk[0] - x[0], vk[1] - x[1])
        lam = _cross(w, ek) / den
        mu = _cross(w, d) / den
        if poly.sign(lam) <= 0:
            continue
        if poly.sign(mu) < 0 or poly.sign(mu - 1) > 0:
            continue
        if poly.sign(mu) == 0 or poly.sign(mu - 1) == 0:
            raise VertexHit("image point is a vertex", step)
        return PolyPhasePoint(pt.j, pt.u, k, mu)
    raise ParallelSides("no exit side found", step)


def _same(poly, a: PolyPhasePoint, b: PolyPhasePoint, tol):
    if a.i != b.i or a.j != b.j:
        return False
    if poly.exact:
        return a.s == b.s and a.u == b.u
    return abs(a.s - b.s) <= tol and abs(a.u - b.u) <= tol


def orbit(poly: ConvexPolygon, start: PolyPhasePoint, n: int):
    """List of ``n + 1`` phase points starting at ``start``."""
    pts = [start]
    for k in range(n):
        pts.append(poly_step(poly, pts[-1], k))
    return pts


def detect_period(poly: ConvexPolygon, start: PolyPhasePoint, max_iters: int, tol=CLOSURE_TOL):
    """Least ``p`` with ``Phi^p(start) == start`` (exact for rational data).

    Returns ``None`` if no return happens within ``max_iters`` steps.
    Undefined steps raise with ``err.step`` set to the hitting time.
    """
    pt = start
    for k in range(1, max_iters + 1):
        pt = poly_step(poly, pt, k - 1)
        if _same(poly, pt, start, tol):
            return k
    return None


def regular_polygon_period(n: int, k: int) -> int:
    if n < 3 or not 1 <= k <= (n - 1) // 2:
        raise ValueError("need n >= 3 and 1 <= k <= (n-1)/2")
    g = n // gcd(n, 2 * k)
    return 2 * g if g % 2 == 0 else 4 * g


# affine images of regular polygons with rational vertices
_RATIONAL_REGULAR = {
    3: [(0, 0), (1, 0), (0, 1)],
    4: [(0, 0), (1, 0), (1, 1), (0, 1)],
    6: [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
}


def regular_polygon(n: int, exact: bool | None = None) -> ConvexPolygon:
    """Regular ``n``-gon, or a rational affine image of it for n = 3, 4, 6.

    The map commutes with affine transformations, so the affine image has
    the same dynamics.
    """
    if exact is None:
        exact = n in _RATIONAL_REGULAR
    if exact:
        if n not in _RATIONAL_REGULAR:
            raise ValueError(f"no rational model of the regular {n}-gon")
        return ConvexPolygon([(Fraction(a), Fraction(b)) for a, b in _RATIONAL_REGULAR[n]])
    return ConvexPolygon([(math.cos(2 * math.pi * m / n), math.sin(2 * math.pi * m / n)) for m in range(n)])


def _random_offset(rng: random.Random, exact: bool, denominator=START_DENOMINATOR):
    m = rng.randint(1, denominator - 1)
    return Fraction(m, denominator) if exact else m / denominator


def random_start(poly: ConvexPolygon, rng: random.Random, i=None, j=None) -> PolyPhasePoint:
    while True:
        ii = rng.randrange(poly.n) if i is None else i
        jj = rng.randrange(poly.n) if j is None else j
        pt = PolyPhasePoint(ii, _random_offset(rng, poly.exact), jj, _random_offset(rng, poly.exact))
        if in_phase_space(poly, pt):
            return pt


def generic_periods(poly, rng, samples, max_iters, i=None, j=None, max_tries=None):
    """Periods of ``samples`` random starts that do not hit an undefined point."""
    out = []
    tries = 0
    max_tries = max_tries or 50 * samples
    while len(out) < samples:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("too many degenerate starts")
        start = random_start(poly, rng, i, j)
        try:
            p = detect_period(poly, start, max_iters)
        except PolygonMapUndefined:
            continue
        out.append(p)
    return out


def verify_regular(n: int, k: int, samples=100, seed=0, exact=None):
    """Periods of random starts with rotation number ``k`` in the regular n-gon."""
    poly = regular_polygon(n, exact)
    expected = regular_polygon_period(n, k)
    rng = random.Random(seed)
    periods = generic_periods(poly, rng, samples, 10 * expected, i=0, j=k)
    return expected, periods


def trapezoid(ratio) -> ConvexPolygon:
    """Isosceles trapezoid with ``|AB| / (|AB| - |CD|) = ratio``.

    ``A = (0, 0), B = (r, 0), C = (r - 1/2, 1), D = (1/2, 1)``.
    """
    r = Fraction(ratio)
    if r <= 1:
        raise ValueError("ratio must exceed 1")
    if r.denominator == 1:
        raise NonGeneric(f"integer ratio {r} is not generic")
    h = Fraction(1, 2)
    return ConvexPolygon([(Fraction(0), Fraction(0)), (r, Fraction(0)), (r - h, Fraction(1)), (h, Fraction(1))])


def trapezoid_modulus(poly: ConvexPolygon) -> int:
    ab = poly.edges[0][0]
    cd = -poly.edges[2][0]
    return math.floor(ab / (ab - cd))


def trapezoid_periods(n: int) -> set:
    return {16 * n - 4, 16 * n + 4, 16 * n + 12}


def verify_trapezoid(ratio, samples=200, seed=0):
    poly = trapezoid(ratio)
    n = trapezoid_modulus(poly)
    rng = random.Random(seed)
    periods = generic_periods(poly, rng, samples, 10 * (16 * n + 12))
    return trapezoid_periods(n), periods


def neighborhood_census(poly: ConvexPolygon, start: PolyPhasePoint, radius, samples, seed=0, max_iters=1000):
    """Histogram of periods of random perturbations of ``start``.

    Offsets are moved by rationals of denominator ``10^6`` within ``radius``.
    Perturbations that leave phase space or hit an undefined point are
    recorded under the key ``"undefined"``.
    """
    rng = random.Random(seed)
    R = Fraction(radius) if poly.exact else float(radius)
    den = 10 ** 6
    hist = Counter()
    for _ in range(samples):
        d1 = Fraction(rng.randint(-den, den), den) * R
        d2 = Fraction(rng.randint(-den, den), den) * R
        if not poly.exact:
            d1, d2 = float(d1), float(d2)
        pt = PolyPhasePoint(start.i, start.s + d1, start.j, start.u + d2)
        try:
            hist[detect_period(poly, pt, max_iters)] += 1
        except PolygonMapUndefined:
            hist["undefined"] += 1
    return hist


def transport_product(poly: ConvexPolygon, points) -> float:
    """Product of ``sin a_{i-1/2} / sin a_{i+1/2}`` around a closed orbit.

    ``a_{i+1/2}`` is the angle between the sides carrying consecutive
    points; each projection along a side direction scales lengths on the
    next side by this ratio, and the product over a cycle is 1.
    """
    sides = [p.i for p in points]
    ang = []
    for a, b in zip(sides, sides[1:] + sides[:1]):
        ea, eb = poly.edges[a], poly.edges[b]
        ang.append(float(_cross(ea, eb)) / math.hypot(*map(float, ea)) / math.hypot(*map(float, eb)))
    prod = 1.0
    for m in range(len(ang)):
        prod *= ang[m - 1] / ang[m]
    return prod


def orbit_points(poly: ConvexPolygon, points):
    """Planar positions of the first points of a list of phase points."""
    return np.array([[float(c) for c in poly.point(p.i, p.s)] for p in points])


# quadrilateral with the 3-periodic orbit (1,0) -> (1,1) -> (0,1)
ODD_QUAD = [("0", "0"), ("17/10", "0"), ("19/10", "1/10"), ("0", "2")]


def odd_orbit_example():
    """A generic quadrilateral and a phase point of odd period 3."""
    poly = ConvexPolygon(ODD_QUAD)
    start = PolyPhasePoint(0, Fraction(10, 17), 2, Fraction(9, 19))
    return poly, start
