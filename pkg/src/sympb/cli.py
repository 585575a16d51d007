"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed (or a solver gave up),
2 usage error, 3 invalid table description.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import curve2d, map2d, polymap, spectrum, svg, symp2n, verify
from .errors import NonConvexCurve, NonGeneric, SympbError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_TABLE = 0, 1, 2, 3
ITERATION_CAP = 10 ** 7


class UsageError(Exception):
    pass


class TableError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    check: str | None = None
    table: str | None = None
    options: dict = field(default_factory=dict)
    out: str | None = None
    seed: int = 0
    iteration_cap: int = ITERATION_CAP

    def validate(self):
        for key, val in self.options.items():
            if val is None:
                continue
            if key in ("iters", "seeds", "samples", "steps", "chords") and not (0 < val <= self.iteration_cap):
                raise UsageError(f"--{key} must lie in [1, {self.iteration_cap}]")
            if key in ("tol", "rtol") and not val > 0:
                raise UsageError(f"--{key} must be positive")


# --- table parsing ----------------------------------------------------

_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$")


def _floats(text):
    if text is None or not text.strip():
        return []
    return [float(v) for v in text.split(",")]


def parse_curve(spec: str):
    """Curve from a JSON file path or a shorthand such as ``ellipse(2,1)``.

    Shorthands: ``circle``, ``circle(r)``, ``ellipse(a,b)``, ``radon(p)``,
    ``lp(p)``, ``fourier(c0,c1,s1,c2,s2,...)``.
    """
    try:
        if os.path.exists(spec):
            with open(spec, encoding="utf-8") as fh:
                return curve2d.curve_from_dict(json.load(fh))
        m = _CALL.match(spec)
        if not m:
            raise TableError(f"cannot parse curve {spec!r}")
        name, args = m.group(1), _floats(m.group(2))
        if name == "circle":
            return curve2d.circle(*args[:1])
        if name == "ellipse" and len(args) == 2:
            return curve2d.EllipseCurve(*args)
        if name == "radon" and len(args) == 1:
            return curve2d.RadonCurve(args[0])
        if name == "lp" and len(args) == 1:
            return curve2d.LpCurve(args[0])
        if name == "fourier" and len(args) % 2 == 1:
            return curve2d.FourierCurve(args[0], args[1:])
        raise TableError(f"cannot parse curve {spec!r}")
    except (NonConvexCurve, NonGeneric, KeyError, ValueError, TypeError) as err:
        raise TableError(str(err)) from err


def parse_body(spec: str | None, a: str | None):
    try:
        if spec:
            with open(spec, encoding="utf-8") as fh:
                return symp2n.table_from_dict(json.load(fh))
        if a:
            w = _floats(a)
            if not w or min(w) <= 0:
                raise TableError("weights must be positive")
            return symp2n.WeightedSphere(w)
    except (OSError, KeyError, ValueError, TypeError) as err:
        raise TableError(str(err)) from err
    raise UsageError("a table is required: --table FILE or --a w1,w2,...")


def parse_polygon(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return polymap.polygon_from_dict(json.load(fh))
    except (OSError, KeyError, ValueError, TypeError, ZeroDivisionError) as err:
        raise TableError(str(err)) from err


# --- output helpers ---------------------------------------------------

def _num(v):
    return format(float(v), ".17g")


def _dump(doc, path):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path:
        svg.write(path, text)
    else:
        sys.stdout.write(text)


def _threads():
    try:
        return max(1, int(os.environ.get("SYMPB_THREADS", "1")))
    except ValueError:
        return 1


def portrait_csv(curve, records) -> str:
    lines = ["orbit_id,iter,t1,t2,S12"]
    for k, rec in enumerate(records):
        for it, (a, b) in enumerate(rec.chords()):
            s12 = float(curve2d.cross(curve.velocity(a), curve.velocity(b)))
            lines.append(f"{k},{it},{_num(a)},{_num(b)},{_num(s12)}")
    return "\n".join(lines) + "\n"


def portrait_seeds(curve, count, rng):
    """Chords with random base point and evenly spread openings."""
    seeds = []
    for j in range(count):
        t1 = float(rng.uniform(0.0, curve.period))
        gap = curve.opposite(t1) - t1
        seeds.append((t1, t1 + gap * (j + 1) / (count + 1)))
    return seeds


# --- commands ---------------------------------------------------------

def cmd_portrait(cfg: RunConfig):
    o = cfg.options
    curve = parse_curve(o["curve"])
    seeds = portrait_seeds(curve, o["seeds"], np.random.default_rng(cfg.seed))
    records = map2d.portrait(curve, seeds, o["iters"], workers=_threads())
    text = portrait_csv(curve, records)
    if cfg.out:
        svg.write(cfg.out, text)
    else:
        sys.stdout.write(text)
    if o.get("svg"):
        svg.write(o["svg"], svg.portrait_svg(records))
    return EXIT_OK


def _curve_outline(curve, m=400):
    t = np.linspace(0.0, curve.period, m, endpoint=False)
    return curve.point(t)


def cmd_orbit(cfg: RunConfig):
    o = cfg.options
    if o.get("polygon"):
        poly = parse_polygon(o["polygon"])
        start = polymap.PolyPhasePoint(o["i"], Fraction(o["s"]) if poly.exact else float(Fraction(o["s"])),
                                       o["j"], Fraction(o["u"]) if poly.exact else float(Fraction(o["u"])))
        if not polymap.in_phase_space(poly, start):
            raise UsageError("start is not in phase space")
        pts = polymap.orbit(poly, start, o["iters"])
        period = polymap.detect_period(poly, start, o["iters"])
        doc = {
            "schema": verify.SCHEMA,
            "table": poly.to_dict(),
            "period": period,
            "points": [[p.i, str(p.s), p.j, str(p.u)] for p in pts],
        }
        outline = poly.to_float()
        planar = polymap.orbit_points(poly, pts[: (period or len(pts))])
        closed = period is not None
    else:
        curve = parse_curve(o["curve"])
        rec = map2d.iterate(curve, o["t1"], o["t2"], o["iters"])
        doc = {
            "schema": verify.SCHEMA,
            "table": curve2d.curve_to_dict(curve),
            "period": rec.period,
            "hit_boundary": rec.hit_boundary,
            "params": rec.params,
            "actions": rec.actions,
        }
        outline = _curve_outline(curve)
        params = rec.params[: rec.period] if rec.period else rec.params
        planar = curve.point(np.array(params))
        closed = rec.period is not None
    _dump(doc, cfg.out)
    if o.get("svg"):
        svg.write(o["svg"], svg.orbit_svg(outline, [planar], closed=closed))
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig):
    o = cfg.options
    curve = parse_curve(o["curve"])
    n_list = [int(v) for v in _floats(o["n"])] if o.get("n") else list(spectrum.DEFAULT_N)
    try:
        fit = spectrum.fit_spectrum(curve, n_list)
    except ValueError as err:
        raise UsageError(str(err)) from err
    doc = {"schema": verify.SCHEMA, "table": curve2d.curve_to_dict(curve), **fit.to_dict()}
    _dump(doc, cfg.out)
    return EXIT_OK


def cmd_find_periodic(cfg: RunConfig):
    o = cfg.options
    body = parse_body(o.get("table"), o.get("a"))
    orbit = symp2n.find_periodic(body, o["k"], np.random.default_rng(cfg.seed))
    doc = {
        "schema": verify.SCHEMA,
        "k": o["k"],
        "seed": cfg.seed,
        "residual": symp2n.periodic_residual(body, orbit),
        "area": symp2n.area_functional(body, orbit),
        "subspace_dimension": symp2n.subspace_dimension(orbit),
        "points": orbit.tolist(),
    }
    _dump(doc, cfg.out)
    return EXIT_OK


def _verify_reports(cfg: RunConfig):
    o, c = cfg.options, cfg.check
    if c == "phase-area":
        return verify.check_phase_area(parse_curve(o["curve"] or "circle"))
    if c == "mather":
        return verify.check_mather(parse_curve(o["curve"]) if o["curve"] else None, seed=cfg.seed)
    if c == "lazutkin":
        return verify.check_lazutkin(parse_curve(o["curve"] or "fourier(1,0,0,0,0,0.1,0)"), t=o["t"])
    if c == "spectrum":
        return verify.check_spectrum(parse_curve(o["curve"] or "circle"))
    if c == "ellipse-test":
        curve = parse_curve(o["curve"] or "circle")
        is_ellipse = isinstance(curve, curve2d.EllipseCurve) or (
            isinstance(curve, curve2d.FourierCurve) and not np.any(curve.coeffs[1:])
        )
        return verify.check_ellipse_test(curve, is_ellipse)
    if c == "regular-ngon":
        if o["n"] is None or o["n"] < 3 or not 1 <= o["k"] < o["n"] / 2:
            raise UsageError("need n >= 3 and 1 <= k < n/2")
        return verify.check_regular_ngon(o["n"], o["k"], o["samples"] or 100, cfg.seed)
    if c == "trapezoid":
        if not o["modulus"] or o["modulus"] < 1:
            raise UsageError("--modulus must be a positive integer")
        return verify.check_trapezoid(o["modulus"], o["samples"] or 200, cfg.seed)
    if c == "radon":
        return verify.check_radon(o["p"], o["samples"] or 50, cfg.seed)
    weights = tuple(_floats(o["a"])) if o["a"] else None
    if weights is not None and (not weights or min(weights) <= 0):
        raise TableError("weights must be positive")
    if c == "integrals":
        return verify.check_integrals(weights or (1.0, 2.0, 3.0), o["iters"] or 10_000, cfg.seed)
    if c == "hodo":
        return verify.check_hodo(weights or (1.0, 2.0), o["iters"] or 500, cfg.seed)
    if c == "sphere-explicit":
        return verify.check_sphere_explicit(2, o["chords"] or 1000, o["steps"] or 1000, cfg.seed)
    if c == "subspace":
        return verify.check_subspace((weights,) if weights else ((1.0, 2.0), (1.0, 2.0, 3.0)), cfg.seed)
    if c == "geodesic":
        return verify.check_geodesic(weights or (1.0, 2.0))
    raise UsageError(f"unknown check {c!r}")


def cmd_verify(cfg: RunConfig):
    reports = _verify_reports(cfg)
    _dump(verify.report_document(reports, cfg.options.get("timing", False)), cfg.out)
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.check}: {r.property} ({r.runtime:.2f} s)", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


COMMANDS = {
    "portrait": cmd_portrait,
    "orbit": cmd_orbit,
    "spectrum": cmd_spectrum,
    "find-periodic": cmd_find_periodic,
    "verify": cmd_verify,
}

CHECKS = [
    "phase-area", "mather", "lazutkin", "spectrum", "ellipse-test", "regular-ngon", "trapezoid",
    "radon", "integrals", "hodo", "sphere-explicit", "subspace", "geodesic",
]


def build_parser():
    p = argparse.ArgumentParser(prog="sympb", description="Symplectic billiards toolkit")
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    sp = sub.add_parser("portrait", help="phase portrait CSV (and optional SVG)")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--seeds", type=int, default=10)
    sp.add_argument("--iters", type=int, default=1000)
    sp.add_argument("--svg")
    common(sp)

    sp = sub.add_parser("orbit", help="single orbit of a curve or polygon table")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--curve")
    g.add_argument("--polygon")
    sp.add_argument("--t1", type=float, default=0.0)
    sp.add_argument("--t2", type=float, default=1.0)
    sp.add_argument("--i", type=int, default=0)
    sp.add_argument("--s", default="1/2")
    sp.add_argument("--j", type=int, default=1)
    sp.add_argument("--u", default="1/2")
    sp.add_argument("--iters", type=int, default=100)
    sp.add_argument("--svg")
    common(sp)

    sp = sub.add_parser("spectrum", help="fit of maximal inscribed polygon areas")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--n")
    common(sp)

    sp = sub.add_parser("find-periodic", help="variational k-periodic orbit in R^2n")
    sp.add_argument("--a")
    sp.add_argument("--table")
    sp.add_argument("--k", type=int, required=True)
    common(sp)

    sp = sub.add_parser("verify", help="run a verification check")
    sp.add_argument("check", choices=CHECKS)
    sp.add_argument("--curve")
    sp.add_argument("--t", type=float, default=0.3)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--modulus", type=int)
    sp.add_argument("--p", type=float, default=3.0)
    sp.add_argument("--a")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--iters", type=int)
    sp.add_argument("--chords", type=int)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--timing", action="store_true", help="include runtimes in the JSON report")
    common(sp)
    return p


def config_from_args(ns) -> RunConfig:
    d = dict(vars(ns))
    command = d.pop("command")
    check = d.pop("check", None)
    out = d.pop("out", None)
    seed = d.pop("seed")
    return RunConfig(command, check, d.get("table") or d.get("curve"), d, out, seed)


def run(cfg: RunConfig) -> int:
    cfg.validate()
    return COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = config_from_args(ns)
    print(f"seed: {cfg.seed}", file=sys.stderr)
    try:
        return run(cfg)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except TableError as err:
        print(f"invalid table: {err}", file=sys.stderr)
        return EXIT_TABLE
    except SympbError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
