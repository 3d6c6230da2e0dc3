"""Classical long-knot curves, knotted-arc extraction and crossing detection.

A KnotCurve is a triple of CoordFns over a parameter interval.  The catalog
carries the built-in example curves; `crossings` locates the double points of
the (x, y) projection by a grid scan plus 2-D Newton refinement and classifies
them over/under by the z coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import (
    BadBoundary,
    DegenerateCrossing,
    NoCrossings,
    NonConvergence,
    UnknownKnot,
)
from .polycore import CoordFn, Interval, real_roots

CROSSING_TOL = 1e-8
_GRID = 1024  # cells per axis in the crossing scan
_DIAG_BAND = 10  # grid steps excluded around the t1 == t2 diagonal


@dataclass(frozen=True)
class KnotCurve:
    """Parametric space curve t -> (x, y, z)(t) on a real interval."""

    x: CoordFn
    y: CoordFn
    z: CoordFn
    domain: Interval
    periodic: bool = False
    name: str = ""

    def point(self, t):
        return np.stack([self.x(t), self.y(t), self.z(t)], axis=-1)


@dataclass(frozen=True)
class ArcSpec:
    """Knotted arc: z(a) = 0 = z(b), z > 0 strictly inside (a, b)."""

    curve: KnotCurve
    a: float
    b: float

    def __post_init__(self):
        z = self.curve.z
        if abs(z(self.a)) > 1e-9 or abs(z(self.b)) > 1e-9:
            raise BadBoundary(
                f"z must vanish at the arc endpoints: z({self.a}) = {z(self.a)}, "
                f"z({self.b}) = {z(self.b)}"
            )
        ts = np.linspace(self.a, self.b, 4098)[1:-1]
        zin = np.asarray(z(ts))
        if np.any(zin <= 0):
            t_bad = float(ts[int(np.argmin(zin))])
            raise BadBoundary(f"z is not positive inside the arc (z({t_bad}) = {z(t_bad)})")

    @property
    def interval(self) -> Interval:
        return Interval(self.a, self.b)


@dataclass(frozen=True)
class CrossingDatum:
    """One double point of the (x, y) projection, classified by z."""

    t_over: float
    t_under: float
    xy: tuple[float, float]

    @property
    def t_first(self) -> float:
        return min(self.t_over, self.t_under)

    @property
    def t_second(self) -> float:
        return max(self.t_over, self.t_under)


def _poly(*coeffs_by_power: tuple[float, int]) -> CoordFn:
    return CoordFn(tuple((c, p, None) for c, p in coeffs_by_power))


def _torus_2_7() -> KnotCurve:
    radial = CoordFn.trig("cos", 7) + CoordFn.constant(3.0)
    return KnotCurve(
        x=CoordFn.trig("cos", 2) * radial,
        y=CoordFn.trig("sin", 2) * radial,
        z=CoordFn.trig("sin", 7),
        domain=Interval(0.0, 2.0 * math.pi),
        periodic=True,
        name="torus-2-7",
    )


_CATALOG: dict[str, tuple] = {
    # name -> (builder, description)
    "trefoil-long": (
        lambda: KnotCurve(
            _poly((1, 3), (-3, 1)),
            _poly((1, 5), (-10, 1)),
            _poly((1, 4), (-4, 2)),
            Interval(-math.inf, math.inf),
            name="trefoil-long",
        ),
        "long trefoil (t^3-3t, t^5-10t, t^4-4t^2) on R",
    ),
    "trefoil-arc": (
        lambda: KnotCurve(
            _poly((1, 3), (-3, 1)),
            _poly((1, 5), (-10, 1)),
            _poly((-1, 4), (4, 2), (3, 0)),
            Interval(-2.5, 2.5),
            name="trefoil-arc",
        ),
        "trefoil arc with height -t^4+4t^2+3 (vanishes at +-2.15534)",
    ),
    "figure8-arc": (
        lambda: KnotCurve(
            _poly((0.4, 5), (-6.8, 3), (28.0, 1)),
            _poly((0.1, 7), (-2.5, 5), (19.2, 3), (-43.2, 1)),
            _poly((-1, 4), (-13, 2), (20, 0)),
            Interval(-3.7934, 3.7934),
            name="figure8-arc",
        ),
        "figure-eight curve with height 20-13t^2-t^4 (vanishes at +-1.17893)",
    ),
    "torus-2-7": (_torus_2_7, "T(2,7) torus knot, trig coordinates on [0, 2pi]"),
    "trefoil-twist-arc": (
        lambda: KnotCurve(
            _poly((1, 3), (-3, 1)),
            _poly((1, 5), (-10, 1)),
            _poly((-1, 4), (4, 2), (16, 0)),
            Interval(-3.0, 3.0),
            name="trefoil-twist-arc",
        ),
        "trefoil arc with height -t^4+4t^2+16 (vanishes at +-2.54404)",
    ),
}


def catalog_names() -> list[str]:
    return list(_CATALOG)


def catalog_describe(name: str) -> str:
    if name not in _CATALOG:
        raise UnknownKnot(f"no catalog entry named {name!r}")
    return _CATALOG[name][1]


def catalog_get(name: str) -> KnotCurve:
    """Return a built-in curve by name; raises UnknownKnot otherwise."""
    if name not in _CATALOG:
        raise UnknownKnot(
            f"no catalog entry named {name!r}; choose from {', '.join(_CATALOG)}"
        )
    return _CATALOG[name][0]()


def swap_yz(curve: KnotCurve) -> KnotCurve:
    """Exchange the 2nd and 3rd coordinates (height convention switch)."""
    return KnotCurve(
        curve.x, curve.z, curve.y, curve.domain, curve.periodic,
        name=curve.name + "-yz" if curve.name else "",
    )


def arc_from_curve(curve: KnotCurve) -> ArcSpec:
    """Extract the knotted arc between the two simple roots of z."""
    if not curve.domain.finite:
        raise BadBoundary("arc extraction requires a finite curve domain")
    if not curve.z.is_polynomial:
        roots = real_roots(curve.z, curve.domain, tol=1e-12)
    else:
        roots = real_roots(curve.z.to_poly1(), curve.domain, tol=1e-12)
    if len(roots) != 2:
        raise BadBoundary(f"z must have exactly two simple roots in the domain, found {len(roots)}")
    return ArcSpec(curve, roots[0], roots[1])


def working_window(curve: KnotCurve) -> Interval:
    """Finite scan window for curves on R.

    Takes the hull of the critical points of x and y, then grows it until an
    odd-degree coordinate exceeds every one of its critical values, at which
    point no crossing can involve a parameter outside the window.
    """
    if curve.domain.finite:
        return curve.domain
    crit: list[float] = []
    escapes: list[float] = []
    for fn in (curve.x, curve.y):
        p = fn.to_poly1()
        dp = p.derivative()
        span = Interval(-64.0, 64.0)
        cps = [] if dp.is_zero else real_roots(dp, span, tol=1e-10)
        crit.extend(cps)
        if p.degree % 2 == 1 and cps:
            bound = max(abs(float(p(c))) for c in cps) + 1.0
            t = max(abs(c) for c in cps) + 1.0
            while abs(float(p(t))) <= bound or abs(float(p(-t))) <= bound:
                t *= 1.25
                if t > 1e6:
                    break
            escapes.append(t)
    base = max((abs(c) for c in crit), default=1.0) + 1.0
    T = min(escapes) if escapes else base + 5.0
    T = max(T, base) + 0.5
    return Interval(-T, T)


def crossings(curve: KnotCurve, tol: float = CROSSING_TOL) -> list[CrossingDatum]:
    """All parameter pairs (t1 < t2) where the (x, y) projection self-meets.

    Scans the triangle t1 < t2 on a uniform grid for simultaneous sign changes
    of x(t1)-x(t2) and y(t1)-y(t2), refines each candidate with 2-D Newton and
    classifies over/under by z.  Tangential (equal-height) meetings raise
    DegenerateCrossing.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    window = working_window(curve)
    ts = window.grid(_GRID + 1)
    step = ts[1] - ts[0]
    X = np.asarray(curve.x(ts))
    Y = np.asarray(curve.y(ts))

    dX = X[:, None] - X[None, :]
    dY = Y[:, None] - Y[None, :]
    sX = np.sign(dX)
    sY = np.sign(dY)
    cX = np.abs(sX[:-1, :-1] + sX[1:, :-1] + sX[:-1, 1:] + sX[1:, 1:]) < 4
    cY = np.abs(sY[:-1, :-1] + sY[1:, :-1] + sY[:-1, 1:] + sY[1:, 1:]) < 4
    cand = np.argwhere(cX & cY)
    cand = cand[cand[:, 1] - cand[:, 0] > _DIAG_BAND]
    if curve.periodic:
        period_steps = round(curve.domain.width / step)
        cand = cand[(period_steps - (cand[:, 1] - cand[:, 0])) > _DIAG_BAND]

    dx, dy = curve.x.derivative(), curve.y.derivative()
    found: list[tuple[float, float]] = []
    for i, j in cand:
        c1 = float(ts[i]) + 0.5 * step
        c2 = float(ts[j]) + 0.5 * step
        t1, t2 = c1, c2
        ok = False
        for _ in range(60):
            F = np.array([curve.x(t1) - curve.x(t2), curve.y(t1) - curve.y(t2)])
            J = np.array([[dx(t1), -dx(t2)], [dy(t1), -dy(t2)]])
            det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
            if det == 0.0 or not np.all(np.isfinite(J)):
                break
            d = np.linalg.solve(J, F)
            t1, t2 = t1 - float(d[0]), t2 - float(d[1])
            if max(abs(float(d[0])), abs(float(d[1]))) < 1e-14:
                ok = True
                break
        if not ok and not (
            abs(curve.x(t1) - curve.x(t2)) <= tol and abs(curve.y(t1) - curve.y(t2)) <= tol
        ):
            # a wandering iterate means the cell's sign changes were spurious;
            # a failure that stayed put is a genuine refinement failure
            if max(abs(t1 - c1), abs(t2 - c2)) <= 10 * step:
                raise NonConvergence(
                    f"Newton refinement failed near t1={ts[i]:.4f}, t2={ts[j]:.4f}"
                )
            continue
        lo, hi = (t1, t2) if t1 < t2 else (t2, t1)
        sep = hi - lo
        if curve.periodic:
            sep = min(sep, curve.domain.width - sep)
        if sep <= _DIAG_BAND * step:
            continue
        if not (window.contains(lo, step) and window.contains(hi, step)):
            continue
        if abs(curve.x(lo) - curve.x(hi)) > tol or abs(curve.y(lo) - curve.y(hi)) > tol:
            continue
        found.append((lo, hi))

    found.sort()
    unique: list[tuple[float, float]] = []
    for pair in found:
        if any(abs(pair[0] - u[0]) < 1e-6 and abs(pair[1] - u[1]) < 1e-6 for u in unique):
            continue
        unique.append(pair)

    out: list[CrossingDatum] = []
    for t1, t2 in unique:
        z1, z2 = float(curve.z(t1)), float(curve.z(t2))
        if abs(z1 - z2) <= tol:
            raise DegenerateCrossing(
                f"strands at t={t1:.6f}, t={t2:.6f} meet at equal height z={z1:.6f}"
            )
        t_over, t_under = (t1, t2) if z1 > z2 else (t2, t1)
        xy = (float(curve.x(t1)), float(curve.y(t1)))
        out.append(CrossingDatum(t_over, t_under, xy))
    out.sort(key=lambda c: c.t_first)
    return out


def crossing_span(curve: KnotCurve, found: list[CrossingDatum] | None = None) -> Interval:
    """Smallest interval holding every crossing parameter, padded by 1%."""
    data = crossings(curve) if found is None else found
    if not data:
        raise NoCrossings(f"curve {curve.name or '<anonymous>'} has no crossings")
    ts = [t for c in data for t in (c.t_over, c.t_under)]
    lo, hi = min(ts), max(ts)
    pad = 0.01 * (hi - lo)
    return Interval(lo - pad, hi + pad)
