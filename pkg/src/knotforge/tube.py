"""Welded diagrams and the Tube map to ribbon torus surfaces.

A welded diagram is a closed base curve plus its crossings, each either
classical (carrying over/under data) or welded (carrying first/second visit
order).  Compactly supported bumps centred at crossing parameters build the
shrink profile S_c (classical under-strands) and the displacement profile S_w
(welded strands); the tube surface threads a unit circle along the projection
with those profiles perturbing the section centers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IntervalOverlap
from .knots import KnotCurve, crossings
from .polycore import CoordFn, Interval
from .spin import COS_S, FULL_TURN, SIN_S
from .surfaces import NumFactor, ONE, Surface4, coord_of, single_piece_surface

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WeldedDiagram:
    """Base curve with crossing intervals of common length L.

    classical entries are (t_over, t_under); welded entries are
    (t_first, t_second) by traversal order.  All 2(n+m) intervals
    [t - L/2, t + L/2] must be pairwise disjoint modulo the period.
    """

    base: KnotCurve
    classical: tuple[tuple[float, float], ...]
    welded: tuple[tuple[float, float], ...]
    L: float

    def __post_init__(self):
        if self.L <= 0:
            raise IntervalOverlap("interval length L must be positive")
        centers = sorted(t % TWO_PI for pair in self.classical + self.welded for t in pair)
        successors = centers[1:] + [centers[0] + TWO_PI] if centers else []
        for a, b in zip(centers, successors):
            if b - a < self.L - 1e-12:
                raise IntervalOverlap(
                    f"crossing intervals of length {self.L:.6f} overlap near t = {a:.6f}"
                )

    @property
    def half_width(self) -> float:
        return 0.5 * self.L


@dataclass(frozen=True)
class TubeParams:
    """Tube radius r, shrinking factor d_c, displacement factor d_w."""

    r: float = 0.7
    d_c: float = 1.0
    d_w: float = 5.0

    def __post_init__(self):
        if self.r <= 0 or self.d_c < 0 or self.d_w < 0:
            raise ValueError("need r > 0 and nonnegative d_c, d_w")


def compact_bump(x, c: float, w: float):
    """exp(-w^2 / (w^2 - (x-c)^2)) inside |x-c| < w, zero outside."""
    if w <= 0:
        raise ValueError("width must be positive")
    x = np.asarray(x, dtype=float)
    d = x - c
    inside = np.abs(d) < w
    out = np.zeros_like(d)
    if np.any(inside):
        denom = w * w - d[inside] ** 2
        out[inside] = np.exp(-w * w / denom)
    return out if out.ndim else float(out)


def _periodic_bump_sum(x, centers: list[float], w: float):
    """Sum of bumps at centers, wrapped onto the period [0, 2pi)."""
    x = np.mod(np.asarray(x, dtype=float), TWO_PI)
    out = np.zeros_like(x)
    for c in centers:
        c = c % TWO_PI
        for shift in (-TWO_PI, 0.0, TWO_PI):
            cc = c + shift
            if -w < cc < TWO_PI + w:
                out = out + compact_bump(x, cc, w)
    return out if out.ndim else float(out)


def shrink_profile(diag: WeldedDiagram):
    """S_c: sum of bumps at every classical under-crossing parameter."""
    centers = [under for _, under in diag.classical]
    w = diag.half_width
    return lambda x: _periodic_bump_sum(x, centers, w)


def displace_profile(diag: WeldedDiagram):
    """S_w: alternating bump sum, +1 at first visits, -1 at second visits."""
    first = [a for a, _ in diag.welded]
    second = [b for _, b in diag.welded]
    w = diag.half_width

    def profile(x):
        return _periodic_bump_sum(x, first, w) - _periodic_bump_sum(x, second, w)

    return profile


def tube_surface(
    diag: WeldedDiagram, params: TubeParams, true_radius: bool = False
) -> Surface4:
    """Ribbon torus parametrization of Tube(K) on [0,2pi] x [0,2pi].

    (t, s) -> ( f, (r - d_c S_c) g + cos s, (r - d_c S_c) g + sin s + d_w S_w, h ).
    The section circle has unit amplitude regardless of r; the extension flag
    true_radius scales it by r instead.
    """
    f, g, h = diag.base.x, diag.base.y, diag.base.z
    sc = shrink_profile(diag)
    sw = displace_profile(diag)
    r, d_c, d_w = params.r, params.d_c, params.d_w

    def center(t):
        return (r - d_c * np.asarray(sc(t))) * np.asarray(g(t))

    def displaced(t):
        return d_w * np.asarray(sw(t))

    amp = float(params.r) if true_radius else 1.0
    circle_cos = COS_S.scaled(amp)
    circle_sin = SIN_S.scaled(amp)
    center_f = NumFactor(center, "section-center")
    coords = (
        coord_of((f, ONE)),
        coord_of((center_f, ONE), (CoordFn.constant(1.0), circle_cos)),
        coord_of(
            (center_f, ONE),
            (NumFactor(displaced, "welded-displacement"), ONE),
            (CoordFn.constant(1.0), circle_sin),
        ),
        coord_of((h, ONE)),
    )
    return single_piece_surface(
        Interval(0.0, TWO_PI),
        FULL_TURN,
        coords,
        wrap_s=True,
        name=f"tube({diag.base.name})" if diag.base.name else "tube",
    )


def _rationalize_to_pi(value: float, max_den: int = 100) -> float:
    """Largest p/q * pi <= value (tiny slack) with denominator <= max_den."""
    best = 0.0
    for q in range(1, max_den + 1):
        p = math.floor((value + 1e-12) * q / math.pi)
        cand = p * math.pi / q
        if cand <= value + 1e-12 and cand > best:
            best = cand
    return best


def default_interval_length(visits: list[float], period: float = TWO_PI,
                            rationalize: bool = False) -> float:
    """Largest L keeping all open crossing intervals disjoint: the minimum
    cyclic gap between consecutive visit parameters."""
    if len(visits) < 2:
        raise IntervalOverlap("need at least two visit parameters to size intervals")
    pts = sorted(v % period for v in visits)
    gaps = [b - a for a, b in zip(pts, pts[1:])] + [pts[0] + period - pts[-1]]
    min_gap = min(gaps)
    if min_gap <= 0:
        raise IntervalOverlap("two crossings share a parameter value; no admissible L")
    return _rationalize_to_pi(min_gap) if rationalize else min_gap


def weldify(
    curve: KnotCurve,
    pattern: list[int] | tuple[int, ...] = (),
    L: float | None = None,
) -> WeldedDiagram:
    """Turn a closed curve into a welded diagram by welding chosen crossings.

    pattern holds 1-based crossing numbers in first-visit parameter order, as
    printed by the crossings table.  Welded entries record (first, second)
    visits; the remaining crossings keep their over/under data.  L defaults to
    the largest admissible length, snapped down to a rational multiple of pi
    for trig-only base curves.
    """
    found = crossings(curve)
    bad = [i for i in pattern if not 1 <= i <= len(found)]
    if bad:
        raise IntervalOverlap(
            f"crossing numbers {bad} out of range 1..{len(found)}"
        )
    chosen = set(pattern)
    classical = []
    welded = []
    for idx, cr in enumerate(found, start=1):
        if idx in chosen:
            welded.append((cr.t_first, cr.t_second))
        else:
            classical.append((cr.t_over, cr.t_under))
    if L is None:
        visits = [t for cr in found for t in (cr.t_over, cr.t_under)]
        trig_only = all(
            all(p == 0 for _, p, _ in fn.terms) for fn in (curve.x, curve.y, curve.z)
        )
        L = default_interval_length(visits, rationalize=trig_only)
    return WeldedDiagram(curve, tuple(classical), tuple(welded), float(L))
