"""d-twist spinning: rotate the knotted part about a chord while spinning.

The chord PQ joins two arc points at equal height c.  Rotation about it is
the translate-rotate-translate sandwich T_c * R * T_{-c} with R the Rodrigues
rotation about the parallel chord in the boundary plane.  A smooth bump
confines the rotation to the knotted part, and the rotation angle is coupled
to the spin angle as phi = d * theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AxisTooLow, BumpMismatch, NoAxis
from .knots import ArcSpec, CrossingDatum, crossing_span, crossings
from .polycore import CoordFn, Interval
from .spin import COS_S, FULL_TURN, SIN_S
from .surfaces import NumFactor, ONE, Surface4, coord_of, single_piece_surface

_PLATEAU_TOL = 1e-6


@dataclass(frozen=True)
class SmoothBump:
    """Smooth plateau: 1 for t*t <= d2, 0 for t*t >= d1, graded between."""

    d1: float
    d2: float

    def __post_init__(self):
        if not 0 < self.d2 < self.d1:
            raise ValueError(f"need 0 < d2 < d1, got d1={self.d1}, d2={self.d2}")

    def __call__(self, t):
        return smooth_bump_eval(self, t)


def smooth_bump_eval(bump: SmoothBump, t):
    """Evaluate F(d1-t^2) / (F(t^2-d2) + F(d1-t^2)) with F(x) = exp(-1/x).

    Computed as 1 / (1 + exp(1/x1 - 1/x2)) on the graded zone, which never
    underflows to 0/0; the plateaus are exact 1.0 and 0.0.
    """
    t = np.asarray(t, dtype=float)
    tsq = t * t
    x1 = bump.d1 - tsq  # > 0 where the bump is nonzero
    x2 = tsq - bump.d2  # > 0 where the bump is below one
    out = np.empty_like(tsq)
    out[x1 <= 0] = 0.0
    out[x2 <= 0] = 1.0
    mid = (x1 > 0) & (x2 > 0)
    if np.any(mid):
        with np.errstate(over="ignore"):
            expo = np.exp(1.0 / x1[mid] - 1.0 / x2[mid])
        out[mid] = 1.0 / (1.0 + expo)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class TwistAxis:
    """Chord PQ between arc parameters t1 < t2 at common height c."""

    t1: float
    t2: float
    c: float
    f21: float
    g21: float
    N: float

    @property
    def n_squared(self) -> float:
        return self.f21 * self.f21 + self.g21 * self.g21


def axis_for(arc: ArcSpec, t1: float, t2: float) -> TwistAxis:
    """Build and validate the chord through the arc points at t1, t2."""
    curve = arc.curve
    z1, z2 = float(curve.z(t1)), float(curve.z(t2))
    if abs(z1 - z2) > 1e-6:
        raise NoAxis(f"arc heights differ at the chord ends: z({t1}) = {z1}, z({t2}) = {z2}")
    f21 = float(curve.x(t2)) - float(curve.x(t1))
    g21 = float(curve.y(t2)) - float(curve.y(t1))
    n2 = f21 * f21 + g21 * g21
    if n2 <= 0:
        raise NoAxis("chord endpoints project to the same point; no rotation axis")
    return TwistAxis(t1, t2, 0.5 * (z1 + z2), f21, g21, math.sqrt(n2))


def choose_axis(
    arc: ArcSpec,
    span: Interval,
    t1: float | None = None,
    t2: float | None = None,
) -> TwistAxis:
    """Pick the rotation chord for a crossing span inside the arc.

    Defaults: t2 is the midpoint of (span.hi, arc.b) and t1 solves
    z(t1) = z(t2) in the left tail by bisection (both tails must be strictly
    monotone).  Explicit t1/t2 overrides are honoured after validation.
    Errors with AxisTooLow when rotating the chord segment would dip to
    height <= 0.
    """
    if not (arc.a < span.lo and span.hi < arc.b):
        raise NoAxis(
            f"crossing span [{span.lo:.4f}, {span.hi:.4f}] is not interior to "
            f"the arc [{arc.a:.4f}, {arc.b:.4f}]"
        )
    z = arc.curve.z
    if t1 is None or t2 is None:
        for lo, hi in ((arc.a, span.lo), (span.hi, arc.b)):
            vals = np.asarray(z(np.linspace(lo, hi, 1025)))
            diffs = np.diff(vals)
            if not (np.all(diffs > 0) or np.all(diffs < 0)):
                raise NoAxis(f"z is not strictly monotone on the tail [{lo:.4f}, {hi:.4f}]")
        if t2 is None:
            t2 = (
                0.5 * (span.hi + arc.b)
                if t1 is None
                else _match_height(z, float(z(t1)), span.hi, arc.b)
            )
        if t1 is None:
            t1 = _match_height(z, float(z(t2)), arc.a, span.lo)
    axis = axis_for(arc, float(t1), float(t2))
    if not (axis.t1 <= span.lo and span.hi <= axis.t2):
        raise NoAxis("crossing span is not contained in [t1, t2]")
    _validate_axis_height(arc, axis)
    return axis


def _match_height(z, c: float, lo: float, hi: float) -> float:
    """Bisect for z(t) = c on a strictly monotone tail [lo, hi]."""
    zlo, zhi = float(z(lo)), float(z(hi))
    if not (min(zlo, zhi) <= c <= max(zlo, zhi)):
        raise NoAxis(f"height {c:.6f} is not attained on the tail [{lo:.4f}, {hi:.4f}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if (float(z(mid)) - c) * (zlo - c) <= 0:
            hi = mid
        else:
            lo, zlo = mid, float(z(mid))
        if hi - lo < 1e-13:
            break
    return 0.5 * (lo + hi)


def _validate_axis_height(arc: ArcSpec, axis: TwistAxis) -> None:
    """Rotated height must stay positive over the chord segment."""
    ts = np.linspace(axis.t1, axis.t2, 256)
    phis = np.linspace(0.0, 2.0 * math.pi, 256)
    pts = rotated_arc(arc, axis)(ts[:, None], phis[None, :])
    hmin = float(np.min(pts[..., 2]))
    if hmin <= 0:
        raise AxisTooLow(
            f"rotating about the chord dips to height {hmin:.6f}; raise the chord"
        )


def _rotation_parts(arc: ArcSpec, axis: TwistAxis, eq_verbatim: bool):
    """CoordFns (A, C, S) per coordinate so that X' = A + C cos(phi) + S sin(phi)."""
    f, g, h = arc.curve.x, arc.curve.y, arc.curve.z
    f21, g21, N, c = axis.f21, axis.g21, axis.N, axis.c
    n2 = axis.n_squared
    const = CoordFn.constant
    a_f = f.scaled(f21 * f21 / n2) + g.scaled(f21 * g21 / n2)
    c_f = f.scaled(g21 * g21 / n2) + g.scaled(-f21 * g21 / n2)
    s_f = (h + const(-c)).scaled(g21 / N)
    a_g = f.scaled(f21 * g21 / n2) + g.scaled(g21 * g21 / n2)
    c_g = f.scaled(-f21 * g21 / n2) + g.scaled(f21 * f21 / n2)
    # the closed-form print uses g21 in the sine slot of g'; the sandwich
    # matrix has f21 there, and the matrix is what a rotation must be
    s_g = (const(c) - h).scaled((g21 if eq_verbatim else f21) / N)
    a_h = const(c)
    c_h = h + const(-c)
    s_h = g.scaled(f21 / N) + f.scaled(-g21 / N)
    return (a_f, c_f, s_f), (a_g, c_g, s_g), (a_h, c_h, s_h)


def rotated_arc(arc: ArcSpec, axis: TwistAxis, eq_verbatim: bool = False):
    """Map (t, phi) -> the arc point rotated by phi about the chord."""
    parts = _rotation_parts(arc, axis, eq_verbatim)

    def rotated(t, phi):
        t = np.asarray(t, dtype=float)
        phi = np.asarray(phi, dtype=float)
        cp, sp = np.cos(phi), np.sin(phi)
        coords = [np.asarray(a(t)) + np.asarray(c(t)) * cp + np.asarray(s(t)) * sp
                  for a, c, s in parts]
        return np.stack(np.broadcast_arrays(*coords), axis=-1)

    return rotated


def chord_rotation_matrix(axis: TwistAxis, phi: float) -> np.ndarray:
    """Homogeneous 4x4 matrix T_c * R * T_{-c} for rotation about the chord."""
    kx, ky = axis.f21 / axis.N, axis.g21 / axis.N
    K = np.array([[0.0, 0.0, ky], [0.0, 0.0, -kx], [-ky, kx, 0.0]])
    R3 = np.eye(3) + math.sin(phi) * K + (1.0 - math.cos(phi)) * (K @ K)
    R = np.eye(4)
    R[:3, :3] = R3
    Tc = np.eye(4)
    Tc[2, 3] = axis.c
    Tmc = np.eye(4)
    Tmc[2, 3] = -axis.c
    return Tc @ R @ Tmc


def default_bump(span: Interval, axis: TwistAxis) -> SmoothBump:
    """Plateau covering the crossing span, vanishing outside the chord."""
    d2 = max(span.lo * span.lo, span.hi * span.hi)
    d1 = min(axis.t1 * axis.t1, axis.t2 * axis.t2)
    if d2 >= d1:
        raise BumpMismatch(
            f"no even plateau fits: span reaches t^2 = {d2:.4f} but the chord "
            f"allows at most t^2 = {d1:.4f}"
        )
    return SmoothBump(d1, d2)


def validate_bump(
    bump: SmoothBump, arc: ArcSpec, axis: TwistAxis, hull: Interval
) -> None:
    """Bump must be ~1 on the crossing hull and ~0 outside the chord."""
    on_span = np.asarray(bump(np.linspace(hull.lo, hull.hi, 1024)))
    if float(np.min(on_span)) < 1.0 - _PLATEAU_TOL:
        raise BumpMismatch(
            f"bump dips to {float(np.min(on_span)):.9f} on the crossing span"
        )
    outside = []
    if axis.t1 - arc.a > 1e-12:
        outside.append(np.linspace(arc.a, axis.t1, 512))
    if arc.b - axis.t2 > 1e-12:
        outside.append(np.linspace(axis.t2, arc.b, 512))
    if outside:
        tails = np.asarray(bump(np.concatenate(outside)))
        if float(np.max(tails)) > _PLATEAU_TOL:
            raise BumpMismatch(
                f"bump leaks to {float(np.max(tails)):.3e} outside the chord"
            )


def _crossing_hull(found: list[CrossingDatum]) -> Interval:
    ts = [t for c in found for t in (c.t_over, c.t_under)]
    return Interval(min(ts), max(ts))


def blended_arc(
    arc: ArcSpec,
    axis: TwistAxis,
    bump: SmoothBump,
    eq_verbatim: bool = False,
    _hull: Interval | None = None,
):
    """Map (t, phi) -> bump-weighted blend of rotated and original arc."""
    hull = _hull if _hull is not None else _crossing_hull(crossings(arc.curve))
    validate_bump(bump, arc, axis, hull)
    rot = rotated_arc(arc, axis, eq_verbatim)
    curve = arc.curve

    def blended(t, phi):
        t = np.asarray(t, dtype=float)
        w = np.asarray(bump(t))[..., None]
        orig = np.stack(
            np.broadcast_arrays(
                np.asarray(curve.x(t)), np.asarray(curve.y(t)), np.asarray(curve.z(t))
            ),
            axis=-1,
        )
        r = rot(t, phi)
        orig, r = np.broadcast_arrays(orig, r)
        return w * r + (1.0 - w) * orig

    return blended


def twist_spun_surface(
    arc: ArcSpec,
    d: int,
    axis: TwistAxis | None = None,
    bump: SmoothBump | None = None,
    eq_verbatim: bool = False,
) -> Surface4:
    """The d-twist spun surface (t, theta) -> (f~, g~, h~ cos, h~ sin) at phi = d theta."""
    if d < 0 or int(d) != d:
        raise ValueError("twist count d must be a nonnegative integer")
    found = crossings(arc.curve)
    span = crossing_span(arc.curve, found)
    hull = _crossing_hull(found)
    if axis is None:
        axis = choose_axis(arc, span)
    if bump is None:
        bump = default_bump(span, axis)
    validate_bump(bump, arc, axis, hull)

    parts = _rotation_parts(arc, axis, eq_verbatim)
    curve = arc.curve
    originals = (curve.x, curve.y, curve.z)

    def blend_factors(idx: int):
        a_fn, c_fn, s_fn = parts[idx]
        orig = originals[idx]

        def steady(t, a_fn=a_fn, orig=orig):
            w = np.asarray(bump(t))
            return w * np.asarray(a_fn(t)) + (1.0 - w) * np.asarray(orig(t))

        def cos_amp(t, c_fn=c_fn):
            return np.asarray(bump(t)) * np.asarray(c_fn(t))

        def sin_amp(t, s_fn=s_fn):
            return np.asarray(bump(t)) * np.asarray(s_fn(t))

        tag = "fgh"[idx]
        return (
            NumFactor(steady, f"{tag}~steady"),
            NumFactor(cos_amp, f"{tag}~cos-amp"),
            NumFactor(sin_amp, f"{tag}~sin-amp"),
        )

    cos_d = CoordFn.trig("cos", d)
    sin_d = CoordFn.trig("sin", d)
    f0, fc, fs = blend_factors(0)
    g0, gc, gs = blend_factors(1)
    h0, hc, hs = blend_factors(2)
    coords = (
        coord_of((f0, ONE), (fc, cos_d), (fs, sin_d)),
        coord_of((g0, ONE), (gc, cos_d), (gs, sin_d)),
        coord_of((h0, COS_S), (hc, cos_d * COS_S), (hs, sin_d * COS_S)),
        coord_of((h0, SIN_S), (hc, cos_d * SIN_S), (hs, sin_d * SIN_S)),
    )
    return single_piece_surface(
        arc.interval,
        FULL_TURN,
        coords,
        wrap_s=True,
        name=f"twistspun{d}({curve.name})" if curve.name else f"twistspun{d}",
    )
