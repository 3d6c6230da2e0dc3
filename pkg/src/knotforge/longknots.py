"""Long 2-knots: planes built from long knots, their trivializing family,
singular parameters, knotted discs and the piecewise knotted plane.

The simple long 2-knot of a long knot K = (f, g, h) is
P_K(t, s) = (f + s, g + s, s, h); adding u^2 (t + s) to the fourth coordinate
sweeps a family that untangles it once both partials turn positive.  Each
crossing of the (f, g) projection contributes at most one parameter u where
the perturbed heights coincide; counting them bounds the singularity index of
this representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadKnotForm, DegenerateCrossing, SeamMismatch, Unbounded
from .knots import ArcSpec, CrossingDatum, KnotCurve, crossings, working_window
from .polycore import CoordFn, Interval, real_roots
from .surfaces import (
    ONE,
    Coord,
    Surface4,
    SurfacePiece,
    coord_of,
    coord_eval,
    single_piece_surface,
)
from .spin import COS_S, SIN_S

T_IDENT = CoordFn.monomial(1.0, 1)  # the factor t (or s) itself


@dataclass(frozen=True)
class LongSurface:
    """Plane-like surface over a finite sampling window of R^2."""

    coords: tuple[Coord, Coord, Coord, Coord]
    window: tuple[Interval, Interval]

    def evaluate(self, t, s):
        return np.stack([np.asarray(coord_eval(c, t, s)) for c in self.coords], axis=-1)

    def partials_of_height(self):
        """d/dt and d/ds of the fourth coordinate as Coords (exact factors only)."""
        return _coord_partials(self.coords[3])


def _coord_partials(coord: Coord) -> tuple[Coord, Coord]:
    dt_terms = []
    ds_terms = []
    for term in coord:
        if not (isinstance(term.u, CoordFn) and isinstance(term.v, CoordFn)):
            raise BadKnotForm("partials need exact (CoordFn) factors")
        dt_terms.append((term.u.derivative(), term.v))
        ds_terms.append((term.u, term.v.derivative()))
    return coord_of(*dt_terms), coord_of(*ds_terms)


def _default_window(curve: KnotCurve) -> tuple[Interval, Interval]:
    win = working_window(curve)
    lo, hi = win.lo, win.hi
    pad = 0.2 * (hi - lo)
    t_win = Interval(lo - pad, hi + pad)
    m = max(abs(t_win.lo), abs(t_win.hi))
    return t_win, Interval(-m, m)


def simple_long_2knot(
    K: KnotCurve, window: tuple[Interval, Interval] | None = None
) -> LongSurface:
    """P_K(t, s) = (f + s, g + s, s, h) for a long knot with odd-degree height."""
    if not (K.x.is_polynomial and K.y.is_polynomial and K.z.is_polynomial):
        raise BadKnotForm("long 2-knots need polynomial coordinates")
    h = K.z.to_poly1()
    if h.degree % 2 == 0 or h.coefficients[-1] <= 0:
        raise BadKnotForm(
            "height must have odd degree and positive leading coefficient, "
            f"got degree {h.degree} with leading {h.coefficients[-1]}"
        )
    dx, dy = K.x.derivative().to_poly1(), K.y.derivative().to_poly1()
    if not dx.is_zero:
        for r in real_roots(dx, Interval(-64.0, 64.0), tol=1e-10):
            if abs(float(dy(r))) < 1e-9:
                raise BadKnotForm(f"(x, y) fails to be an immersion at t = {r:.6f}")
    win = window or _default_window(K)
    coords = (
        coord_of((K.x, ONE), (CoordFn.constant(1.0), T_IDENT)),
        coord_of((K.y, ONE), (CoordFn.constant(1.0), T_IDENT)),
        coord_of((CoordFn.constant(1.0), T_IDENT)),
        coord_of((K.z, ONE)),
    )
    return LongSurface(coords, win)


def trivializing_homotopy(F: LongSurface, u: float) -> LongSurface:
    """Replace the fourth coordinate p by p + u^2 (t + s)."""
    usq = float(u) * float(u)
    extra = (
        (CoordFn.monomial(usq, 1), ONE),
        (CoordFn.constant(usq), T_IDENT),
    )
    new_fourth = F.coords[3] + coord_of(*extra)
    return LongSurface((F.coords[0], F.coords[1], F.coords[2], new_fourth), F.window)


def monotonicity_threshold(
    F: LongSurface, window: tuple[Interval, Interval] | None = None
) -> float:
    """Smallest M >= 0 making both partials of p + M^2 (t + s) positive.

    The partial minima are sampled on a dense grid and must not decrease when
    the window doubles, otherwise the height is Unbounded below.
    """
    win = window or F.window
    pt, ps = F.partials_of_height()

    def grid_min(w: tuple[Interval, Interval]) -> float:
        ts = w[0].grid(512)
        ss = w[1].grid(512)
        best = math.inf
        for coord in (pt, ps):
            vals = np.zeros((512, 512))
            for term in coord:
                vals += np.outer(np.asarray(term.u(ts)), np.asarray(term.v(ss)))
            best = min(best, float(vals.min()))
        return best

    m1 = grid_min(win)
    doubled = (
        Interval(2 * win[0].lo, 2 * win[0].hi),
        Interval(2 * win[1].lo, 2 * win[1].hi),
    )
    m2 = grid_min(doubled)
    if m2 < m1 - 1e-6 * (1.0 + abs(m1)):
        raise Unbounded(
            f"height partial minimum keeps falling ({m1:.6g} -> {m2:.6g}) as the window grows"
        )
    target = max(0.0, -m1)
    lo, hi = 0.0, math.sqrt(target) + 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mid * mid >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-7:
            break
    return hi


def singular_parameters(
    K: KnotCurve, found: list[CrossingDatum] | None = None
) -> list[tuple[float, CrossingDatum]]:
    """Parameters u > 0 where h + u^2 t fails to separate some crossing.

    For a crossing pair (t_a, t_b) the strands collide exactly when
    u^2 = (h(t_b) - h(t_a)) / (t_a - t_b); only positive right-hand sides
    yield real u, and u, -u give the same perturbation, so each admissible
    crossing contributes a single positive u.
    """
    data = crossings(K) if found is None else found
    out: list[tuple[float, CrossingDatum]] = []
    for cr in data:
        t_a, t_b = cr.t_over, cr.t_under
        if abs(t_a - t_b) < 1e-9:
            raise DegenerateCrossing(f"crossing visits coincide at t = {t_a:.6f}")
        usq = (float(K.z(t_b)) - float(K.z(t_a))) / (t_a - t_b)
        if usq > 0:
            out.append((math.sqrt(usq), cr))
    out.sort(key=lambda pair: pair[0])
    return out


def singularity_index_upper_bound(K: KnotCurve) -> int:
    """Number of singular parameters of this representation (an upper bound)."""
    return len(singular_parameters(K))


def knotted_disc(arc: ArcSpec) -> Surface4:
    """Half-spin of an arc: a disc bounded by the arc and its mirror.

    (t, s) -> (f, g, h sin s, h cos s) on [a, b] x [0, pi]; the s = 0 and
    s = pi edges are (f, g, 0, h) and (f, g, 0, -h).
    """
    c = arc.curve
    return single_piece_surface(
        arc.interval,
        Interval(0.0, math.pi),
        (
            coord_of((c.x, ONE)),
            coord_of((c.y, ONE)),
            coord_of((c.z, SIN_S)),
            coord_of((c.z, COS_S)),
        ),
        name=f"disc({c.name})" if c.name else "disc",
    )


def knotted_plane_construction1(arc: ArcSpec, R: float | None = None) -> Surface4:
    """Piecewise knotted plane: trivializing tails glued to the half-spun disc.

    psi1(t,s) = (f-s, g-s, s, h+s^2 t)            for s in [-R-1, 0]
    phi (t,s) = (f, g, h sin s, h cos s)          for s in [0, pi]
    psi2(t,s) = (f+(s-pi), g+(s-pi), -(s-pi), -h+(s-pi)^2 t)  for s in [pi, pi+R+1]

    R must reach the monotonicity threshold of h' on the arc (checked for
    both h and -h); the seams at s = 0 and s = pi agree algebraically.
    """
    c = arc.curve
    if not c.z.is_polynomial:
        raise BadKnotForm("the plane construction needs a polynomial height")
    dh = c.z.derivative()
    ts = np.linspace(arc.a, arc.b, 4097)
    dvals = np.asarray(dh(ts))
    needed = math.sqrt(max(0.0, float(dvals.max()), -float(dvals.min())))
    if R is None:
        R = needed
    elif R < needed - 1e-9:
        raise BadKnotForm(
            f"R = {R:.6f} is below the monotonicity threshold {needed:.6f} of the height"
        )
    R = float(R)

    one = CoordFn.constant(1.0)
    shift = CoordFn.monomial(1.0, 1)  # s
    shift_pi = shift + CoordFn.constant(-math.pi)  # s - pi
    psi1 = (
        coord_of((c.x, ONE), (one.scaled(-1.0), shift)),
        coord_of((c.y, ONE), (one.scaled(-1.0), shift)),
        coord_of((one, shift)),
        coord_of((c.z, ONE), (T_IDENT, shift * shift)),
    )
    phi = (
        coord_of((c.x, ONE)),
        coord_of((c.y, ONE)),
        coord_of((c.z, SIN_S)),
        coord_of((c.z, COS_S)),
    )
    psi2 = (
        coord_of((c.x, ONE), (one, shift_pi)),
        coord_of((c.y, ONE), (one, shift_pi)),
        coord_of((one.scaled(-1.0), shift_pi)),
        coord_of((c.z.scaled(-1.0), ONE), (T_IDENT, shift_pi * shift_pi)),
    )
    surf = Surface4(
        arc.interval,
        (
            SurfacePiece(Interval(-R - 1.0, 0.0), psi1),
            SurfacePiece(Interval(0.0, math.pi), phi),
            SurfacePiece(Interval(math.pi, math.pi + R + 1.0), psi2),
        ),
        name=f"plane1({c.name})" if c.name else "plane1",
    )
    _check_seams(surf)
    return surf


def _check_seams(surf: Surface4, n: int = 256, tol: float = 1e-9) -> None:
    ts = surf.t_range.grid(n)
    for left, right in zip(surf.pieces, surf.pieces[1:]):
        s = left.s_range.hi
        for cl, cr in zip(left.coords, right.coords):
            gap = np.max(np.abs(
                np.asarray(coord_eval(cl, ts, s)) - np.asarray(coord_eval(cr, ts, s))
            ))
            if gap > tol:
                raise SeamMismatch(f"pieces disagree by {gap:.3e} at the seam s = {s:.6f}")
