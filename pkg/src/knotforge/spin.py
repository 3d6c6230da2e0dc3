"""Spinning constructions: spun 2-knots and the spun knotted plane.

Rotating the upper half-space about its boundary plane sends a point at
height z to the circle (z cos s, z sin s) in the last two coordinates.
Applied to a knotted arc this traces a 2-sphere; applied to an arc with one
end running to infinity it traces a plane.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BadBoundary
from .knots import ArcSpec, KnotCurve, crossing_span, crossings
from .polycore import CoordFn, Interval, real_roots
from .surfaces import ONE, Surface4, coord_of, polynomialize_surface, single_piece_surface

COS_S = CoordFn.trig("cos", 1)
SIN_S = CoordFn.trig("sin", 1)

FULL_TURN = Interval(0.0, 2.0 * math.pi)


def spun_surface(arc: ArcSpec) -> Surface4:
    """Spin a knotted arc: (t, s) -> (f, g, h cos s, h sin s) on [a,b] x [0,2pi]."""
    c = arc.curve
    return single_piece_surface(
        arc.interval,
        FULL_TURN,
        (
            coord_of((c.x, ONE)),
            coord_of((c.y, ONE)),
            coord_of((c.z, COS_S)),
            coord_of((c.z, SIN_S)),
        ),
        wrap_s=True,
        name=f"spun({c.name})" if c.name else "spun",
    )


def polynomialize(surf: Surface4, degree: int) -> Surface4:
    """Chebyshev-substitute every trig/numeric factor of an exact surface."""
    return polynomialize_surface(surf, degree)


def _odd_fixup(curve: KnotCurve) -> tuple[KnotCurve, float]:
    """Append eps * t^(deg+1) to an even-degree height to make it odd.

    eps is 1e-4 times the height scale on the crossing span divided by the
    window end raised to the new degree, so the perturbation stays below
    0.01% of the relevant z scale where the crossings live.
    """
    z = curve.z.to_poly1()
    deg = z.degree
    if deg % 2 == 1:
        return curve, 0.0
    new_power = deg + 1
    working = _window_for(curve)
    zroots = real_roots(z, working, tol=1e-10)
    found = crossings(curve)
    span = crossing_span(curve, found) if found else working
    a = min(zroots) if zroots else working.lo
    b = max(zroots) if zroots else working.hi
    T = max(b, span.hi) + 2.0
    zmax = float(np.max(np.abs(np.asarray(curve.z(span.grid(2049))))))
    eps = 1e-4 * zmax / T**new_power
    fixed = curve.z + CoordFn.monomial(eps, new_power)
    return (
        KnotCurve(curve.x, curve.y, fixed, Interval(a - 1.0, T), periodic=curve.periodic,
                  name=curve.name + "-odd" if curve.name else ""),
        eps,
    )


def _window_for(curve: KnotCurve) -> Interval:
    if curve.domain.finite:
        return curve.domain
    from .knots import working_window

    return working_window(curve)


def spun_plane_infinity(curve: KnotCurve) -> Surface4:
    """Spin an arc whose far end runs to infinity: a plane in R^4.

    Requires z with exactly one simple root a on the working window and z > 0
    beyond it.  Even-degree heights first get the odd-degree fix-up term; the
    root structure is then re-verified and BadBoundary raised when it fails.
    """
    if not curve.z.is_polynomial:
        raise BadBoundary("the plane construction needs a polynomial height coordinate")
    fixed, _eps = _odd_fixup(curve)
    window = _window_for(fixed)
    roots = real_roots(fixed.z.to_poly1(), window, tol=1e-10)
    if len(roots) != 1:
        raise BadBoundary(
            f"height must have exactly one simple root on the working window "
            f"[{window.lo:.4g}, {window.hi:.4g}] after fix-up, found {len(roots)}"
        )
    a = roots[0]
    probe = np.linspace(a, window.hi, 4098)[1:]
    if np.any(np.asarray(fixed.z(probe)) <= 0):
        raise BadBoundary("height is not positive beyond its root")
    # coordinate order (sin, cos) here, mirroring the half-plane convention
    # that differs from spun_surface by an isotopy
    return single_piece_surface(
        Interval(a, math.inf),
        FULL_TURN,
        (
            coord_of((fixed.x, ONE)),
            coord_of((fixed.y, ONE)),
            coord_of((fixed.z, SIN_S)),
            coord_of((fixed.z, COS_S)),
        ),
        wrap_s=True,
        name=f"plane2({curve.name})" if curve.name else "plane2",
    )
