import math

import numpy as np
import pytest

import knotforge as kf
from knotforge.errors import BadBoundary, UnboundedDomain
from knotforge.knots import KnotCurve
from knotforge.polycore import CoordFn, Interval, real_roots
from knotforge.spin import spun_plane_infinity


class TestSpunSurface:
    def test_zero_angle_slice_is_the_arc(self, trefoil_arc):
        surf = kf.spun_surface(trefoil_arc)
        c = trefoil_arc.curve
        for t in np.linspace(trefoil_arc.a, trefoil_arc.b, 9):
            pt = surf.evaluate(t, 0.0)
            assert pt == pytest.approx([c.x(t), c.y(t), c.z(t), 0.0], abs=1e-12)

    def test_axis_points_degenerate(self, trefoil_arc):
        # the endpoint height is a refined root, so the axis circle collapses
        # to a point up to the root residual times the trig factors
        surf = kf.spun_surface(trefoil_arc)
        base = surf.evaluate(trefoil_arc.a, 0.0)
        for s in np.linspace(0, 2 * math.pi, 17):
            assert np.max(np.abs(surf.evaluate(trefoil_arc.a, s) - base)) < 1e-12

    def test_circularity_at_interior_t(self, fig8_arc):
        surf = kf.spun_surface(fig8_arc)
        z = fig8_arc.curve.z
        for t in (-0.9, 0.0, 0.7):
            radius = float(z(t))
            ss = np.linspace(0, 2 * math.pi, 64)
            pts = surf.eval_grid(np.array([t]), ss)[0]
            assert np.max(np.abs(np.hypot(pts[:, 2], pts[:, 3]) - radius)) < 1e-12

    def test_fig8_coordinates_shape(self, fig8_arc):
        surf = kf.spun_surface(fig8_arc)
        c = fig8_arc.curve
        t, s = 0.41, 2.2
        pt = surf.evaluate(t, s)
        assert pt[0] == pytest.approx(float(c.x(t)), abs=1e-14)
        assert pt[1] == pytest.approx(float(c.y(t)), abs=1e-14)
        assert pt[2] == pytest.approx(float(c.z(t)) * math.cos(s), abs=1e-12)
        assert pt[3] == pytest.approx(float(c.z(t)) * math.sin(s), abs=1e-12)


class TestPolynomialize:
    def test_trig_free_coords_preserved(self, trefoil_arc):
        surf = kf.spun_surface(trefoil_arc)
        poly = kf.polynomialize(surf, 8)
        ts = np.linspace(trefoil_arc.a, trefoil_arc.b, 33)
        for t in ts:
            for s in (0.3, 4.0):
                assert poly.evaluate(t, s)[0] == surf.evaluate(t, s)[0]
                assert poly.evaluate(t, s)[1] == surf.evaluate(t, s)[1]

    def test_deviation_within_recorded_bound(self, trefoil_arc):
        surf = kf.spun_surface(trefoil_arc)
        poly = kf.polynomialize(surf, 8)
        assert poly.form == "polynomialized"
        m_exact = kf.sample_surface(surf, 128, 128)
        m_poly = kf.sample_surface(poly, 128, 128)
        dev = float(np.max(np.abs(m_exact.vertices - m_poly.vertices)))
        assert dev <= poly.approx_bound

    def test_fig8_bound_scales_with_height_max(self, fig8_arc):
        # max |height| on the arc is its value at t = 0, namely 20
        hs = np.abs(np.asarray(fig8_arc.curve.z(np.linspace(fig8_arc.a, fig8_arc.b, 4097))))
        hmax = float(hs.max())
        assert hmax == pytest.approx(20.0, abs=1e-12)
        from knotforge.polycore import chebyshev_approx, max_error

        dom = Interval(0, 2 * math.pi)
        e_sin = max_error(chebyshev_approx(np.sin, dom, 8), np.sin, dom, 4097)
        poly = kf.polynomialize(kf.spun_surface(fig8_arc), 8)
        m_exact = kf.sample_surface(kf.spun_surface(fig8_arc), 128, 128)
        m_poly = kf.sample_surface(poly, 128, 128)
        dev = float(np.max(np.abs(m_exact.vertices - m_poly.vertices)))
        assert dev <= hmax * e_sin * 1.05

    def test_already_polynomial_surface_is_identity(self):
        poly_surface = kf.polynomialize(_flat_sheet(), 6)
        assert poly_surface.approx_bound == 0.0
        assert poly_surface.evaluate(0.3, -0.4) == pytest.approx(
            _flat_sheet().evaluate(0.3, -0.4), abs=0.0
        )

    def test_polynomialized_form_rejected_as_input(self, trefoil_arc):
        poly = kf.polynomialize(kf.spun_surface(trefoil_arc), 6)
        with pytest.raises(ValueError):
            kf.polynomialize(poly, 6)


def _flat_sheet():
    from knotforge.surfaces import ONE, coord_of, single_piece_surface

    t = CoordFn.monomial(1.0, 1)
    return single_piece_surface(
        Interval(-1, 1), Interval(-1, 1),
        (
            coord_of((t, ONE)),
            coord_of((CoordFn.constant(1.0), CoordFn.monomial(1.0, 1))),
            coord_of((t, CoordFn.monomial(1.0, 2))),
            coord_of((CoordFn.constant(0.0), ONE)),
        ),
    )


class TestSpunPlaneInfinity:
    def test_even_height_fixup_fails_for_trefoil(self, trefoil_long):
        # t^4 - 4t^2 + eps t^5 still has two sign-change roots on the window
        with pytest.raises(BadBoundary):
            spun_plane_infinity(trefoil_long)

    def test_fixup_root_count_oracle(self):
        # the fix-up appends eps * t^(deg+1); verify the resulting root count
        # with the production root finder on the working window
        z = CoordFn(((1, 4, None), (-4, 2, None)))
        eps = 1e-6
        fixed = z + CoordFn.monomial(eps, 5)
        roots = real_roots(fixed.to_poly1(), Interval(-3, 4), tol=1e-10)
        assert len(roots) == 2  # +-2 survive; the double root at 0 has no sign change

    def test_odd_height_plane(self):
        curve = KnotCurve(
            CoordFn(((1, 3, None), (-3, 1, None))),
            CoordFn(((1, 5, None), (-10, 1, None))),
            CoordFn(((1, 3, None), (8, 0, None))),  # t^3 + 8: single root at -2
            Interval(-3, 3),
            name="odd-height",
        )
        surf = spun_plane_infinity(curve)
        assert surf.t_range.lo == pytest.approx(-2.0, abs=1e-9)
        assert math.isinf(surf.t_range.hi)
        base = surf.evaluate(surf.t_range.lo, 0.0)
        for s in np.linspace(0, 2 * math.pi, 9):
            assert surf.evaluate(surf.t_range.lo, s) == pytest.approx(base, abs=1e-9)
        # coordinate order is (sin, cos) for this construction
        t = 1.3
        pt = surf.evaluate(t, 0.9)
        assert pt[2] == pytest.approx(float(curve.z(t)) * math.sin(0.9), abs=1e-12)
        assert pt[3] == pytest.approx(float(curve.z(t)) * math.cos(0.9), abs=1e-12)

    def test_polynomialize_infinite_t_is_fine_when_t_factors_poly(self):
        curve = KnotCurve(
            CoordFn.monomial(1.0, 1), CoordFn.monomial(1.0, 2),
            CoordFn(((1, 3, None), (8, 0, None))), Interval(-3, 3),
        )
        surf = spun_plane_infinity(curve)
        poly = kf.polynomialize(surf, 8)  # only the s factors carry trig
        assert poly.form == "polynomialized"
        # the height factor is unbounded on [a, inf), so the recorded
        # deviation bound is honestly infinite
        assert math.isinf(poly.approx_bound)

    def test_unbounded_domain_error_for_trig_t_factor(self):
        from knotforge.surfaces import ONE, coord_of, single_piece_surface

        bad = single_piece_surface(
            Interval(0.0, math.inf), Interval(0.0, 1.0),
            (
                coord_of((CoordFn.trig("cos", 1), ONE)),
                coord_of((CoordFn.constant(1.0), ONE)),
                coord_of((CoordFn.constant(1.0), ONE)),
                coord_of((CoordFn.constant(1.0), ONE)),
            ),
        )
        with pytest.raises(UnboundedDomain):
            kf.polynomialize(bad, 8)

    def test_sampling_uses_tan_reparametrization(self):
        curve = KnotCurve(
            CoordFn.monomial(1.0, 1), CoordFn.monomial(1.0, 2),
            CoordFn(((1, 3, None), (8, 0, None))), Interval(-3, 3),
        )
        surf = spun_plane_infinity(curve)
        mesh = kf.sample_surface(surf, 32, 16)
        expected_far = -2.0 + math.tan(0.95 * math.pi / 2)
        assert mesh.ts[0] == pytest.approx(-2.0, abs=1e-9)
        assert mesh.ts[-1] == pytest.approx(expected_far, rel=1e-12)
