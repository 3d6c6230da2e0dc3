"""Construction dispatch shared by the mesh and verification endpoints."""

from __future__ import annotations

import numpy as np

from .. import meshio
from ..knots import arc_from_curve, crossing_span, crossings, swap_yz
from ..longknots import knotted_disc, knotted_plane_construction1
from ..spin import polynomialize, spun_plane_infinity, spun_surface
from ..surfaces import Surface4
from ..tube import TubeParams, WeldedDiagram, tube_surface, weldify
from ..twistspin import SmoothBump, choose_axis, default_bump, twist_spun_surface
from . import schemas as sch


def build_spin(req: sch.SpinRequest) -> Surface4:
    arc = arc_from_curve(sch.resolve_knot(req.knot))
    surf = spun_surface(arc)
    if req.polynomialize is not None:
        surf = polynomialize(surf, req.polynomialize)
    return surf


def _twist_parts(knot, t1, t2, d1, d2):
    arc = arc_from_curve(sch.resolve_knot(knot))
    span = crossing_span(arc.curve)
    axis = choose_axis(arc, span, t1, t2)
    bump = SmoothBump(d1, d2) if d1 is not None and d2 is not None else default_bump(span, axis)
    return arc, axis, bump


def build_twist_spin(req: sch.TwistSpinRequest) -> Surface4:
    arc, axis, bump = _twist_parts(req.knot, req.t1, req.t2, req.d1, req.d2)
    surf = twist_spun_surface(arc, req.d, axis=axis, bump=bump, eq_verbatim=req.eq_verbatim)
    if req.polynomialize is not None:
        surf = polynomialize(surf, req.polynomialize)
    return surf


def reduction_sup(req: sch.ReductionRequest) -> float:
    """Sup difference between the 0-twist surface and the plain spun surface."""
    arc, axis, bump = _twist_parts(req.knot, req.t1, req.t2, req.d1, req.d2)
    twist0 = twist_spun_surface(arc, 0, axis=axis, bump=bump)
    spun = spun_surface(arc)
    nt, ns = req.samples
    m_twist = meshio.sample_surface(twist0, nt, ns)
    m_spun = meshio.sample_surface(spun, nt, ns)
    return float(np.max(np.abs(m_twist.vertices - m_spun.vertices)))


def build_tube(req: sch.TubeRequest) -> Surface4:
    if req.diagram is not None:
        d = req.diagram
        diag = WeldedDiagram(
            d.build(), tuple(tuple(p) for p in d.classical), tuple(tuple(p) for p in d.welded), d.L
        )
    else:
        diag = weldify(sch.resolve_knot(req.knot), req.weld, L=req.L)
    return tube_surface(diag, TubeParams(req.r, req.dc, req.dw), true_radius=req.true_radius)


def build_disc(req: sch.DiscRequest) -> Surface4:
    return knotted_disc(arc_from_curve(sch.resolve_knot(req.knot)))


def build_plane(req) -> Surface4:
    curve = sch.resolve_knot(req.knot)
    if req.reorder:
        curve = swap_yz(curve)
    if req.construction == 1:
        return knotted_plane_construction1(arc_from_curve(curve), R=req.R)
    return spun_plane_infinity(curve)


def build_for_verify(req: sch.VerifyRequest) -> Surface4:
    if req.surface == "spin":
        return build_spin(sch.SpinRequest(knot=req.knot))
    if req.surface == "twist-spin":
        return build_twist_spin(sch.TwistSpinRequest(knot=req.knot, d=req.d))
    if req.surface == "tube":
        return build_tube(sch.TubeRequest(knot=req.knot, weld=req.weld))
    if req.surface == "disc":
        return build_disc(sch.DiscRequest(knot=req.knot))
    return build_plane(
        sch.PlaneRequest(knot=req.knot, construction=req.construction, R=req.R, reorder=req.reorder)
    )


def mesh_response_bytes(surf: Surface4, req: sch.MeshOptions) -> tuple[bytes, str]:
    """Sample, project and encode a surface; returns (payload, media type)."""
    nt, ns = req.samples
    mesh = meshio.sample_surface(surf, nt, ns)
    if req.fmt == "csv":
        return meshio.csv_bytes(mesh), "text/csv"
    m3 = meshio.project(mesh, meshio.ProjectionSpec.keep(req.project))
    if req.fmt == "obj":
        return meshio.obj_bytes(m3), "model/obj"
    return meshio.stl_bytes(m3), "model/stl"


def crossings_payload(req: sch.CrossingsRequest) -> sch.CrossingsResponse:
    curve = sch.resolve_knot(req.knot)
    found = crossings(curve)
    entries = [
        sch.CrossingEntry(t_over=c.t_over, t_under=c.t_under, x=c.xy[0], y=c.xy[1])
        for c in found
    ]
    span = None
    if found:
        sp = crossing_span(curve, found)
        span = (sp.lo, sp.hi)
    return sch.CrossingsResponse(crossings=entries, span=span)
