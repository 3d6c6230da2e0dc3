"""FastAPI application wrapping the knotforge constructions.

Mesh endpoints return the encoded file (OBJ/STL/CSV) directly; table and
verification endpoints return JSON.  Domain errors map to 4xx responses with
the error class name in the body, mirroring the CLI's exit-code contract.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .. import longknots, meshio, polycore
from ..errors import KnotForgeError, UnknownKnot
from ..knots import catalog_describe, catalog_get, catalog_names, crossings, swap_yz
from . import builders
from . import schemas as sch

app = FastAPI(
    title="knotforge",
    description="Knotted surfaces in R^4: spinning, twist spinning, tube map, knotted planes.",
    version="0.1.0",
)


@app.exception_handler(KnotForgeError)
async def _domain_error(request: Request, exc: KnotForgeError):
    status = 404 if isinstance(exc, UnknownKnot) else 422
    return JSONResponse(
        status_code=status,
        content=sch.ErrorBody(error=type(exc).__name__, message=str(exc)).model_dump(),
    )


@app.get("/catalog", response_model=sch.CatalogResponse)
def catalog() -> sch.CatalogResponse:
    entries = []
    for name in catalog_names():
        curve = catalog_get(name)
        dom = None
        if curve.domain.finite:
            dom = (curve.domain.lo, curve.domain.hi)
        entries.append(
            sch.CatalogEntry(
                name=name,
                description=catalog_describe(name),
                domain=dom,
                periodic=curve.periodic,
            )
        )
    return sch.CatalogResponse(knots=entries)


@app.post("/knots/crossings", response_model=sch.CrossingsResponse)
def knot_crossings(req: sch.CrossingsRequest) -> sch.CrossingsResponse:
    return builders.crossings_payload(req)


def _mesh_response(surf, req: sch.MeshOptions) -> Response:
    payload, media = builders.mesh_response_bytes(surf, req)
    return Response(content=payload, media_type=media)


@app.post("/surfaces/spin")
def spin_mesh(req: sch.SpinRequest) -> Response:
    return _mesh_response(builders.build_spin(req), req)


@app.post("/surfaces/twist-spin")
def twist_spin_mesh(req: sch.TwistSpinRequest) -> Response:
    return _mesh_response(builders.build_twist_spin(req), req)


@app.post("/surfaces/twist-spin/reduction", response_model=sch.ReductionResponse)
def twist_spin_reduction(req: sch.ReductionRequest) -> sch.ReductionResponse:
    return sch.ReductionResponse(sup_difference=builders.reduction_sup(req), samples=req.samples)


@app.post("/surfaces/tube")
def tube_mesh(req: sch.TubeRequest) -> Response:
    return _mesh_response(builders.build_tube(req), req)


@app.post("/surfaces/disc")
def disc_mesh(req: sch.DiscRequest) -> Response:
    return _mesh_response(builders.build_disc(req), req)


@app.post("/surfaces/plane")
def plane_mesh(req: sch.PlaneRequest) -> Response:
    return _mesh_response(builders.build_plane(req), req)


@app.post("/singular", response_model=sch.SingularResponse)
def singular(req: sch.SingularRequest) -> sch.SingularResponse:
    curve = sch.resolve_knot(req.knot)
    if req.reorder:
        curve = swap_yz(curve)
    found = crossings(curve)
    values = longknots.singular_parameters(curve, found)
    return sch.SingularResponse(
        values=[
            sch.SingularEntry(u=u, t_a=cr.t_over, t_b=cr.t_under) for u, cr in values
        ],
        crossing_count=len(found),
        index_upper_bound=len(values),
    )


@app.post("/approx", response_model=sch.ApproxResponse)
def approx(req: sch.ApproxRequest) -> sch.ApproxResponse:
    target = np.cos if req.target == "cos" else np.sin
    domain = polycore.Interval(req.domain[0], req.domain[1])
    poly = polycore.chebyshev_approx(target, domain, req.degree)
    err = polycore.max_error(poly, target, domain, req.samples)
    return sch.ApproxResponse(coefficients=list(poly.coefficients), max_error=err)


@app.post("/verify", response_model=sch.VerifyResponse, response_model_by_alias=True)
def verify(req: sch.VerifyRequest) -> sch.VerifyResponse:
    surf = builders.build_for_verify(req)
    nt, ns = req.samples
    mesh = meshio.sample_surface(surf, nt, ns)
    report = meshio.injectivity_check(mesh, param_gap=req.param_gap, min_dist=req.min_dist)
    seam = meshio.seam_check(surf) if surf.piecewise else None
    return sch.VerifyResponse(
        passed=report.passed,
        violations=[sch.Violation(**v) for v in report.violations],
        seams=[sch.SeamEntry(**s) for s in seam.seams] if seam else [],
        method=report.method,
        min_dist=report.min_dist,
        param_gap=report.param_gap,
    )
