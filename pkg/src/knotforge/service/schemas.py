"""Request/response models for the knotforge service.

The JSON wire forms for coordinate functions, knot specs and welded diagrams
double as the file formats the CLI loads from disk:

    CoordFn:  {"terms": [{"c": <real>, "p": <int>, "trig": null | {"k": "cos"|"sin", "f": <int>}}]}
    Knot:     {"name": ..., "x": <CoordFn>, "y": ..., "z": ..., "domain": [lo, hi]}
    Diagram:  knot fields plus "classical": [[t_over, t_under], ...],
              "welded": [[t_first, t_second], ...], "L": <real>
"""

from __future__ import annotations

import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..knots import KnotCurve, catalog_get
from ..polycore import CoordFn, Interval


class TrigSpec(BaseModel):
    k: Literal["cos", "sin"]
    f: int = Field(ge=1)


class TermSpec(BaseModel):
    c: float
    p: int = Field(ge=0)
    trig: Optional[TrigSpec] = None


class CoordFnSpec(BaseModel):
    terms: list[TermSpec]

    def build(self) -> CoordFn:
        return CoordFn(
            tuple(
                (t.c, t.p, None if t.trig is None else (t.trig.k, t.trig.f))
                for t in self.terms
            )
        )

    @staticmethod
    def dump(fn: CoordFn) -> "CoordFnSpec":
        return CoordFnSpec(
            terms=[
                TermSpec(c=c, p=p, trig=None if tr is None else TrigSpec(k=tr[0], f=tr[1]))
                for c, p, tr in fn.terms
            ]
        )


class KnotSpec(BaseModel):
    name: str = ""
    x: CoordFnSpec
    y: CoordFnSpec
    z: CoordFnSpec
    domain: tuple[float, float]
    periodic: bool = False

    @field_validator("domain")
    @classmethod
    def _ordered(cls, v):
        if not v[0] < v[1]:
            raise ValueError("domain must satisfy lo < hi")
        return v

    def build(self) -> KnotCurve:
        return KnotCurve(
            self.x.build(),
            self.y.build(),
            self.z.build(),
            Interval(self.domain[0], self.domain[1]),
            periodic=self.periodic,
            name=self.name,
        )


KnotRef = Union[str, KnotSpec]


def resolve_knot(ref: KnotRef) -> KnotCurve:
    return catalog_get(ref) if isinstance(ref, str) else ref.build()


class DiagramSpec(KnotSpec):
    classical: list[tuple[float, float]] = []
    welded: list[tuple[float, float]] = []
    L: float = Field(gt=0)


Samples = tuple[int, int]
ProjectionName = Literal["xyz", "xyw", "xzw", "yzw"]
MeshFormat = Literal["obj", "stl", "csv"]


class MeshOptions(BaseModel):
    samples: Samples = (64, 64)
    project: ProjectionName = "xyz"
    fmt: MeshFormat = "obj"

    @field_validator("samples")
    @classmethod
    def _dense_enough(cls, v):
        if v[0] < 2 or v[1] < 2:
            raise ValueError("samples must be at least 2x2")
        return v


class SpinRequest(MeshOptions):
    knot: KnotRef
    polynomialize: Optional[int] = Field(default=None, ge=0)


class TwistSpinRequest(MeshOptions):
    knot: KnotRef
    d: int = Field(ge=0)
    t1: Optional[float] = None
    t2: Optional[float] = None
    d1: Optional[float] = None
    d2: Optional[float] = None
    eq_verbatim: bool = False
    polynomialize: Optional[int] = Field(default=None, ge=0)


class ReductionRequest(BaseModel):
    knot: KnotRef
    t1: Optional[float] = None
    t2: Optional[float] = None
    d1: Optional[float] = None
    d2: Optional[float] = None
    samples: Samples = (128, 128)


class ReductionResponse(BaseModel):
    sup_difference: float
    samples: Samples


class TubeRequest(MeshOptions):
    knot: KnotRef
    weld: list[int] = []
    L: Optional[float] = Field(default=None, gt=0)
    r: float = 0.7
    dc: float = 1.0
    dw: float = 5.0
    true_radius: bool = False
    diagram: Optional[DiagramSpec] = None


class DiscRequest(MeshOptions):
    knot: KnotRef


class PlaneRequest(MeshOptions):
    knot: KnotRef
    construction: Literal[1, 2] = 1
    R: Optional[float] = None
    reorder: bool = False


class CrossingsRequest(BaseModel):
    knot: KnotRef


class CrossingEntry(BaseModel):
    t_over: float
    t_under: float
    x: float
    y: float


class CrossingsResponse(BaseModel):
    crossings: list[CrossingEntry]
    span: Optional[tuple[float, float]] = None


class SingularRequest(BaseModel):
    knot: KnotRef
    reorder: bool = False


class SingularEntry(BaseModel):
    u: float
    t_a: float
    t_b: float


class SingularResponse(BaseModel):
    values: list[SingularEntry]
    crossing_count: int
    index_upper_bound: int


class ApproxRequest(BaseModel):
    target: Literal["cos", "sin"]
    domain: tuple[float, float] = (0.0, 2.0 * math.pi)
    degree: int = Field(default=8, ge=0)
    samples: int = Field(default=10_000, ge=2)


class ApproxResponse(BaseModel):
    coefficients: list[float]
    max_error: float


class VerifyRequest(BaseModel):
    surface: Literal["spin", "twist-spin", "tube", "disc", "plane"]
    knot: KnotRef
    samples: Samples = (200, 200)
    param_gap: Optional[int] = Field(default=None, ge=1)
    min_dist: Optional[float] = Field(default=None, gt=0)
    # construction-specific knobs
    d: int = Field(default=1, ge=0)
    construction: Literal[1, 2] = 1
    R: Optional[float] = None
    reorder: bool = False
    weld: list[int] = []


class Violation(BaseModel):
    i: int
    j: int
    dist: float


class SeamEntry(BaseModel):
    s: float
    max_mismatch: float


class VerifyResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    passed: bool = Field(alias="pass")
    violations: list[Violation]
    seams: list[SeamEntry] = []
    method: str = "auto"
    min_dist: float
    param_gap: int


class CatalogEntry(BaseModel):
    name: str
    description: str
    domain: tuple[float, float] | None
    periodic: bool


class CatalogResponse(BaseModel):
    knots: list[CatalogEntry]


class ErrorBody(BaseModel):
    error: str
    message: str
