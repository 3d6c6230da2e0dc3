"""knotforge: parametrized knotted surfaces in R^4.

Builds spun and twist-spun 2-knots, ribbon torus knots via the tube map,
knotted discs and knotted planes from 1-dimensional knot parametrizations,
polynomializes them by Chebyshev substitution, verifies their defining
properties numerically and exports sampled meshes.
"""

from .errors import (
    AxisTooLow,
    BadBoundary,
    BadKnotForm,
    BumpMismatch,
    DegenerateCrossing,
    DomainUnbounded,
    IntervalOverlap,
    KnotForgeError,
    NoAxis,
    NoCrossings,
    NonConvergence,
    SeamMismatch,
    Unbounded,
    UnboundedDomain,
    UnknownKnot,
)
from .polycore import CoordFn, Interval, Poly1, chebyshev_approx, max_error, real_roots
from .knots import (
    ArcSpec,
    CrossingDatum,
    KnotCurve,
    arc_from_curve,
    catalog_get,
    catalog_names,
    crossing_span,
    crossings,
    swap_yz,
)
from .surfaces import Surface4
from .spin import polynomialize, spun_plane_infinity, spun_surface
from .twistspin import (
    SmoothBump,
    TwistAxis,
    blended_arc,
    choose_axis,
    chord_rotation_matrix,
    rotated_arc,
    smooth_bump_eval,
    twist_spun_surface,
)
from .tube import TubeParams, WeldedDiagram, compact_bump, displace_profile, shrink_profile, tube_surface, weldify
from .longknots import (
    LongSurface,
    knotted_disc,
    knotted_plane_construction1,
    monotonicity_threshold,
    simple_long_2knot,
    singular_parameters,
    singularity_index_upper_bound,
    trivializing_homotopy,
)
from .meshio import (
    Mesh3,
    Mesh4,
    ProjectionSpec,
    export_csv,
    export_obj,
    export_stl,
    injectivity_check,
    project,
    sample_surface,
    seam_check,
)

__version__ = "0.1.0"
