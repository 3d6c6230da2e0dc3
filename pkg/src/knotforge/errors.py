"""Domain errors raised by knotforge operations.

Every error that corresponds to a violated contract (bad input geometry,
failed refinement, impossible construction) derives from KnotForgeError so
callers, the HTTP service and the CLI can map them uniformly to exit code 1
or a 4xx response.
"""


class KnotForgeError(Exception):
    """Base class for all knotforge domain errors."""


class NonConvergence(KnotForgeError):
    """Iterative refinement (bisection/Newton) exhausted its budget."""


class UnknownKnot(KnotForgeError):
    """Requested catalog name does not exist."""


class BadBoundary(KnotForgeError):
    """Height coordinate does not have the required root/sign structure."""


class NoCrossings(KnotForgeError):
    """Operation needs at least one crossing but the curve has none."""


class DegenerateCrossing(KnotForgeError):
    """Two strands meet tangentially or at equal height."""


class UnboundedDomain(KnotForgeError):
    """A trig/numeric substitution was requested on a half-infinite interval."""


class DomainUnbounded(KnotForgeError):
    """A mesh was requested over a surface window that cannot be resolved."""


class NoAxis(KnotForgeError):
    """No admissible rotation chord exists in the monotone tails."""


class AxisTooLow(KnotForgeError):
    """Rotating the knotted part about the chosen chord dips below height 0."""


class BumpMismatch(KnotForgeError):
    """Bump plateau does not cover the crossing span or leak past the axis."""


class IntervalOverlap(KnotForgeError):
    """No interval half-width keeps all crossing neighbourhoods disjoint."""


class BadKnotForm(KnotForgeError):
    """Curve violates the degree/sign/immersion form required by an operation."""


class Unbounded(KnotForgeError):
    """Partial-derivative minima keep decreasing as the window grows."""


class SeamMismatch(KnotForgeError):
    """Adjacent pieces of a piecewise surface disagree on a shared boundary."""
