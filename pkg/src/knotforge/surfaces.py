"""Bivariate surface expressions as sums of separable terms.

Every surface coordinate produced in this package has the shape

    coord(t, s) = sum_k  U_k(t) * V_k(s)

where each factor is either a CoordFn (exact, structured: polynomial plus
integer-frequency trig) or an opaque numeric function (bump blends, tube
profiles).  Separability keeps grid evaluation cheap (outer products) and
makes polynomialization local: replace each non-polynomial factor by its
Chebyshev interpolant and track the resulting sup-error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import UnboundedDomain
from .polycore import CoordFn, Interval, chebyshev_approx, max_error

_DENSE = 4097  # 1-D samples used for factor sup-norm / sup-error estimates


@dataclass(frozen=True)
class NumFactor:
    """Opaque univariate factor: a vectorized callable with a label."""

    fn: Callable[[np.ndarray], np.ndarray]
    label: str = "numeric"

    def __call__(self, x):
        return self.fn(x)

    @property
    def is_polynomial(self) -> bool:
        return False


Factor = Union[CoordFn, NumFactor]

ONE = CoordFn.constant(1.0)


@dataclass(frozen=True)
class SepTerm:
    u: Factor  # factor in the first parameter (t)
    v: Factor  # factor in the second parameter (s)


Coord = tuple[SepTerm, ...]


def coord_of(*terms: tuple[Factor, Factor]) -> Coord:
    return tuple(SepTerm(u, v) for u, v in terms)


def coord_eval(coord: Coord, t, s):
    """Pointwise evaluation; t and s broadcast against each other."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    out = np.zeros(np.broadcast(t, s).shape)
    for term in coord:
        out = out + np.asarray(term.u(t)) * np.asarray(term.v(s))
    return out if out.ndim else float(out)


def coord_grid(coord: Coord, ts: np.ndarray, ss: np.ndarray) -> np.ndarray:
    """Evaluate on the tensor grid ts x ss; result has shape (len(ts), len(ss))."""
    out = np.zeros((len(ts), len(ss)))
    for term in coord:
        out += np.outer(np.asarray(term.u(ts), dtype=float), np.asarray(term.v(ss), dtype=float))
    return out


@dataclass(frozen=True)
class SurfacePiece:
    """One s-slab of a (possibly piecewise) surface."""

    s_range: Interval
    coords: tuple[Coord, Coord, Coord, Coord]


@dataclass(frozen=True)
class Surface4:
    """Map from t_range x (union of piece s-ranges) into R^4.

    form is "exact" while trig/numeric factors are present verbatim and
    "polynomialized" after substitution; approx_bound then records a sup-norm
    bound on the deviation from the exact parent surface.
    """

    t_range: Interval
    pieces: tuple[SurfacePiece, ...]
    wrap_s: bool = False
    form: str = "exact"
    approx_bound: float | None = None
    name: str = ""

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("surface needs at least one piece")
        for a, b in zip(self.pieces, self.pieces[1:]):
            if abs(a.s_range.hi - b.s_range.lo) > 1e-12:
                raise ValueError("piece s-ranges must be contiguous")

    @property
    def s_range(self) -> Interval:
        return Interval(self.pieces[0].s_range.lo, self.pieces[-1].s_range.hi)

    @property
    def piecewise(self) -> bool:
        return len(self.pieces) > 1

    def piece_at(self, s: float) -> SurfacePiece:
        for piece in self.pieces:
            if s <= piece.s_range.hi or piece is self.pieces[-1]:
                return piece
        return self.pieces[-1]

    def evaluate(self, t, s):
        """Evaluate at scalar (t, s); piece chosen by s."""
        piece = self.piece_at(float(s))
        return np.array([coord_eval(c, t, s) for c in piece.coords])

    def eval_grid(self, ts: np.ndarray, ss: np.ndarray, piece: SurfacePiece | None = None):
        """(len(ts), len(ss), 4) array over a tensor grid within one piece."""
        if piece is None:
            if self.piecewise:
                raise ValueError("piecewise surface: pass the piece explicitly")
            piece = self.pieces[0]
        return np.stack([coord_grid(c, ts, ss) for c in piece.coords], axis=-1)


def single_piece_surface(
    t_range: Interval,
    s_range: Interval,
    coords: tuple[Coord, Coord, Coord, Coord],
    wrap_s: bool = False,
    name: str = "",
) -> Surface4:
    return Surface4(t_range, (SurfacePiece(s_range, coords),), wrap_s=wrap_s, name=name)


def _sup(fn: Factor, rng: Interval) -> float:
    if not rng.finite:
        return math.inf  # deviation bounds degrade honestly on unbounded factors
    xs = rng.grid(_DENSE)
    return float(np.max(np.abs(np.asarray(fn(xs)))))


def polynomialize_surface(surf: Surface4, degree: int) -> Surface4:
    """Replace every trig/numeric factor by its Chebyshev interpolant.

    Polynomial factors pass through untouched, so trig-free coordinates are
    preserved exactly.  The recorded approx_bound is a triangle-inequality
    bound assembled from per-factor sup errors measured on dense 1-D grids,
    inflated 5% to cover off-grid excursions.
    """
    if surf.form != "exact":
        raise ValueError("polynomialize expects the exact form of a surface")
    if degree < 0:
        raise ValueError("degree must be nonnegative")

    def substitute(factor: Factor, rng: Interval) -> tuple[Factor, float, float]:
        if isinstance(factor, CoordFn) and factor.is_polynomial:
            return factor, 0.0, _sup(factor, rng)
        if not rng.finite:
            raise UnboundedDomain(
                "cannot substitute a Chebyshev interpolant on a half-infinite interval"
            )
        approx = CoordFn.from_poly1(chebyshev_approx(factor, rng, degree))
        err = max_error(approx, factor, rng, _DENSE)
        return approx, err, _sup(factor, rng)

    bound = 0.0
    new_pieces = []
    for piece in surf.pieces:
        new_coords = []
        for coord in piece.coords:
            terms = []
            coord_bound = 0.0
            for term in coord:
                u_new, eu, su = substitute(term.u, surf.t_range)
                v_new, ev, sv = substitute(term.v, piece.s_range)
                if eu:
                    coord_bound += eu * (sv + ev)
                if ev:
                    coord_bound += su * ev
                terms.append(SepTerm(u_new, v_new))
            bound = max(bound, coord_bound)
            new_coords.append(tuple(terms))
        new_pieces.append(SurfacePiece(piece.s_range, tuple(new_coords)))
    return Surface4(
        surf.t_range,
        tuple(new_pieces),
        wrap_s=surf.wrap_s,
        form="polynomialized",
        approx_bound=1.05 * bound,
        name=surf.name,
    )
