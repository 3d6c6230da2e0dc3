"""Expression arithmetic, univariate root finding and Chebyshev approximation.

The building block is CoordFn, a finite sum of terms

    coeff * t**power * [cos(freq*t) | sin(freq*t) | 1]

with integer powers >= 0 and integer frequencies >= 1.  The class is closed
under differentiation, addition and multiplication (trig products are expanded
with the product-to-sum identities), and trig-free instances convert
losslessly to plain monomial polynomials (Poly1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from numpy.polynomial import polynomial as _npoly

from .errors import NonConvergence

MAX_CHEB_DEGREE = 64  # monomial basis conversion is unstable past this

Target = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Interval:
    """Closed real interval; hi may be +inf for half-infinite domains."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, t: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= t <= self.hi + slack

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, n)


@dataclass(frozen=True)
class Poly1:
    """Univariate polynomial, coefficients ascending by power."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        coefs = tuple(float(c) for c in self.coefficients)
        while len(coefs) > 1 and coefs[-1] == 0.0:
            coefs = coefs[:-1]
        object.__setattr__(self, "coefficients", coefs if coefs else (0.0,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.coefficients)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c in reversed(self.coefficients):
            out = out * t + c
        return out if out.ndim else float(out)

    def derivative(self) -> "Poly1":
        if self.degree == 0:
            return Poly1((0.0,))
        return Poly1(tuple(k * c for k, c in enumerate(self.coefficients) if k > 0))


# trig is None for a pure monomial, otherwise ("cos"|"sin", frequency >= 1)
Trig = Union[None, tuple[str, int]]


def _norm_trig(coeff: float, trig: Trig) -> tuple[float, Trig]:
    """Fold frequency-0 and negative-frequency trig into canonical form."""
    if trig is None:
        return coeff, None
    kind, freq = trig
    if freq == 0:
        return (coeff, None) if kind == "cos" else (0.0, None)
    if freq < 0:
        return (coeff, ("cos", -freq)) if kind == "cos" else (-coeff, ("sin", -freq))
    return coeff, (kind, freq)


@dataclass(frozen=True)
class CoordFn:
    """One coordinate function: sum of coeff * t**p * trig(f*t) terms."""

    terms: tuple[tuple[float, int, Trig], ...]

    def __post_init__(self):
        merged: dict[tuple[int, Trig], float] = {}
        for coeff, power, trig in self.terms:
            if power < 0 or int(power) != power:
                raise ValueError(f"power must be a nonnegative integer, got {power}")
            coeff, trig = _norm_trig(float(coeff), trig)
            if coeff == 0.0:
                continue
            key = (int(power), trig)
            merged[key] = merged.get(key, 0.0) + coeff
        terms = tuple(
            (c, p, tr)
            for (p, tr), c in sorted(merged.items(), key=lambda kv: (kv[0][0], str(kv[0][1])))
            if c != 0.0
        )
        object.__setattr__(self, "terms", terms)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(c: float) -> "CoordFn":
        return CoordFn(((float(c), 0, None),))

    @staticmethod
    def monomial(coeff: float, power: int) -> "CoordFn":
        return CoordFn(((float(coeff), int(power), None),))

    @staticmethod
    def trig(kind: str, freq: int, coeff: float = 1.0) -> "CoordFn":
        return CoordFn(((float(coeff), 0, (kind, int(freq))),))

    @staticmethod
    def from_poly1(p: Poly1) -> "CoordFn":
        return CoordFn(tuple((c, k, None) for k, c in enumerate(p.coefficients)))

    # -- evaluation ---------------------------------------------------------

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for coeff, power, trig in self.terms:
            term = coeff * t**power if power else np.full_like(t, coeff)
            if trig is not None:
                kind, freq = trig
                term = term * (np.cos(freq * t) if kind == "cos" else np.sin(freq * t))
            out = out + term
        return out if out.ndim else float(out)

    # -- calculus and algebra ------------------------------------------------

    def derivative(self) -> "CoordFn":
        new: list[tuple[float, int, Trig]] = []
        for coeff, power, trig in self.terms:
            if power > 0:
                new.append((coeff * power, power - 1, trig))
            if trig is not None:
                kind, freq = trig
                if kind == "cos":
                    new.append((-coeff * freq, power, ("sin", freq)))
                else:
                    new.append((coeff * freq, power, ("cos", freq)))
        return CoordFn(tuple(new))

    def __add__(self, other: "CoordFn") -> "CoordFn":
        return CoordFn(self.terms + other.terms)

    def __sub__(self, other: "CoordFn") -> "CoordFn":
        return self + (-other)

    def __neg__(self) -> "CoordFn":
        return CoordFn(tuple((-c, p, tr) for c, p, tr in self.terms))

    def scaled(self, k: float) -> "CoordFn":
        return CoordFn(tuple((c * k, p, tr) for c, p, tr in self.terms))

    def __mul__(self, other: "CoordFn") -> "CoordFn":
        out: list[tuple[float, int, Trig]] = []
        for c1, p1, t1 in self.terms:
            for c2, p2, t2 in other.terms:
                c, p = c1 * c2, p1 + p2
                out.extend(_trig_product(c, p, t1, t2))
        return CoordFn(tuple(out))

    # -- structure ----------------------------------------------------------

    @property
    def is_polynomial(self) -> bool:
        return all(trig is None for _, _, trig in self.terms)

    def to_poly1(self) -> Poly1:
        if not self.is_polynomial:
            raise ValueError("CoordFn has trig terms; cannot convert to Poly1")
        if not self.terms:
            return Poly1((0.0,))
        coefs = [0.0] * (max(p for _, p, _ in self.terms) + 1)
        for c, p, _ in self.terms:
            coefs[p] += c
        return Poly1(tuple(coefs))

def _trig_product(c: float, p: int, t1: Trig, t2: Trig) -> list[tuple[float, int, Trig]]:
    """Expand coeff * trig(a t) * trig(b t) via product-to-sum identities."""
    if t1 is None and t2 is None:
        return [(c, p, None)]
    if t1 is None:
        return [(c, p, t2)]
    if t2 is None:
        return [(c, p, t1)]
    k1, a = t1
    k2, b = t2
    half = 0.5 * c
    if k1 == "cos" and k2 == "cos":
        return [(half, p, ("cos", a - b)), (half, p, ("cos", a + b))]
    if k1 == "sin" and k2 == "sin":
        return [(half, p, ("cos", a - b)), (-half, p, ("cos", a + b))]
    if k1 == "sin":  # sin(a) cos(b)
        return [(half, p, ("sin", a + b)), (half, p, ("sin", a - b))]
    # cos(a) sin(b)
    return [(half, p, ("sin", a + b)), (-half, p, ("sin", a - b))]


def evaluate(f: CoordFn, t):
    """Evaluate a CoordFn at t (scalar or array)."""
    return f(t)


def derivative(f: CoordFn) -> CoordFn:
    """Term-wise product-rule derivative of a CoordFn."""
    return f.derivative()


def real_roots(
    p: Union[Poly1, CoordFn, Callable],
    domain: Interval,
    tol: float = 1e-9,
    cells: int = 4096,
    max_iter: int = 200,
) -> list[float]:
    """All real roots of p on a finite domain, ascending.

    Sign-change bracketing on a uniform grid, bisection to tol, then one
    Newton polish when a derivative is available.  Roots of even multiplicity
    do not produce sign changes and are only picked up when the grid hits
    them exactly; coincident refinements are reported once.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not domain.finite:
        raise ValueError("real_roots requires a finite domain")
    fn = p if callable(p) else p.__call__
    ts = domain.grid(cells + 1)
    vals = np.asarray(fn(ts), dtype=float)
    if np.all(vals == 0.0):
        raise ValueError("polynomial is identically zero on the domain")

    dfn = p.derivative().__call__ if isinstance(p, (Poly1, CoordFn)) else None
    scale = 1.0
    if isinstance(p, Poly1):
        scale = 1.0 + max(abs(c) for c in p.coefficients)

    roots: list[float] = []
    for t0, v in zip(ts, vals):
        if v == 0.0:
            roots.append(float(t0))
    sign = np.sign(vals)
    flips = np.nonzero((sign[:-1] * sign[1:]) < 0)[0]
    for i in flips:
        a, b = float(ts[i]), float(ts[i + 1])
        fa = float(vals[i])
        it = 0
        while b - a > tol:
            it += 1
            if it > max_iter:
                raise NonConvergence(f"bisection stalled on [{a}, {b}]")
            m = 0.5 * (a + b)
            fm = float(fn(m))
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        r = 0.5 * (a + b)
        if dfn is not None:
            d = float(dfn(r))
            if d != 0.0:
                step = float(fn(r)) / d
                if abs(step) < tol:
                    r -= step
        roots.append(r)

    roots.sort()
    out: list[float] = []
    sep = max(tol, 1e-12 * domain.width)
    for r in roots:
        if not out or r - out[-1] > sep:
            out.append(r)
    return out


def chebyshev_approx(target: Target, domain: Interval, degree: int) -> Poly1:
    """Degree-`degree` Chebyshev interpolant of target on domain, as monomials.

    Interpolates at the Chebyshev-Gauss nodes mapped onto the domain and
    converts the result to monomial coefficients usable for direct evaluation.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree > MAX_CHEB_DEGREE:
        raise ValueError(f"degree capped at {MAX_CHEB_DEGREE} for basis-conversion stability")
    if not domain.finite:
        raise ValueError("chebyshev_approx requires a finite domain")
    ch = _cheb.Chebyshev.interpolate(target, degree, domain=[domain.lo, domain.hi])
    pw = ch.convert(kind=_npoly.Polynomial)
    return Poly1(tuple(float(c) for c in pw.coef))


def max_error(
    approx: Union[Poly1, CoordFn, Callable],
    target: Target,
    domain: Interval,
    n: int,
) -> float:
    """max |approx(x) - target(x)| over n uniform samples of the domain."""
    if n < 2:
        raise ValueError("n must be at least 2")
    xs = domain.grid(n)
    fa = approx if callable(approx) else approx.__call__
    return float(np.max(np.abs(np.asarray(fa(xs)) - np.asarray(target(xs)))))
