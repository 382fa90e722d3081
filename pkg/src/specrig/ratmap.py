"""Rational maps of the Riemann sphere.

Points of the projective line are plain Python complex numbers, with
:data:`INF` (``complex('inf')``) standing for the point at infinity; anything
non-finite is treated as infinity.  Every evaluation picks the chart in which
it is well conditioned: the affine coordinate ``z`` when ``|z| <= 1`` and
``w = 1/z`` otherwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .cpoly import ComplexPoly, homogeneous_resultant, poly_roots
from .errors import DegenerateMap, DegreeCapExceeded, NonFinite

INF = complex(math.inf, 0.0)
RESULTANT_TOL = 1e-10
DEGREE_CAP = 1024


def is_inf(x) -> bool:
    return not cmath.isfinite(x)


def chart_of(x) -> str:
    """'z' for the affine chart, 'w' for the chart at infinity."""
    return "z" if (not is_inf(x) and abs(x) <= 1.0) else "w"


def chart_coord(x, chart: str):
    if chart == "z":
        return x
    return 0j if is_inf(x) else 1.0 / x


def from_chart(u, chart: str) -> complex:
    if chart == "z":
        return complex(u)
    return INF if u == 0 else complex(1.0 / u)


def _hom(x) -> tuple[complex, complex]:
    if is_inf(x):
        return 1.0 + 0j, 0j
    return (x, 1.0 + 0j) if abs(x) <= 1.0 else (1.0 + 0j, 1.0 / x)


def chordal(x, y) -> float:
    """Chordal distance |x-y| / (sqrt(1+|x|^2) sqrt(1+|y|^2)); at most 1.

    Evaluated through homogeneous coordinates, so huge and infinite points
    need no special casing.
    """
    x0, x1 = _hom(x)
    y0, y1 = _hom(y)
    return abs(x0 * y1 - x1 * y0) / (math.hypot(abs(x0), abs(x1)) * math.hypot(abs(y0), abs(y1)))


def _hom_array(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    fin = np.isfinite(z)
    small = fin & (np.abs(z) <= 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(fin & ~small, 1.0 / np.where(small | ~fin, 1, z), 0)
    return np.where(small, z, 1.0 + 0j), np.where(small, 1.0 + 0j, inv)


def chordal_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorised :func:`chordal` (non-finite entries mean infinity)."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=np.complex128), np.asarray(y, dtype=np.complex128))
    x0, x1 = _hom_array(x)
    y0, y1 = _hom_array(y)
    return np.abs(x0 * y1 - x1 * y0) / (np.hypot(np.abs(x0), np.abs(x1)) * np.hypot(np.abs(y0), np.abs(y1)))


def point_to_json(x):
    return "inf" if is_inf(x) else [float(x.real), float(x.imag)]


def point_from_json(obj) -> complex:
    if obj == "inf" or obj is None:
        return INF
    return complex(obj[0], obj[1])


def _normalize(num: ComplexPoly, den: ComplexPoly) -> tuple[ComplexPoly, ComplexPoly]:
    s = den.lead if den.degree >= 1 else num.lead
    return num.scale(1.0 / s), den.scale(1.0 / s)


@dataclass(frozen=True, eq=False)
class RationalMap:
    """``z -> num(z) / den(z)`` of exact degree ``degree``.

    Build instances with :func:`ratmap_new`, which validates and normalises.
    """

    num: ComplexPoly
    den: ComplexPoly
    degree: int

    def __repr__(self) -> str:
        return f"RationalMap(num={self.num.coeffs.tolist()}, den={self.den.coeffs.tolist()})"

    @cached_property
    def hom(self) -> tuple[np.ndarray, np.ndarray]:
        """Ascending coefficients of the binary forms N(X, Y), D(X, Y), length d+1."""
        n = self.degree + 1
        return self.num.padded(n), self.den.padded(n)

    @cached_property
    def _charts(self) -> dict:
        # (A, B, A', B') in each source chart; the value is A/B in the z target chart
        n, d = self.hom
        out = {}
        for chart, (a, b) in {"z": (n, d), "w": (n[::-1], d[::-1])}.items():
            A, B = ComplexPoly(a), ComplexPoly(b)
            out[chart] = (A, B, A.derivative(), B.derivative())
        return out

    def pair(self, x) -> tuple[complex, complex]:
        """Homogeneous value (A, B) with f(x) = A/B, evaluated in x's chart."""
        c = chart_of(x)
        A, B, _, _ = self._charts[c]
        u = chart_coord(x, c)
        return A(u), B(u)

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            return apply_array(self, x)
        a, b = self.pair(x)
        if b == 0:
            return INF
        with np.errstate(over="ignore", invalid="ignore"):
            v = a / b
        return v if cmath.isfinite(v) else INF

    def jet(self, x, dst: str | None = None) -> tuple[complex, complex, str, str]:
        """Image of ``x`` and the derivative between local charts.

        Returns ``(f(x), derivative, src_chart, dst_chart)`` where the
        derivative is that of ``chart_dst o f o chart_src^{-1}``.  ``dst``
        defaults to the well-conditioned chart of ``f(x)``.
        """
        src = chart_of(x)
        A, B, dA, dB = self._charts[src]
        u = chart_coord(x, src)
        a, b, da, db = A(u), B(u), dA(u), dB(u)
        fx = INF if b == 0 else a / b
        if not cmath.isfinite(fx):
            fx = INF
        if dst is None:
            dst = chart_of(fx)
        if dst == "z":
            if b == 0:
                return fx, complex(INF), src, dst
            deriv = (da * b - a * db) / (b * b)
        else:
            if a == 0:
                return fx, complex(INF), src, dst
            deriv = (db * a - b * da) / (a * a)
        return fx, deriv, src, dst

    def to_json(self) -> dict:
        return {"degree": self.degree, "num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "RationalMap":
        f = ratmap_new(ComplexPoly.from_json(obj["num"]), ComplexPoly.from_json(obj["den"]))
        if "degree" in obj and int(obj["degree"]) != f.degree:
            raise DegenerateMap(f"declared degree {obj['degree']} but map has degree {f.degree}")
        return f


def ratmap_new(num: ComplexPoly | Sequence[complex], den: ComplexPoly | Sequence[complex] = (1.0,)) -> RationalMap:
    """Validated, normalised rational map; raises :class:`DegenerateMap` on a common factor."""
    num = num if isinstance(num, ComplexPoly) else ComplexPoly(num)
    den = den if isinstance(den, ComplexPoly) else ComplexPoly(den)
    if num.is_zero and den.is_zero:
        raise DegenerateMap("numerator and denominator are both zero")
    if den.is_zero:
        raise DegenerateMap("zero denominator: the map is constant infinity")
    d = max(num.degree, den.degree)
    if d < 1:
        raise DegenerateMap("constant map")
    num, den = _normalize(num, den)
    res = homogeneous_resultant(num.padded(d + 1), den.padded(d + 1))
    if abs(res) <= RESULTANT_TOL:
        raise DegenerateMap(f"numerator and denominator share a root (scaled resultant {abs(res):.2e})")
    return RationalMap(num, den, d)


def _trusted(num: ComplexPoly, den: ComplexPoly, degree: int, normalize: bool = True) -> RationalMap:
    if normalize:
        num, den = _normalize(num, den)
    if max(num.degree, den.degree) != degree:
        raise NonFinite(f"formal degree {degree} lost to cancellation/underflow")
    return RationalMap(num, den, degree)


def ratmap_apply(f: RationalMap, x) -> complex:
    return f(x)


def apply_array(f: RationalMap, z: np.ndarray) -> np.ndarray:
    """Vectorised evaluation with the same chart rule as scalar evaluation."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty_like(z)
    fin = np.isfinite(z)
    inside = fin & (np.abs(z) <= 1)
    n, d = f.hom
    with np.errstate(all="ignore"):
        if np.any(inside):
            zi = z[inside]
            a = np.polynomial.polynomial.polyval(zi, n)
            b = np.polynomial.polynomial.polyval(zi, d)
            out[inside] = np.where(b == 0, np.inf, a / np.where(b == 0, 1, b))
        outside = ~inside
        if np.any(outside):
            w = np.where(fin[outside], 1.0 / np.where(z[outside] == 0, 1, z[outside]), 0)
            a = np.polynomial.polynomial.polyval(w, n[::-1])
            b = np.polynomial.polynomial.polyval(w, d[::-1])
            out[outside] = np.where(b == 0, np.inf, a / np.where(b == 0, 1, b))
    out[~np.isfinite(out)] = INF
    return out


def compose(f: RationalMap, g: RationalMap) -> RationalMap:
    """Formal composition ``f o g`` (degree ``deg f * deg g``).

    The pair is rescaled jointly so that its largest coefficient has modulus
    1.  Unlike :func:`ratmap_new` the leading coefficient is not made 1: for
    iterates of badly scaled maps it can be tiny, and dividing by it would
    push the other coefficients towards overflow.
    """
    n, d = f.hom
    P, Q = g.num, g.den
    e = g.degree
    size = f.degree * e + 1
    pows_p = [np.array([1.0 + 0j])]
    pows_q = [np.array([1.0 + 0j])]
    for _ in range(f.degree):
        pows_p.append(np.convolve(pows_p[-1], P.coeffs))
        pows_q.append(np.convolve(pows_q[-1], Q.coeffs))
    num = np.zeros(size, dtype=np.complex128)
    den = np.zeros(size, dtype=np.complex128)
    for k in range(f.degree + 1):
        term = np.convolve(pows_p[k], pows_q[f.degree - k])[:size]
        num[: term.size] += n[k] * term
        den[: term.size] += d[k] * term
    scale = max(np.abs(num).max(), np.abs(den).max())
    if not np.isfinite(scale) or scale == 0:
        raise NonFinite("overflow in formal composition")
    # only exact zeros are dropped: iterates of badly scaled maps have
    # genuinely tiny leading coefficients
    return _trusted(ComplexPoly(num / scale, tol=0.0), ComplexPoly(den / scale, tol=0.0),
                    f.degree * e, normalize=False)


def ratmap_iterate(f: RationalMap, n: int, cap: int = DEGREE_CAP) -> RationalMap:
    """The ``n``-th iterate as a formal rational map of degree ``d**n``
    (sup-normalised, see :func:`compose`)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n * math.log(f.degree) > math.log(cap) + 1e-12:
        raise DegreeCapExceeded(f"degree {f.degree}**{n} exceeds cap {cap}")
    g = f
    for _ in range(n - 1):
        g = compose(f, g)
    return g


def orbit(f: RationalMap, x, n: int) -> list[complex]:
    """``[x, f(x), ..., f^n(x)]`` by pointwise application."""
    pts = [complex(x) if not is_inf(x) else INF]
    for _ in range(n):
        pts.append(f(pts[-1]))
    return pts


@dataclass(frozen=True)
class MobiusTransform:
    """``z -> (a z + b) / (c z + d)``, stored with unit Frobenius norm."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        m = np.array([self.a, self.b, self.c, self.d], dtype=np.complex128)
        norm = np.linalg.norm(m)
        if not np.isfinite(norm) or norm == 0:
            raise DegenerateMap("zero or non-finite Mobius matrix")
        m = m / norm
        if abs(m[0] * m[3] - m[1] * m[2]) <= 1e-12:
            raise DegenerateMap("singular Mobius matrix")
        for name, v in zip("abcd", m):
            object.__setattr__(self, name, complex(v))

    @classmethod
    def identity(cls) -> "MobiusTransform":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m) -> "MobiusTransform":
        m = np.asarray(m, dtype=np.complex128)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __call__(self, x):
        if is_inf(x):
            return INF if self.c == 0 else self.a / self.c
        den = self.c * x + self.d
        if den == 0:
            return INF
        return (self.a * x + self.b) / den

    def __matmul__(self, other: "MobiusTransform") -> "MobiusTransform":
        """Composition: ``(self @ other)(z) == self(other(z))``."""
        return MobiusTransform.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    def as_map(self) -> RationalMap:
        return ratmap_new(ComplexPoly([self.b, self.a]), ComplexPoly([self.d, self.c]))

    @classmethod
    def from_three_points(cls, p: Sequence[complex], q: Sequence[complex]) -> "MobiusTransform":
        """The unique transform with ``p[i] -> q[i]`` for i = 0, 1, 2."""
        return cls.from_matrix(np.linalg.inv(_to_zero_one_inf(q)) @ _to_zero_one_inf(p))

    def to_json(self) -> dict:
        return {"m": [[[self.a.real, self.a.imag], [self.b.real, self.b.imag]],
                      [[self.c.real, self.c.imag], [self.d.real, self.d.imag]]]}

    @classmethod
    def from_json(cls, obj: dict) -> "MobiusTransform":
        (a, b), (c, d) = obj["m"]
        return cls(complex(*a), complex(*b), complex(*c), complex(*d))


def _to_zero_one_inf(p: Sequence[complex]) -> np.ndarray:
    """Matrix sending p0, p1, p2 to 0, 1, infinity."""
    p1, p2, p3 = p
    if is_inf(p1):
        return np.array([[0, p2 - p3], [1, -p3]], dtype=np.complex128)
    if is_inf(p2):
        return np.array([[1, -p1], [1, -p3]], dtype=np.complex128)
    if is_inf(p3):
        return np.array([[1, -p1], [0, p2 - p1]], dtype=np.complex128)
    return np.array([[p2 - p3, -p1 * (p2 - p3)], [p2 - p1, -p3 * (p2 - p1)]], dtype=np.complex128)


def ratmap_conjugate(f: RationalMap, phi: MobiusTransform) -> RationalMap:
    """``phi o f o phi^{-1}``.

    Conjugation preserves the degree, so the result is not re-validated by
    the resultant test (whose scaled value is not conjugation invariant).
    """
    g = compose(phi.as_map(), compose(f, phi.inverse().as_map()))
    return _trusted(ComplexPoly(g.num.coeffs), ComplexPoly(g.den.coeffs), f.degree)


def critical_points(f: RationalMap) -> list[tuple[complex, int]]:
    """Critical points with multiplicity; the multiplicities sum to ``2d - 2``."""
    if f.degree < 2:
        raise ValueError("critical points need degree >= 2")
    w = f.num.derivative() * f.den - f.num * f.den.derivative()
    total = 2 * f.degree - 2
    pts: list[tuple[complex, int]] = []
    if w.degree >= 1:
        pts = [(c.value, c.multiplicity) for c in poly_roots(w)]
    at_inf = total - max(w.degree, 0)
    if at_inf > 0:
        pts.append((INF, at_inf))
    return pts


def spherical_derivative(f: RationalMap, x) -> float:
    """``|f'(x)| (1 + |x|^2) / (1 + |f(x)|^2)``, chart independent."""
    fx, deriv, src, dst = f.jet(x)
    u = chart_coord(x, src)
    v = chart_coord(fx, dst)
    return abs(deriv) * (1.0 + abs(u) ** 2) / (1.0 + abs(v) ** 2)


def random_map(d: int, rng: np.random.Generator, radius: float = 1.0) -> RationalMap:
    """Random degree-d map with coefficients uniform in the disk of given radius."""
    while True:
        c = radius * np.sqrt(rng.random(2 * d + 2)) * np.exp(2j * np.pi * rng.random(2 * d + 2))
        try:
            return ratmap_new(ComplexPoly(c[: d + 1]), ComplexPoly(c[d + 1:]))
        except DegenerateMap:
            continue


def random_mobius(rng: np.random.Generator) -> MobiusTransform:
    while True:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(np.linalg.det(m)) > 0.1:
            return MobiusTransform.from_matrix(m)


def conjugate_coefficients(f: RationalMap) -> RationalMap:
    """The map whose coefficients are the complex conjugates of those of ``f``."""
    return ratmap_new(ComplexPoly(np.conj(f.num.coeffs)), ComplexPoly(np.conj(f.den.coeffs)))


def sample_points(count: int, radii: Iterable[float] = (0.7, 1.3), phase: float = 0.1) -> np.ndarray:
    """Deterministic sample points spread over circles."""
    radii = list(radii)
    per = int(math.ceil(count / len(radii)))
    pts = [r * np.exp(2j * np.pi * (np.arange(per) + phase + 0.37 * i) / per) for i, r in enumerate(radii)]
    return np.concatenate(pts)[:count]
