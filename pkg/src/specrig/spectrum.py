"""Periodic points, multipliers and multiplier/length spectra.

The multiset of multipliers of period ``n`` is stored through its elementary
symmetric functions, the natural coordinates on unordered tuples.  Large
multipliers would overflow those, so each period carries a scale ``r`` and the
stored coordinates are ``e_k / r**k``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cpoly import ComplexPoly, implicit_roots, initial_circle, poly_roots, raw_roots
from .errors import NearParabolic, NotPeriodic, ShapeMismatch
from .ratmap import (
    INF,
    DEGREE_CAP,
    RationalMap,
    chart_coord,
    chart_of,
    chordal,
    from_chart,
    is_inf,
    point_from_json,
    point_to_json,
    ratmap_iterate,
)

DEFAULT_N_MAX = 3
COMPARE_TOL = 1e-6


@dataclass(frozen=True)
class PeriodicPointSet:
    period: int
    points: list[tuple[complex, int]]
    total: int

    def to_json(self) -> dict:
        return {"period": self.period, "total": self.total,
                "points": [{"point": point_to_json(x), "multiplicity": m} for x, m in self.points]}

    @classmethod
    def from_json(cls, obj: dict) -> "PeriodicPointSet":
        pts = [(point_from_json(p["point"]), int(p["multiplicity"])) for p in obj["points"]]
        return cls(int(obj["period"]), pts, int(obj["total"]))


def fixed_points(f: RationalMap, n: int = 1, *, tol: float = 1e-10, bits: int | None = None,
                 cap: int = DEGREE_CAP, seed: int = 0, cluster_radius: float | None = None) -> PeriodicPointSet:
    """Fixed points of ``f^n`` with multiplicity (``d**n + 1`` in total).

    Finite points are the roots of ``P(z) = z den_n(z) - num_n(z)`` and the
    drop of its degree below ``d**n + 1`` is the multiplicity of infinity.
    Roots of the expanded coefficients only serve as starting values: a
    second simultaneous sweep evaluates ``P'/P`` pointwise through the
    homogeneous iteration, which stays accurate when the coefficients of
    ``f^n`` span many orders of magnitude.
    """
    g = ratmap_iterate(f, n, cap) if n > 1 else f
    D = g.degree
    num, den = g.hom
    P = np.zeros(D + 2, dtype=np.complex128)
    P[1:] += den
    P[:-1] -= num
    at_inf = _multiplicity_at_infinity(f, n, P)
    deg = D + 1 - at_inf
    pts: list[tuple[complex, int]] = []
    if deg >= 1:
        poly = ComplexPoly(P[: deg + 1], tol=0.0)
        if bits is not None and poly.degree == deg:
            start = np.array([c.value for c in poly_roots(poly, tol, seed=seed, bits=bits)
                              for _ in range(c.multiplicity)])
        else:
            start = raw_roots(poly, seed=seed, max_iter=120)
        if start.size < deg:
            big = 2.0 * max(1.0, float(np.abs(start).max(initial=1.0)))
            start = np.append(start, initial_circle(deg - start.size, big, seed))
        logder = fixed_point_logder(f, n, deg)
        radius = 1e-6 if cluster_radius is None else cluster_radius
        for c in implicit_roots(logder, deg, z0=start, cluster_radius=radius, max_iter=200, seed=seed,
                                noise_merge=True):
            pts.append((c.value, c.multiplicity))
    if at_inf > 0:
        pts.append((INF, at_inf))
    return PeriodicPointSet(n, pts, sum(m for _, m in pts))


def _multiplicity_at_infinity(f: RationalMap, n: int, P: np.ndarray) -> int:
    """Order of infinity as a fixed point of ``f^n``, decided pointwise.

    Only the parabolic case (multiplier 1) needs the coefficients: there the
    order is the drop in degree of the fixed-point polynomial.
    """
    if chordal(_iterate_point(f, INF, n), INF) > 1e-9:
        return 0
    lam = _cycle_jet(f, INF, n)[1]
    if abs(lam - 1) > 1e-6:
        return 1
    return max(2, P.size - 1 - ComplexPoly(P).degree)


def _hom_step(n_c: np.ndarray, d_c: np.ndarray, X, Y, dX, dY):
    """One step of the homogeneous lift with its tangent map."""
    deg = n_c.size - 1
    k = np.arange(deg + 1)
    Xp = X[..., None] ** k
    Yp = Y[..., None] ** (deg - k)
    Xp1 = np.concatenate([np.zeros_like(X)[..., None], Xp[..., :-1]], axis=-1) * k
    Yp1 = np.concatenate([Yp[..., 1:], np.zeros_like(Y)[..., None]], axis=-1) * (deg - k)
    N = (n_c * Xp * Yp).sum(-1)
    Dn = (d_c * Xp * Yp).sum(-1)
    NX = (n_c * Xp1 * Yp).sum(-1)
    NY = (n_c * Xp * Yp1).sum(-1)
    DX = (d_c * Xp1 * Yp).sum(-1)
    DY = (d_c * Xp * Yp1).sum(-1)
    return N, Dn, NX * dX + NY * dY, DX * dX + DY * dY


def fixed_point_logder(f: RationalMap, n: int, degree: int):
    """``z -> P'(z)/P(z)`` for ``P = z den_n - num_n`` of the given affine degree."""
    n_c, d_c = f.hom

    def run(X, Y, dX, dY):
        for _ in range(n):
            s = np.maximum(np.abs(X), np.abs(Y))
            s = np.where(s == 0, 1.0, s)
            X, Y, dX, dY = X / s, Y / s, dX / s, dY / s
            X, Y, dX, dY = _hom_step(n_c, d_c, X, Y, dX, dY)
        return X, Y, dX, dY

    def logder(z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        out = np.empty_like(z)
        inside = np.abs(z) <= 1
        one = np.ones_like(z)
        zero = np.zeros_like(z)
        with np.errstate(all="ignore"):
            if np.any(inside):
                zi = z[inside]
                X, Y, dX, dY = run(zi, one[inside], one[inside], zero[inside])
                out[inside] = (Y + zi * dY - dX) / (zi * Y - X)
            if np.any(~inside):
                w = 1.0 / z[~inside]
                X, Y, dX, dY = run(one[~inside], w, zero[~inside], one[~inside])
                # homogeneous P at (1, w) is Y_n - w X_n
                ld = (dY - X - w * dX) / (Y - w * X)
                out[~inside] = degree * w - w * w * ld
        return out

    return logder


def _cycle_jet(f: RationalMap, x, n: int) -> tuple[complex, complex]:
    """``(f^n(x) in x's chart, derivative of f^n in that chart)``."""
    home = chart_of(x)
    p = x
    deriv = 1.0 + 0j
    for i in range(n):
        dst = home if i == n - 1 else None
        p, d, _, _ = f.jet(p, dst)
        deriv *= d
    return chart_coord(p, home), deriv


def _iterate_point(f: RationalMap, x, n: int) -> complex:
    for _ in range(n):
        x = f(x)
    return x


def multiplier(f: RationalMap, x, n: int = 1, *, check_tol: float = 1e-6) -> complex:
    """Derivative of ``f^n`` at a point of period dividing ``n``.

    The chain rule is evaluated in local charts (affine near the disk,
    ``1/z`` near infinity) and closed in the chart of ``x``; the product of
    chart transitions telescopes, so the value does not depend on the choice.
    """
    if chordal(_iterate_point(f, x, n), x) >= check_tol:
        raise NotPeriodic(f"point {x} is not fixed by f^{n}")
    return complex(_cycle_jet(f, x, n)[1])


def multiplier_spectrum(f: RationalMap, n: int = 1, **kw) -> np.ndarray:
    """S_n: one multiplier per fixed point of ``f^n``, repeated by multiplicity."""
    fp = kw.pop("points", None) or fixed_points(f, n, **kw)
    out = []
    for x, m in fp.points:
        out.extend([multiplier(f, x, n, check_tol=1e-4)] * m)
    return np.array(out, dtype=np.complex128)


def length_spectrum(f: RationalMap, n: int = 1, **kw) -> np.ndarray:
    """L_n: moduli of the multipliers, sorted ascending."""
    return np.sort(np.abs(multiplier_spectrum(f, n, **kw)))


def spectrum_coordinates(S: Sequence[complex], scale: float = 1.0) -> np.ndarray:
    """Elementary symmetric functions ``(e_1, ..., e_N) / (scale, ..., scale**N)``.

    Read off from the expansion of ``prod (X - s/scale)``.
    """
    poly = np.array([1.0 + 0j])
    for s in S:
        poly = np.append(poly, 0j) - np.append(0j, poly) * (s / scale)
    N = len(S)
    signs = (-1.0) ** np.arange(1, N + 1)
    return signs * poly[1:]


def spectrum_scale(S: Sequence[complex]) -> float:
    return float(max(1.0, np.abs(np.asarray(S)).max(initial=0.0)))


@dataclass(frozen=True)
class PeriodSpectrum:
    n: int
    multipliers: np.ndarray
    sigma: np.ndarray
    scale: float

    @classmethod
    def from_multipliers(cls, n: int, S: Sequence[complex]) -> "PeriodSpectrum":
        S = np.asarray(S, dtype=np.complex128)
        r = spectrum_scale(S)
        return cls(n, S, spectrum_coordinates(S, r), r)


@dataclass(frozen=True)
class SpectrumTable:
    degree: int
    n_max: int
    periods: list[PeriodSpectrum] = field(default_factory=list)

    def __getitem__(self, n: int) -> PeriodSpectrum:
        return self.periods[n - 1]

    def lengths(self) -> list[np.ndarray]:
        return [np.sort(np.abs(p.multipliers)) for p in self.periods]

    def to_json(self) -> dict:
        def pairs(a):
            return [[float(v.real), float(v.imag)] for v in a]
        return {"degree": self.degree, "n_max": self.n_max,
                "periods": [{"n": p.n, "multipliers": pairs(p.multipliers), "sigma": pairs(p.sigma),
                             "scale": p.scale} for p in self.periods]}

    @classmethod
    def from_json(cls, obj: dict) -> "SpectrumTable":
        periods = []
        for p in obj["periods"]:
            mult = np.array([complex(a, b) for a, b in p["multipliers"]], dtype=np.complex128)
            sigma = np.array([complex(a, b) for a, b in p["sigma"]], dtype=np.complex128)
            periods.append(PeriodSpectrum(int(p["n"]), mult, sigma, float(p["scale"])))
        return cls(int(obj["degree"]), int(obj["n_max"]), periods)

    def lengths_csv(self) -> str:
        """One row per period: ``n`` followed by the sorted moduli."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for p, L in zip(self.periods, self.lengths()):
            w.writerow([p.n] + [repr(float(v)) for v in L])
        return buf.getvalue()


def tau(f: RationalMap, n_max: int = DEFAULT_N_MAX, **kw) -> SpectrumTable:
    """Truncated multiplier spectrum ``(S_1, ..., S_{n_max})``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    periods = [PeriodSpectrum.from_multipliers(n, multiplier_spectrum(f, n, **kw))
               for n in range(1, n_max + 1)]
    return SpectrumTable(f.degree, n_max, periods)


def compare_spectra(A: SpectrumTable, B: SpectrumTable, tol: float = COMPARE_TOL) -> tuple[float, bool]:
    """Largest relative coordinate gap and the equality verdict ``distance < tol``.

    Both tables are brought to a common scale per period before comparing.
    """
    if A.degree != B.degree or A.n_max != B.n_max:
        raise ShapeMismatch(f"tables differ in shape: (d={A.degree}, n={A.n_max}) vs (d={B.degree}, n={B.n_max})")
    dist = 0.0
    for pa, pb in zip(A.periods, B.periods):
        if pa.sigma.size != pb.sigma.size:
            raise ShapeMismatch(f"period {pa.n}: {pa.sigma.size} vs {pb.sigma.size} coordinates")
        r = max(pa.scale, pb.scale)
        k = np.arange(1, pa.sigma.size + 1)
        sa = pa.sigma * (pa.scale / r) ** k
        sb = pb.sigma * (pb.scale / r) ** k
        gap = np.abs(sa - sb) / (1.0 + np.abs(sa) + np.abs(sb))
        dist = max(dist, float(gap.max(initial=0.0)))
    return dist, dist < tol


def index_sum_check(f: RationalMap, near: float = 1e-3) -> complex:
    """Holomorphic fixed-point index sum, which equals 1 for every map."""
    S = multiplier_spectrum(f, 1)
    if np.any(np.abs(S - 1) < near):
        raise NearParabolic("a fixed point has multiplier within 1e-3 of 1")
    return complex(np.sum(1.0 / (1.0 - S)))


def power_map_spectrum(d: int, n: int) -> np.ndarray:
    """Closed form S_n(z^d) = {0, 0, d^n repeated d^n - 1 times}."""
    return np.array([0, 0] + [d ** n] * (d ** n - 1), dtype=np.complex128)


def multiset_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Optimal-matching distance between two equal-size multisets (for tests/reports)."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.size != b.size:
        return math.inf
    cost = np.abs(a[:, None] - b[None, :])
    i, j = linear_sum_assignment(cost)
    return float(cost[i, j].max(initial=0.0))
