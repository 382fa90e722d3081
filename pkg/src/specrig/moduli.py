"""Operations on conjugacy classes: conjugacy search, quadratic coordinates,
exceptional maps, elementary transformations and a semiconjugacy probe."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cpoly import ComplexPoly, homogeneous_resultant, sylvester_matrix
from .errors import DegenerateMap, InsufficientMarkers, NonConvergence, ShapeMismatch, SingularCurve
from .ratmap import (
    MobiusTransform,
    RationalMap,
    apply_array,
    chordal,
    chordal_array,
    compose,
    ratmap_new,
    sample_points,
)
from .spectrum import fixed_points, multiplier, spectrum_coordinates

CONJUGACY_TOL = 1e-7
SEMICONJ_TOL = 1e-7
DEFLATION = (1.0, 1e-2, 1e-1)


@dataclass(frozen=True)
class ConjugacyWitness:
    """A Mobius ``phi`` with ``phi o f o phi^-1 == g`` up to ``residual``."""

    mobius: MobiusTransform
    residual: float

    def to_json(self) -> dict:
        return {"mobius": self.mobius.to_json(), "residual": self.residual}

    @classmethod
    def from_json(cls, obj: dict) -> "ConjugacyWitness":
        return cls(MobiusTransform.from_json(obj["mobius"]), float(obj["residual"]))


@dataclass(frozen=True)
class Marker:
    point: complex
    period: int
    multiplier: complex


def _markers(f: RationalMap) -> list[Marker]:
    """Distinct fixed points, topped up with exact period-2 points if needed."""
    fix = [x for x, _ in fixed_points(f, 1).points]
    out = [Marker(x, 1, multiplier(f, x, 1, check_tol=1e-4)) for x in fix]
    if len(out) >= 3:
        return out
    for x, _ in fixed_points(f, 2).points:
        if all(chordal(x, y) > 1e-6 for y in fix):
            out.append(Marker(x, 2, multiplier(f, x, 2, check_tol=1e-4)))
    return out


def _pointwise_residual(f: RationalMap, g: RationalMap, phi: MobiusTransform, z: np.ndarray) -> float:
    """max chordal distance between ``phi(f(z))`` and ``g(phi(z))``."""
    m = phi.matrix
    lhs = _mobius_array(m, apply_array(f, z))
    rhs = apply_array(g, _mobius_array(m, z))
    return float(chordal_array(lhs, rhs).max())


def _mobius_array(m: np.ndarray, z: np.ndarray) -> np.ndarray:
    phi = MobiusTransform.from_matrix(m)
    return np.array([phi(x) for x in z], dtype=np.complex128)


def conjugacy_test(f: RationalMap, g: RationalMap, tol: float = CONJUGACY_TOL,
                   samples: int = 32) -> ConjugacyWitness | None:
    """Search for a Mobius conjugacy from ``f`` to ``g`` through periodic markers.

    One ordered triple of markers of ``f`` is fixed; every ordered triple of
    markers of ``g`` with matching periods (and multipliers, which conjugacy
    preserves) determines a candidate.  Candidates are tried in a fixed order
    and the first one passing the pointwise check is returned.
    """
    if f.degree != g.degree:
        raise ShapeMismatch(f"degrees differ: {f.degree} vs {g.degree}")
    mf = _markers(f)
    if len(mf) < 3:
        raise InsufficientMarkers(f"only {len(mf)} distinct markers of period <= 2")
    mg = _markers(g)
    if len(mg) != len(mf):
        return None
    triple = mf[:3]
    z = sample_points(samples)
    for cand in itertools.permutations(mg, 3):
        if any(a.period != b.period or abs(a.multiplier - b.multiplier) > 1e-3 * (1 + abs(a.multiplier))
               for a, b in zip(triple, cand)):
            continue
        try:
            phi = MobiusTransform.from_three_points([m.point for m in triple], [m.point for m in cand])
        except (DegenerateMap, np.linalg.LinAlgError):
            continue
        r = _pointwise_residual(f, g, phi, z)
        if r < tol:
            return ConjugacyWitness(phi, r)
    return None


def milnor_coordinates(f: RationalMap, check: float = 1e-8) -> tuple[complex, complex, complex]:
    """``(e1, e2, e3)`` of the three fixed-point multipliers of a quadratic map.

    The index identity forces ``e3 = e1 - 2``; a violation signals a bad
    fixed-point computation and raises.
    """
    if f.degree != 2:
        raise ShapeMismatch("Milnor coordinates need a degree-2 map")
    S = []
    for x, m in fixed_points(f, 1).points:
        S.extend([multiplier(f, x, 1, check_tol=1e-4)] * m)
    e1, e2, e3 = (complex(v) for v in spectrum_coordinates(S))
    if abs(e3 - (e1 - 2)) > check * (1 + abs(e1) + abs(e3)):
        raise NonConvergence(f"quadratic relation violated: e3={e3}, e1-2={e1 - 2}")
    return e1, e2, e3


def exceptional_map(kind: str, d: int) -> RationalMap:
    """``z**d`` (power) or the monic Chebyshev polynomial (``T2 = z**2 - 2``)."""
    if d < 2:
        raise ValueError("degree must be >= 2")
    if kind == "power":
        return ratmap_new(ComplexPoly.monomial(d))
    if kind == "chebyshev":
        z = ComplexPoly.monomial(1)
        prev, cur = ComplexPoly.constant(2.0), z
        for _ in range(d - 1):
            prev, cur = cur, z * cur - prev
        return ratmap_new(cur)
    raise ValueError(f"unknown exceptional kind {kind!r}")


@dataclass(frozen=True)
class LattesParams:
    """The curve ``y**2 = x**3 + a x + b``."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        disc = 4 * a ** 3 + 27 * b ** 2
        scale = 4 * abs(a) ** 3 + 27 * abs(b) ** 2
        if scale == 0 or abs(disc) <= 1e-10 * scale:
            raise SingularCurve(f"singular curve: 4a^3 + 27b^2 = {disc}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def flexible_lattes(p: LattesParams | tuple[complex, complex]) -> RationalMap:
    """x-coordinate of point doubling on the curve (a degree-4 map)."""
    if not isinstance(p, LattesParams):
        p = LattesParams(*p)
    a, b = p.a, p.b
    num = ComplexPoly([a * a, -8 * b, -2 * a, 0, 1])
    den = ComplexPoly([4 * b, 4 * a, 0, 4])
    f = ratmap_new(num, den)
    if f.degree != 4:
        raise SingularCurve("duplication map lost degree")
    return f


def curve_double(a: complex, b: complex, x: complex, y: complex) -> complex:
    """x-coordinate of 2P by the tangent-line group law."""
    slope = (3 * x * x + a) / (2 * y)
    return slope * slope - 2 * x


def elementary_transform(h1: RationalMap, h2: RationalMap) -> tuple[RationalMap, RationalMap]:
    """``(h1 o h2, h2 o h1)``."""
    if h1.degree * h2.degree < 2:
        raise DegenerateMap("the product of degrees must be at least 2")
    fg = []
    for u, v in ((h1, h2), (h2, h1)):
        c = compose(u, v)
        fg.append(ratmap_new(c.num, c.den))
    return fg[0], fg[1]


def _hom_eval(coeffs: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    deg = coeffs.size - 1
    out = np.zeros_like(X)
    for k, c in enumerate(coeffs):
        out = out + c * X ** k * Y ** (deg - k)
    return out


def _unit(X, Y):
    s = np.sqrt(np.abs(X) ** 2 + np.abs(Y) ** 2)
    return X / s, Y / s


def semiconjugacy_search(f: RationalMap, g: RationalMap, deg_h: int, *, samples: int = 64,
                         starts: int = 40, seed: int = 0,
                         tol: float = SEMICONJ_TOL) -> RationalMap | None:
    """Look for ``h`` of degree ``deg_h`` with ``f o h == h o g``.

    The coefficients of ``h = A / B`` are fitted by Levenberg-Marquardt on the
    polynomial identity ``N_f(A, B) B(g) - D_f(A, B) A(g) = 0`` sampled on two
    circles, from seeded random starts.  Constant ``h`` solves the identity
    whenever it is a common fixed point, so each start first runs with the
    residual divided by the resultant of ``(A, B)`` and is then polished on the
    plain residual.  A returned map is a certificate; ``None`` only means the
    search came back empty.
    """
    from scipy.optimize import least_squares

    if f.degree != g.degree:
        raise ShapeMismatch(f"degrees differ: {f.degree} vs {g.degree}")
    if not 1 <= deg_h <= 4:
        raise ValueError("deg_h must be in 1..4")
    z = sample_points(samples)
    one = np.ones_like(z)
    fn, fd = f.hom
    gn, gd = g.hom
    G1, G2 = _unit(_hom_eval(gn, z, one), _hom_eval(gd, z, one))
    k = deg_h + 1
    rng = np.random.default_rng(seed)
    gauge = rng.normal(size=2 * k) + 1j * rng.normal(size=2 * k)

    def split(v):
        c = v[: 2 * k] + 1j * v[2 * k:]
        return c[:k], c[k:]

    def fun(v, eps):
        A, B = split(v)
        H1, H2 = _hom_eval(A, z, one), _hom_eval(B, z, one)
        r = _hom_eval(fn, H1, H2) * _hom_eval(B, G1, G2) - _hom_eval(fd, H1, H2) * _hom_eval(A, G1, G2)
        if eps:
            res = abs(np.linalg.det(sylvester_matrix(A[::-1], B[::-1])))
            r = r * (1.0 + eps / max(res, 1e-300))
        c = np.concatenate([A, B])
        return np.concatenate([r.real, r.imag, [np.vdot(c, c).real - 1.0, np.vdot(gauge, c).imag]])

    opts = dict(method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    found: list[RationalMap] = []
    first_hit = starts
    for i in range(starts):
        if found and i > first_hit + 8:
            break
        v0 = rng.normal(size=4 * k)
        v0 /= np.linalg.norm(v0)
        with np.errstate(all="ignore"):
            sol = least_squares(fun, v0, args=(DEFLATION[i % len(DEFLATION)],), max_nfev=1500, **opts)
            if not np.all(np.isfinite(sol.x)):
                continue
            sol = least_squares(fun, sol.x, args=(0.0,), max_nfev=500, **opts)
        if not np.all(np.isfinite(sol.x)):
            continue
        A, B = split(sol.x)
        h = _as_map(A, B, deg_h)
        if h is None or semiconjugacy_residual(f, g, h, samples) >= tol:
            continue
        h = _snap(f, g, A, B, deg_h, samples, tol) or h
        if h.den.degree == 0:
            return h
        found.append(h)
        first_hit = min(first_hit, i)
    if not found:
        return None
    # several h can exist (precomposing with symmetries of g); prefer sparse ones
    return min(found, key=lambda h: int(np.count_nonzero(h.num.coeffs)) + int(np.count_nonzero(h.den.coeffs)))


def _snap(f, g, A, B, deg_h, samples, tol) -> RationalMap | None:
    """Zero out coefficients at noise level if the identity still holds."""
    c = np.concatenate([A, B])
    c = c / c[np.argmax(np.abs(c))]
    c = np.where(np.abs(c) < 1e-7, 0, c)
    c = np.where(np.abs(c.real) < 1e-9, 1j * c.imag, c)
    c = np.where(np.abs(c.imag) < 1e-9, c.real, c)
    h = _as_map(c[: deg_h + 1], c[deg_h + 1:], deg_h)
    if h is not None and semiconjugacy_residual(f, g, h, samples) < tol:
        return h
    return None


def _as_map(A: np.ndarray, B: np.ndarray, deg_h: int) -> RationalMap | None:
    na, nb = np.linalg.norm(A), np.linalg.norm(B)
    if min(na, nb) < 1e-6 * max(na, nb) or abs(homogeneous_resultant(A, B)) < 1e-8:
        return None
    try:
        h = ratmap_new(ComplexPoly(A), ComplexPoly(B))
    except DegenerateMap:
        return None
    return h if h.degree == deg_h else None


def semiconjugacy_residual(f: RationalMap, g: RationalMap, h: RationalMap, samples: int = 64) -> float:
    z = sample_points(samples)
    return float(chordal_array(apply_array(f, apply_array(h, z)), apply_array(h, apply_array(g, z))).max())


def collision_label(distance: float, tol: float) -> str:
    """Spectral coincidences are only ever reported as candidates."""
    return "candidate" if distance < tol else "distinct"


__all__ = [
    "ConjugacyWitness", "LattesParams", "Marker", "collision_label", "conjugacy_test", "curve_double",
    "elementary_transform", "exceptional_map", "flexible_lattes", "milnor_coordinates",
    "semiconjugacy_residual", "semiconjugacy_search",
]
