"""One-parameter algebraic families ``t -> f_t`` with marked points ``a(t)``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from ..cpoly import ComplexPoly, homogeneous_resultant
from ..errors import DegenerateMap, DegenerateParameter
from ..ratmap import INF, RationalMap, ratmap_new, RESULTANT_TOL

PolyLike = Union[ComplexPoly, Sequence[complex]]


def _poly(p: PolyLike) -> ComplexPoly:
    return p if isinstance(p, ComplexPoly) else ComplexPoly(p)


@dataclass(frozen=True)
class MarkedPoint:
    """``a(t) = num(t) / den(t)``; the pair is also the holomorphic lift."""

    num: ComplexPoly
    den: ComplexPoly

    def lift(self, t):
        t = np.asarray(t, dtype=np.complex128)
        return _polyval(self.num, t), _polyval(self.den, t)

    def __call__(self, t: complex) -> complex:
        x, y = self.lift(t)
        x, y = complex(x), complex(y)
        if y == 0:
            return INF
        return x / y

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "MarkedPoint":
        return cls(ComplexPoly.from_json(obj["num"]), ComplexPoly.from_json(obj["den"]))


def _polyval(p: ComplexPoly, t):
    c = p.coeffs
    if c.size == 0:
        return np.zeros_like(np.asarray(t, dtype=np.complex128))
    return np.polynomial.polynomial.polyval(t, c)


@dataclass(frozen=True)
class FamilySpec:
    """``f_t(z) = sum_k num_k(t) z^k / sum_k den_k(t) z^k``.

    ``num_coeffs[k]`` and ``den_coeffs[k]`` are polynomials in ``t``.  The
    unnormalised pair of binary forms is the lift used for Green functions, so
    it must stay holomorphic in ``t``.
    """

    degree: int
    num_coeffs: tuple[ComplexPoly, ...]
    den_coeffs: tuple[ComplexPoly, ...]
    marked: Mapping[str, MarkedPoint] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        for name in ("num_coeffs", "den_coeffs"):
            polys = [_poly(p) for p in getattr(self, name)]
            if len(polys) > self.degree + 1:
                raise ValueError(f"{name} has more than degree + 1 entries")
            polys += [ComplexPoly()] * (self.degree + 1 - len(polys))
            object.__setattr__(self, name, tuple(polys))
        object.__setattr__(self, "marked", dict(self.marked))

    def coefficients(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Coefficient arrays of shape ``t.shape + (d + 1,)`` (ascending in z)."""
        t = np.asarray(t, dtype=np.complex128)
        num = np.stack([_polyval(p, t) for p in self.num_coeffs], axis=-1)
        den = np.stack([_polyval(p, t) for p in self.den_coeffs], axis=-1)
        return num, den

    def marked_point(self, a: str | MarkedPoint) -> MarkedPoint:
        if isinstance(a, MarkedPoint):
            return a
        try:
            return self.marked[a]
        except KeyError:
            raise KeyError(f"unknown marked point {a!r}; have {sorted(self.marked)}") from None

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "num_coeffs": [p.to_json() for p in self.num_coeffs],
            "den_coeffs": [p.to_json() for p in self.den_coeffs],
            "marked": {k: v.to_json() for k, v in self.marked.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FamilySpec":
        return cls(
            int(obj["degree"]),
            tuple(ComplexPoly.from_json(p) for p in obj["num_coeffs"]),
            tuple(ComplexPoly.from_json(p) for p in obj["den_coeffs"]),
            {k: MarkedPoint.from_json(v) for k, v in obj.get("marked", {}).items()},
        )


def constant_point(c: complex) -> MarkedPoint:
    return MarkedPoint(ComplexPoly([c]), ComplexPoly([1.0]))


INFINITY_POINT = MarkedPoint(ComplexPoly([1.0]), ComplexPoly())


def unicritical_family(d: int = 2) -> FamilySpec:
    """``z^d + t`` marked by the critical point 0, the critical value ``t`` and infinity."""
    num = [ComplexPoly([0, 1])] + [ComplexPoly()] * (d - 1) + [ComplexPoly([1])]
    den = [ComplexPoly([1])]
    marked = {
        "c0": constant_point(0),
        "cv": MarkedPoint(ComplexPoly([0, 1]), ComplexPoly([1])),
        "inf": INFINITY_POINT,
    }
    return FamilySpec(d, tuple(num), tuple(den), marked)


def persistent_fixed_point_family() -> FamilySpec:
    """``z^2 + s - s^2`` in which ``a(s) = s`` is fixed for every ``s``.

    Reparametrising the quadratic family by the fixed point makes the fixed
    point a polynomial (rather than algebraic) function of the parameter.
    """
    num = (ComplexPoly([0, 1, -1]), ComplexPoly(), ComplexPoly([1]))
    den = (ComplexPoly([1]),)
    marked = {"c0": constant_point(0), "fixed": MarkedPoint(ComplexPoly([0, 1]), ComplexPoly([1]))}
    return FamilySpec(2, num, den, marked)


def family_eval(F: FamilySpec, t: complex) -> RationalMap:
    """Specialise the family at ``t``; degree drops and shared roots are rejected."""
    if not np.isfinite(complex(t)):
        raise DegenerateParameter("parameter must be finite")
    num, den = F.coefficients(t)
    if abs(homogeneous_resultant(num, den)) <= RESULTANT_TOL:
        raise DegenerateParameter(f"f_t degenerates at t = {t}")
    try:
        f = ratmap_new(ComplexPoly(num), ComplexPoly(den))
    except DegenerateMap as exc:
        raise DegenerateParameter(f"f_t degenerates at t = {t}: {exc}") from None
    if f.degree != F.degree:
        raise DegenerateParameter(f"degree drops to {f.degree} at t = {t}")
    return f


def degenerate_mask(F: FamilySpec, t: np.ndarray) -> np.ndarray:
    """Boolean mask of parameters where the scaled resultant collapses."""
    num, den = F.coefficients(t)
    d = F.degree
    nn = np.linalg.norm(num, axis=-1, keepdims=True)
    nd = np.linalg.norm(den, axis=-1, keepdims=True)
    bad = (nn[..., 0] == 0) | (nd[..., 0] == 0)
    num = num / np.where(nn == 0, 1, nn)
    den = den / np.where(nd == 0, 1, nd)
    size = 2 * d
    S = np.zeros(num.shape[:-1] + (size, size), dtype=np.complex128)
    for i in range(d):
        S[..., i, i:i + d + 1] = num[..., ::-1]
        S[..., d + i, i:i + d + 1] = den[..., ::-1]
    res = np.abs(np.linalg.det(S))
    return bad | (res <= RESULTANT_TOL)


def marked_orbit(F: FamilySpec, a: str | MarkedPoint, t: complex, n: int) -> list[complex]:
    """``[a(t), f_t(a(t)), ..., f_t^n(a(t))]`` by pointwise application."""
    f = family_eval(F, t)
    x = F.marked_point(a)(t)
    out = [x]
    for _ in range(n):
        x = f(x)
        out.append(x)
    return out


__all__ = [
    "FamilySpec", "INFINITY_POINT", "MarkedPoint", "constant_point", "degenerate_mask", "family_eval",
    "marked_orbit", "persistent_fixed_point_family", "unicritical_family",
]
