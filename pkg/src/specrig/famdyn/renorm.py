"""Rescaled marked-orbit maps near a parameter: the similarity experiment."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DegenerateParameter, DerivativeTooSmall
from .family import FamilySpec, MarkedPoint, degenerate_mask

MAX_RHO = 0.5


def _orbit_end(F: FamilySpec, a: str | MarkedPoint, t: np.ndarray, n: int) -> np.ndarray:
    """``t -> f_t^n(a(t))`` on an array of parameters (inf where the orbit blows up)."""
    from .green import _hom_apply

    t = np.asarray(t, dtype=np.complex128)
    num, den = F.coefficients(t)
    X, Y = F.marked_point(a).lift(t)
    X = np.broadcast_to(X, t.shape).astype(np.complex128)
    Y = np.broadcast_to(Y, t.shape).astype(np.complex128)
    with np.errstate(all="ignore"):
        for _ in range(n):
            X, Y = _hom_apply(num, den, X, Y)
            s = np.maximum(np.abs(X), np.abs(Y))
            X, Y = X / s, Y / s
        out = np.where(Y == 0, np.inf + 0j, X / Y)
    return out


def orbit_derivative(F: FamilySpec, a: str | MarkedPoint, t0: complex, n: int) -> complex:
    """Parameter derivative of ``t -> f_t^n(a(t))`` at ``t0``.

    Central differences with one Richardson extrapolation; the step halves
    until two successive estimates agree.
    """
    h = 1e-3
    prev = None
    for _ in range(30):
        t = np.array([t0 + h, t0 - h, t0 + h / 2, t0 - h / 2])
        v = _orbit_end(F, a, t, n)
        if not np.all(np.isfinite(v)):
            h /= 2
            continue
        d1 = (v[0] - v[1]) / (2 * h)
        d2 = (v[2] - v[3]) / h
        est = (4 * d2 - d1) / 3
        if prev is not None and abs(est - prev) <= 1e-6 * max(1.0, abs(est)):
            return complex(est)
        prev = est
        h /= 2
    if prev is None:
        raise DegenerateParameter(f"orbit not finite near t0 = {t0}")
    return complex(prev)


@dataclass
class Frame:
    period: int
    rho: float
    values: np.ndarray  # samples x samples grid of h_n(tau); nan outside the disk
    spread: float

    def to_json(self) -> dict:
        vals = [[None if not np.isfinite(v.real) else [float(v.real), float(v.imag)] for v in row]
                for row in self.values]
        return {"period": self.period, "rho": self.rho, "spread": self.spread, "values": vals}


@dataclass
class SimilarityResult:
    t0: complex
    window_radius: float
    frames: list[Frame] = field(default_factory=list)
    skipped: dict[int, str] = field(default_factory=dict)

    def distances(self) -> list[float]:
        """Sup distance between consecutive frames (on the common disk grid)."""
        out = []
        for f1, f2 in zip(self.frames, self.frames[1:]):
            m = np.isfinite(f1.values) & np.isfinite(f2.values)
            out.append(float(np.abs(f1.values[m] - f2.values[m]).max()))
        return out

    def to_json(self, with_values: bool = False) -> dict:
        frames = []
        for f in self.frames:
            obj = f.to_json()
            if not with_values:
                obj.pop("values")
            frames.append(obj)
        return {"t0": [self.t0.real, self.t0.imag], "window_radius": self.window_radius,
                "frames": frames, "distances": self.distances(),
                "skipped": {str(k): v for k, v in sorted(self.skipped.items())}}


def disk_grid(samples: int, radius: float) -> np.ndarray:
    """``samples x samples`` grid over ``[-r, r]^2``; points outside the disk are nan."""
    s = np.linspace(-radius, radius, samples)
    tau = s[None, :] + 1j * s[:, None]
    return np.where(np.abs(tau) <= radius * (1 + 1e-12), tau, np.nan + 0j)


def similarity_frames(F: FamilySpec, a: str | MarkedPoint, t0: complex, periods: Sequence[int],
                      window_radius: float = 1.0, samples: int = 33, max_rho: float = MAX_RHO,
                      strict: bool = False) -> SimilarityResult:
    """Frames ``h_n(tau) = f^n_t(a(t))`` at ``t = t0 + rho_n tau``, where ``rho_n`` is
    one over the modulus of the parameter derivative of that orbit point at ``t0``.

    A period whose ``rho_n`` is not small (at least ``max_rho``) carries no
    rescaling; it is recorded in ``skipped`` or, with ``strict``, raised as
    :class:`DerivativeTooSmall`.  Every requested period is tried; none is
    singled out as "good".
    """
    t0 = complex(t0)
    if degenerate_mask(F, np.array([t0]))[0]:
        raise DegenerateParameter(f"family degenerates at t0 = {t0}")
    if samples < 2 or window_radius <= 0:
        raise ValueError("need samples >= 2 and window_radius > 0")
    out = SimilarityResult(t0, float(window_radius))
    tau = disk_grid(samples, window_radius)
    inside = np.isfinite(tau)
    for n in sorted(set(int(p) for p in periods)):
        deriv = orbit_derivative(F, a, t0, n)
        rho = math.inf if deriv == 0 else 1.0 / abs(deriv)
        if not rho < max_rho:
            msg = f"orbit derivative {abs(deriv):.3g} at period {n}; rescaling factor {rho:.3g} is not small"
            if strict:
                raise DerivativeTooSmall(msg)
            out.skipped[n] = msg
            continue
        vals = np.full(tau.shape, np.nan + 0j)
        vals[inside] = _orbit_end(F, a, t0 + rho * tau[inside], n)
        center = _orbit_end(F, a, np.array([t0]), n)[0]
        spread = float(np.abs(vals[inside] - center).max())
        out.frames.append(Frame(n, rho, vals, spread))
    return out


__all__ = ["Frame", "SimilarityResult", "disk_grid", "similarity_frames", "orbit_derivative"]
