"""Orbit diagnostics: derivative growth, recurrence to the critical set,
separation of orbit pairs and a probe for dynamical relations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DerivativeVanishes
from ..ratmap import RationalMap, chordal, critical_points, orbit, spherical_derivative
from .orbits import ORBIT_TOL, SEPARATION, classify_orbit

SENTINEL = math.inf


def ce_exponent_estimate(f: RationalMap, c, N: int, n_max: int) -> float:
    """Growth rate of ``|(f^n)'(f^N(c))|`` in the spherical metric.

    The least-squares slope of ``log |(f^n)'|`` against ``n`` over
    ``n_max/2 <= n <= n_max`` estimates the exponent ``log lambda``.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    pts = orbit(f, c, N + n_max)
    logs = [0.0]
    for k, x in enumerate(pts[N:N + n_max]):
        s = spherical_derivative(f, x)
        if s == 0:
            raise DerivativeVanishes(f"orbit meets a critical point at step {N + k}")
        logs.append(logs[-1] + math.log(s))
    n = np.arange(n_max // 2, n_max + 1)
    slope = np.polyfit(n, np.array(logs)[n], 1)[0]
    return float(slope)


def recurrence_exponent_estimate(f: RationalMap, c, n_max: int) -> float:
    """Smallest ``s`` with ``dist(f^k(c), critical set) >= k^-s`` for ``2 <= k <= n_max``.

    Returns ``inf`` if the orbit lands exactly on a critical point; never
    negative (distances are at most 1 in the chordal metric).
    """
    if f.degree < 2:
        raise ValueError("degree must be >= 2")
    crit = [x for x, _ in critical_points(f)]
    pts = orbit(f, c, n_max)
    s = 0.0
    for k in range(1, n_max + 1):
        dk = min(chordal(pts[k], x) for x in crit)
        if dk == 0:
            return SENTINEL
        if k >= 2:
            s = max(s, -math.log(dk) / math.log(k))
    return s


def _mp_orbit_distances(f: RationalMap, a, b, n: int, bits: int) -> list:
    """Chordal distances along two orbits in homogeneous mp arithmetic."""
    import mpmath as mp

    num, den = f.hom
    with mp.workprec(bits):
        cn = [mp.mpc(complex(v)) for v in num]
        cd = [mp.mpc(complex(v)) for v in den]

        def lift(x):
            if isinstance(x, (mp.mpc, mp.mpf)):
                return [mp.mpc(x), mp.mpc(1)]
            x = complex(x)
            if math.isinf(x.real) or math.isinf(x.imag):
                return [mp.mpc(1), mp.mpc(0)]
            return [mp.mpc(x), mp.mpc(1)]

        def step(v):
            X, Y = v
            N = mp.mpc(0)
            D = mp.mpc(0)
            Xp = mp.mpc(1)
            for k in range(len(cn)):
                m = Xp * Y ** (len(cn) - 1 - k)
                N += cn[k] * m
                D += cd[k] * m
                Xp *= X
            s = max(abs(N), abs(D))
            return [N / s, D / s]

        def dist(u, v):
            nu = mp.sqrt(abs(u[0]) ** 2 + abs(u[1]) ** 2)
            nv = mp.sqrt(abs(v[0]) ** 2 + abs(v[1]) ** 2)
            return abs(u[0] * v[1] - u[1] * v[0]) / (nu * nv)

        u, v = lift(a), lift(b)
        out = []
        for _ in range(n):
            out.append(dist(u, v))
            u, v = step(u), step(v)
    return out


def separation_statistics(f: RationalMap, a, b, n: int, delta: float, *,
                          bits: int | None = None) -> tuple[float, float]:
    """``(fs_frequency, as_average)`` for the pair of orbits of ``a`` and ``b``.

    ``fs_frequency`` is the fraction of ``k < n`` with chordal distance at
    least ``delta``; ``as_average`` the mean of ``max(-log d_k, 0)``, or
    ``inf`` if some ``d_k`` vanishes.  With ``bits`` the orbits run in
    multiprecision, so chaotic orbits stay faithful for about ``bits`` steps
    and escaping orbits keep their (tiny) separation instead of underflowing;
    ``a`` and ``b`` may then be mpmath numbers.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if bits is None:
        pa, pb = orbit(f, a, n - 1), orbit(f, b, n - 1)
        dists = [chordal(x, y) for x, y in zip(pa, pb)]
        fs = sum(1 for dk in dists if dk >= delta) / n
        if any(dk == 0 for dk in dists):
            return fs, SENTINEL
        return fs, sum(max(-math.log(dk), 0.0) for dk in dists) / n
    import mpmath as mp

    dists = _mp_orbit_distances(f, a, b, n, bits)
    fs = sum(1 for dk in dists if dk >= delta) / n
    if any(dk == 0 for dk in dists):
        return fs, SENTINEL
    return fs, float(mp.fsum(max(-mp.log(dk), 0) for dk in dists) / n)


@dataclass(frozen=True)
class Relation:
    verdict: str  # "related" or "unknown"
    reason: str | None = None
    indices: tuple[int, int] | None = None

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason,
                "indices": list(self.indices) if self.indices else None}

    @classmethod
    def from_json(cls, obj: dict) -> "Relation":
        idx = obj.get("indices")
        return cls(obj["verdict"], obj.get("reason"), tuple(idx) if idx else None)


def dynamically_related_probe(f: RationalMap, a, b, bound: int = 30, tol: float = ORBIT_TOL) -> Relation:
    """Check the two sufficient reasons for a dynamical relation.

    A collision ``f^m(a) == f^n(b)`` (smallest ``m + n``, then ``m``) counts
    only when the orbits genuinely merge there: one step earlier the points
    must still be apart, which rules out two orbits converging to the same
    attracting cycle.  Otherwise both points preperiodic is tried.  Never
    answers "not related".
    """
    pa, pb = orbit(f, a, bound), orbit(f, b, bound)
    for total in range(0, 2 * bound + 1):
        for m in range(max(0, total - bound), min(total, bound) + 1):
            k = total - m
            if chordal(pa[m], pb[k]) < tol:
                if m == 0 or k == 0 or chordal(pa[m - 1], pb[k - 1]) > SEPARATION:
                    return Relation("related", "collision", (m, k))
    ca, cb = classify_orbit(pa, tol), classify_orbit(pb, tol)
    if ca.finite and cb.finite:
        return Relation("related", "both-preperiodic")
    return Relation("unknown")


__all__ = ["Relation", "SENTINEL", "ce_exponent_estimate", "dynamically_related_probe",
           "recurrence_exponent_estimate", "separation_statistics"]
