"""Finite-orbit detection for critical and marked orbits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..ratmap import RationalMap, chordal, critical_points, is_inf, orbit

ORBIT_TOL = 1e-9
ESCAPE_BOUND = 1e8
ESCAPE_STEPS = 3
# a certified return must be a genuine landing: one step earlier the two
# points still have to be this far apart (convergence to a cycle is not enough)
SEPARATION = 1e-3


@dataclass(frozen=True)
class OrbitClassification:
    status: str  # "periodic", "escaping" or "undecided"
    period: int | None = None
    preperiod: int | None = None
    witness: tuple[int, int] | None = None

    @property
    def finite(self) -> bool:
        return self.status == "periodic"

    def to_json(self) -> dict:
        return {"status": self.status, "period": self.period, "preperiod": self.preperiod,
                "witness": list(self.witness) if self.witness else None}

    @classmethod
    def from_json(cls, obj: dict) -> "OrbitClassification":
        w = obj.get("witness")
        return cls(obj["status"], obj.get("period"), obj.get("preperiod"), tuple(w) if w else None)


def _modulus(x) -> float:
    return float("inf") if is_inf(x) else abs(x)


def _escapes(orb: Sequence[complex]) -> int | None:
    """Index at which the orbit has exceeded the bound after monotone growth."""
    mods = [_modulus(x) for x in orb]
    for i in range(ESCAPE_STEPS, len(mods)):
        if mods[i] > ESCAPE_BOUND and all(mods[j] > mods[j - 1] for j in range(i - ESCAPE_STEPS + 1, i + 1)):
            return i
    return None


def classify_orbit(orb: Sequence[complex], tol: float = ORBIT_TOL,
                   separation: float = SEPARATION) -> OrbitClassification:
    """Smallest (preperiod, period) with ``orb[m + p] == orb[m]`` up to ``tol``.

    Escape is tested first, so floating-point overflow to infinity is never
    mistaken for landing on a fixed point at infinity.  A return is certified
    only if ``m == 0`` or the points one step earlier are still separated;
    orbits that merely converge to an attracting cycle come back undecided.
    """
    if len(orb) == 0:
        raise ValueError("orbit must be nonempty")
    i = _escapes(orb)
    if i is not None:
        return OrbitClassification("escaping", witness=(i, i))
    n = len(orb)
    for m in range(n):
        for p in range(1, n - m):
            if chordal(orb[m + p], orb[m]) < tol:
                if m == 0 or chordal(orb[m - 1 + p], orb[m - 1]) > separation:
                    return OrbitClassification("periodic", p, m, (m, m + p))
                return OrbitClassification("undecided", witness=(m, m + p))
    return OrbitClassification("undecided")


def is_pcf(f: RationalMap, max_iters: int = 200, tol: float = ORBIT_TOL) -> tuple[bool, list[OrbitClassification]]:
    """PCF verdict plus one classification per distinct critical point.

    Any undecided critical orbit makes the verdict False; it is never True on
    incomplete evidence.
    """
    if f.degree < 2:
        raise ValueError("degree must be >= 2")
    classes = [classify_orbit(orbit(f, c, max_iters), tol) for c, _ in critical_points(f)]
    return all(c.finite for c in classes), classes


def is_hyperbolic_disjoint(f: RationalMap, max_iters: int = 200, tol: float = ORBIT_TOL) -> bool:
    """True when the 2d - 2 critical points are simple and lie on 2d - 2 distinct
    superattracting cycles."""
    crit = critical_points(f)
    if any(m > 1 for _, m in crit) or len(crit) != 2 * f.degree - 2:
        return False
    cycles = []
    for c, _ in crit:
        orb = orbit(f, c, max_iters)
        cls = classify_orbit(orb, tol)
        if not cls.finite or cls.preperiod != 0:
            return False
        cycles.append(orb[: cls.period])
    for i, cyc in enumerate(cycles):
        for j, (c, _) in enumerate(crit):
            if i != j and any(chordal(c, x) < tol for x in cyc):
                return False
    return True


__all__ = ["OrbitClassification", "classify_orbit", "is_hyperbolic_disjoint", "is_pcf"]
