"""Postcritically finite parameters of ``z^d + t`` and their equidistribution."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from ..cpoly import implicit_roots
from ..errors import DegreeCapExceeded, NonConvergence
from .green import GridMeasure

# beyond this the parameter term no longer matters and only the ratio
# P'/P is carried: P_{k+1} ~ P_k^d, so the log-derivative scales by d
_BIG = 1e150
PCF_CAP = 1 << 14


def _orbit_logder(d: int, n: int, m: int | None = None):
    """``t -> Q'(t)/Q(t)`` for ``Q = P_n`` or ``Q = P_n - P_m``, where
    ``P_1 = t`` and ``P_{k+1} = P_k^d + t`` (the critical orbit of ``z^d + t``).
    """

    def logder(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.complex128)
        P = t.copy()
        dP = np.ones_like(t)
        q = np.zeros_like(t)
        big = np.zeros(t.shape, dtype=bool)
        Pm = np.zeros_like(t)
        dPm = np.zeros_like(t)
        with np.errstate(all="ignore"):
            for k in range(1, n):
                if m is not None and k == m:
                    Pm, dPm = P.copy(), dP.copy()
                newly = ~big & (np.abs(P) > _BIG)
                q = np.where(newly, dP / P, q)
                big |= newly
                q = np.where(big, d * q, q)
                Pd1 = P ** (d - 1)
                dP = np.where(big, dP, d * Pd1 * dP + 1)
                P = np.where(big, P, Pd1 * P + t)
            if m is not None and m == n:
                raise ValueError("m must be smaller than n")
            if m is None:
                val = P
                der = dP
            else:
                val = P - Pm
                der = dP - dPm
            small = np.where(big, q, der / val)
        return small

    return logder


def _critical_orbit(d: int, t: complex, n: int) -> list[complex]:
    out = [0j]
    z = 0j
    for _ in range(n):
        z = z ** d + t
        out.append(z)
    return out


def _cap(d: int, k: int) -> None:
    if d ** (k - 1) > PCF_CAP:
        raise DegreeCapExceeded(f"degree {d}^{k - 1} exceeds cap {PCF_CAP}")


def _roots(d: int, n: int, m: int | None = None, seed: int = 0) -> np.ndarray:
    deg = d ** (n - 1)
    # roots accumulate on the connectedness locus; starting on a circle that
    # roughly traces it (rather than one enclosing it) saves most iterations
    center, radius = (-0.6, 1.2) if d == 2 else (0.0, 1.0)
    clusters = implicit_roots(_orbit_logder(d, n, m), deg, radius, seed=seed, center=center,
                              max_iter=5000, cluster_radius=1e-12, step_tol=1e-6)
    return np.array([c.value for c in clusters for _ in range(c.multiplicity)])


def _exact_type(d: int, t: complex, limit: int, tol: float) -> tuple[int, int] | None:
    """Smallest (preperiod, period) of the critical orbit of ``z^d + t``."""
    orb = _critical_orbit(d, t, limit)
    scale = max(1.0, max(abs(z) for z in orb))
    for total in range(1, limit + 1):
        for m in range(0, total):
            p = total - m
            if abs(orb[m + p] - orb[m]) < tol * scale:
                return m, p
    return None


def pcf_parameters_unicritical(d: int, period: int, kind: str = "center", preperiod: int = 0,
                               *, seed: int = 0, tol: float = 1e-7) -> list[complex]:
    """Centers (critical point periodic of exact period ``period``) or
    Misiurewicz parameters (exact preperiod ``preperiod`` and period) of
    ``z^d + t``.

    Centers are the roots of ``P_n`` with those of ``P_m``, ``m | n``, removed;
    Misiurewicz parameters the roots of ``P_{m+p} - P_m`` whose critical orbit
    has exactly the requested type.  Roots come from a simultaneous iteration
    driven by the recurrence itself, never from expanded coefficients.
    """
    if d < 2 or period < 1:
        raise ValueError("need d >= 2 and period >= 1")
    if kind == "center":
        _cap(d, period)
        return list(_centers(d, period, seed, tol))
    if kind == "misiurewicz":
        if preperiod < 1:
            raise ValueError("Misiurewicz parameters need preperiod >= 1")
        n = preperiod + period
        _cap(d, n)
        roots = _roots(d, n, preperiod, seed=seed)
        keep = []
        for t in roots:
            typ = _exact_type(d, t, n, tol)
            if typ == (preperiod, period) and all(abs(t - s) > tol for s in keep):
                keep.append(t)
        return _sorted(np.array(keep))
    raise ValueError(f"unknown kind {kind!r}")


@lru_cache(maxsize=64)
def _centers(d: int, n: int, seed: int, tol: float) -> tuple[complex, ...]:
    roots = _roots(d, n, seed=seed)
    lower = [k for k in range(1, n) if n % k == 0]
    if lower:
        # every root of P_k with k | n is a root of P_n; exact periods partition them
        low = np.array([z for k in lower for z in _centers(d, k, seed, tol)])
        roots = _remove_matches(roots, low, tol)
    return tuple(_sorted(roots))


def _remove_matches(roots: np.ndarray, low: np.ndarray, tol: float) -> np.ndarray:
    """Drop, one for one, the roots nearest to each lower-period root."""
    from scipy.optimize import linear_sum_assignment
    from scipy.spatial import cKDTree

    tree = cKDTree(np.column_stack([roots.real, roots.imag]))
    k = min(4, roots.size)
    dist, idx = tree.query(np.column_stack([low.real, low.imag]), k=k)
    dist = np.atleast_2d(dist)
    idx = np.atleast_2d(idx)
    # small assignment over the few nearest candidates keeps removal one-to-one
    cand = np.unique(idx)
    pos = {c: i for i, c in enumerate(cand)}
    cost = np.full((low.size, cand.size), np.inf)
    for i in range(low.size):
        for j in range(k):
            cost[i, pos[idx[i, j]]] = dist[i, j]
    finite = np.where(np.isfinite(cost), cost, 1e6)
    r, c = linear_sum_assignment(finite)
    if np.any(finite[r, c] > tol):
        raise NonConvergence(f"lower-period root not matched within {tol:g} (worst {finite[r, c].max():.2e})")
    drop = set(int(cand[j]) for j in c)
    return np.array([z for i, z in enumerate(roots) if i not in drop])


def _sorted(z: np.ndarray) -> list[complex]:
    z = np.asarray(z, dtype=np.complex128)
    # snap tiny imaginary parts of real parameters for stable output
    z = np.where(np.abs(z.imag) < 1e-12, z.real + 0j, z)
    order = np.lexsort((np.round(z.imag, 12), np.round(z.real, 12)))
    return [complex(v) for v in z[order]]


def equidistribution_discrepancy(points: Sequence[complex], mu: GridMeasure, coarse: int = 8) -> float:
    """Largest block-wise gap between the empirical and the grid measure.

    The window is cut into ``coarse x coarse`` blocks; both sides are
    normalised to probability (points outside the window count towards the
    empirical denominator but no block).
    """
    if mu.total_mass <= 0:
        raise ValueError("measure has no mass")
    pts = np.asarray(points, dtype=np.complex128)
    if pts.size == 0:
        raise ValueError("no points")
    x0, x1, y0, y1 = mu.window
    nx, ny = mu.resolution
    bi = np.floor((pts.real - x0) / (x1 - x0) * coarse).astype(int)
    bj = np.floor((pts.imag - y0) / (y1 - y0) * coarse).astype(int)
    ok = (bi >= 0) & (bi < coarse) & (bj >= 0) & (bj < coarse)
    emp = np.zeros((coarse, coarse))
    np.add.at(emp, (bj[ok], bi[ok]), 1.0)
    emp /= pts.size
    ci = np.minimum((np.arange(nx) * coarse) // nx, coarse - 1)
    cj = np.minimum((np.arange(ny) * coarse) // ny, coarse - 1)
    blocks = np.zeros((coarse, coarse))
    np.add.at(blocks, (cj[:, None], ci[None, :]), mu.masses)
    blocks /= mu.total_mass
    return float(np.abs(emp - blocks).max())


def sample_from_grid(mu: GridMeasure, count: int, seed: int = 0) -> np.ndarray:
    """Cell centres drawn with probability proportional to mass."""
    rng = np.random.default_rng(seed)
    xs, ys = mu.centers()
    p = (mu.masses / mu.masses.sum()).ravel()
    idx = rng.choice(p.size, size=count, p=p)
    j, i = np.unravel_index(idx, mu.masses.shape)
    return xs[i] + 1j * ys[j]


__all__ = ["equidistribution_discrepancy", "pcf_parameters_unicritical", "sample_from_grid"]
