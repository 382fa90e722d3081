"""Escape-rate potentials of marked points and their discrete Laplacians."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DegenerateParameter, ShapeMismatch
from .family import FamilySpec, MarkedPoint, degenerate_mask, family_eval

Window = tuple[float, float, float, float]


def _hom_apply(num: np.ndarray, den: np.ndarray, X: np.ndarray, Y: np.ndarray):
    d = num.shape[-1] - 1
    N = np.zeros_like(X)
    D = np.zeros_like(X)
    Xp = np.ones_like(X)
    for k in range(d + 1):
        Yk = Y ** (d - k)
        N = N + num[..., k] * Xp * Yk
        D = D + den[..., k] * Xp * Yk
        Xp = Xp * X
    return N, D


def green_field(F: FamilySpec, a: str | MarkedPoint, t, n_iter: int = 200) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised escape-rate potential and the size of its last increment.

    ``G = log|A| + sum_{k=1..n} d^-k log|F(v_{k-1})|`` with ``v_k`` the
    sup-normalised iterates of the lift ``A = (a_num(t), a_den(t))``; this is
    ``d^-n log|F^n(A)|`` without overflow.
    """
    t = np.asarray(t, dtype=np.complex128)
    num, den = F.coefficients(t)
    X, Y = F.marked_point(a).lift(t)
    X = np.broadcast_to(X, t.shape).astype(np.complex128)
    Y = np.broadcast_to(Y, t.shape).astype(np.complex128)
    d = F.degree
    with np.errstate(all="ignore"):
        s = np.maximum(np.abs(X), np.abs(Y))
        G = np.log(s)
        X, Y = X / s, Y / s
        inc = np.zeros(t.shape)
        w = 1.0
        for _ in range(n_iter):
            w /= d
            X, Y = _hom_apply(num, den, X, Y)
            s = np.maximum(np.abs(X), np.abs(Y))
            inc = w * np.log(s)
            G = G + inc
            X, Y = X / s, Y / s
    return G, np.abs(inc)


def green_value(F: FamilySpec, a: str | MarkedPoint, t: complex, n_iter: int = 200,
                with_error: bool = False):
    """Escape-rate potential of the marked point at parameter ``t``.

    Returns the partial sum after ``n_iter`` steps, and with ``with_error`` also
    the modulus of the last increment as an error estimate.
    """
    family_eval(F, t)
    G, err = green_field(F, a, np.array([t]), n_iter)
    g, e = float(G[0]), float(err[0])
    if not math.isfinite(g):
        raise DegenerateParameter(f"lift of the marked point vanishes at t = {t}")
    return (g, e) if with_error else g


@dataclass
class GridMeasure:
    """Cell masses of a discretised bifurcation measure.

    ``masses[j, i]`` belongs to the cell centred at
    ``(re_min + (i + 1/2) hx, im_min + (j + 1/2) hy)``.
    """

    window: Window
    resolution: tuple[int, int]
    masses: np.ndarray
    total_mass: float
    clamped_fraction: float = 0.0
    masked_cells: int = 0

    @property
    def cell_size(self) -> tuple[float, float]:
        x0, x1, y0, y1 = self.window
        nx, ny = self.resolution
        return (x1 - x0) / nx, (y1 - y0) / ny

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        return _centers(self.window, self.resolution)

    def __add__(self, other: "GridMeasure") -> "GridMeasure":
        if tuple(self.window) != tuple(other.window) or tuple(self.resolution) != tuple(other.resolution):
            raise ShapeMismatch("grids differ in window or resolution")
        neg = self.clamped_fraction * self.total_mass / max(1e-300, 1 - self.clamped_fraction) \
            + other.clamped_fraction * other.total_mass / max(1e-300, 1 - other.clamped_fraction)
        masses = self.masses + other.masses
        total = float(masses.sum())
        frac = neg / (neg + total) if neg + total > 0 else 0.0
        return GridMeasure(self.window, self.resolution, masses, total, frac,
                           self.masked_cells + other.masked_cells)

    def header(self) -> dict:
        return {"window": list(self.window), "resolution": list(self.resolution),
                "total_mass": self.total_mass, "clamped_fraction": self.clamped_fraction,
                "masked_cells": self.masked_cells}

    def to_json(self) -> str:
        return json.dumps(self.header(), sort_keys=True)

    def to_pgm(self) -> bytes:
        """16-bit binary PGM, max-normalised, top row = largest imaginary part."""
        nx, ny = self.resolution
        peak = self.masses.max(initial=0.0)
        scaled = np.zeros_like(self.masses) if peak <= 0 else self.masses / peak
        img = np.round(scaled[::-1] * 65535).astype(">u2")
        return f"P5\n{nx} {ny}\n65535\n".encode("ascii") + img.tobytes()

    def to_csv(self) -> str:
        xs, ys = self.centers()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "mass"])
        for j in range(self.resolution[1]):
            for i in range(self.resolution[0]):
                w.writerow([repr(float(xs[i])), repr(float(ys[j])), repr(float(self.masses[j, i]))])
        return buf.getvalue()


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a binary 16-bit PGM written by :meth:`GridMeasure.to_pgm`."""
    magic, dims, maxval, body = data.split(b"\n", 3)
    if magic != b"P5":
        raise ValueError("not a binary PGM")
    nx, ny = (int(v) for v in dims.split())
    return np.frombuffer(body, dtype=">u2").reshape(ny, nx)


def _centers(window: Window, resolution: tuple[int, int]):
    x0, x1, y0, y1 = window
    nx, ny = resolution
    hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
    return x0 + (np.arange(nx) + 0.5) * hx, y0 + (np.arange(ny) + 0.5) * hy


def bifurcation_grid(F: FamilySpec, a: str | MarkedPoint, window: Window = (-2.5, 1.0, -1.75, 1.75),
                     resolution: tuple[int, int] | int = 256, n_iter: int = 200,
                     workers: int = 1) -> GridMeasure:
    """Discrete ``dd^c`` of the marked point's potential over a parameter window.

    Five-point Laplacian on cell centres.  The potential is also sampled on a
    ring of ghost cells just outside the window, so edge cells see true
    neighbours instead of a reflected copy.  Masses are
    ``max(0, lap G) hx hy / (2 pi)``; the clamped fraction is the negative
    mass over the total absolute mass.

    ``workers`` splits the potential evaluation into row blocks; each cell is
    computed independently and the reduction runs once afterwards, so the
    result does not depend on the worker count.
    """
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    nx, ny = resolution
    x0, x1, y0, y1 = window
    if not (x1 > x0 and y1 > y0):
        raise ValueError("window must have positive extent")
    if nx < 16 or ny < 16:
        raise ValueError("resolution must be at least 16 x 16")
    hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
    xs = x0 + (np.arange(-1, nx + 1) + 0.5) * hx
    ys = y0 + (np.arange(-1, ny + 1) + 0.5) * hy
    T = xs[None, :] + 1j * ys[:, None]
    G = _potential_rows(F, a, T, n_iter, workers)
    bad = degenerate_mask(F, T) | ~np.isfinite(G)
    G = np.where(bad, 0.0, G)
    lap = ((G[1:-1, 2:] + G[1:-1, :-2] - 2 * G[1:-1, 1:-1]) / hx ** 2
           + (G[2:, 1:-1] + G[:-2, 1:-1] - 2 * G[1:-1, 1:-1]) / hy ** 2)
    near_bad = (bad[1:-1, 1:-1] | bad[1:-1, 2:] | bad[1:-1, :-2] | bad[2:, 1:-1] | bad[:-2, 1:-1])
    lap = np.where(near_bad, 0.0, lap)
    cell = hx * hy / (2 * math.pi)
    pos = np.maximum(lap, 0.0) * cell
    neg = float(np.maximum(-lap, 0.0).sum() * cell)
    total = float(pos.sum())
    frac = neg / (neg + total) if neg + total > 0 else 0.0
    return GridMeasure(tuple(float(v) for v in window), (nx, ny), pos, total, frac, int(near_bad.sum()))


def _potential_rows(F: FamilySpec, a, T: np.ndarray, n_iter: int, workers: int) -> np.ndarray:
    if workers <= 1 or T.shape[0] < 2 * workers:
        return green_field(F, a, T, n_iter)[0]
    from concurrent.futures import ThreadPoolExecutor

    blocks = np.array_split(np.arange(T.shape[0]), workers)
    with ThreadPoolExecutor(workers) as pool:
        parts = list(pool.map(lambda rows: green_field(F, a, T[rows], n_iter)[0], blocks))
    return np.concatenate(parts, axis=0)


def mu_bif(F: FamilySpec, critical: Sequence[str], window: Window = (-2.5, 1.0, -1.75, 1.75),
           resolution: tuple[int, int] | int = 256, n_iter: int = 200, workers: int = 1) -> GridMeasure:
    """Sum of the marked critical points' grids."""
    grids = [bifurcation_grid(F, c, window, resolution, n_iter, workers) for c in critical]
    out = grids[0]
    for g in grids[1:]:
        out = out + g
    return out


__all__ = ["GridMeasure", "bifurcation_grid", "green_field", "green_value",
           "mu_bif", "read_pgm"]
