"""Dense complex polynomials and simultaneous root finding.

Coefficients are stored in ascending degree order.  The root finder is an
Aberth-Ehrlich iteration started on a perturbed circle, followed by a Newton
polish and a union-find clustering step so that multiple roots come back as a
single value with a multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import NonConvergence, NonFinite

ZERO_THRESHOLD = 1e-12
_EPS = np.finfo(float).eps
# low-order coefficients this far below the largest one cannot be resolved:
# |p| near the roots they create is subnormal, and dropping them moves those
# roots by less than about 1e-140
_UNDERFLOW = 1e-280


class ComplexPoly:
    """Immutable dense polynomial with complex coefficients.

    ``coeffs[k]`` is the coefficient of ``z**k``.  Trailing coefficients whose
    modulus is at most ``1e-12`` times the largest coefficient modulus are
    trimmed on construction (``tol`` overrides the ratio), so
    ``degree == len(coeffs) - 1``.  The zero
    polynomial has no coefficients and degree ``-1``.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray = (), tol: float = ZERO_THRESHOLD):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=np.complex128).ravel()
        if c.size and not np.all(np.isfinite(c)):
            raise NonFinite("polynomial coefficients must be finite")
        if c.size:
            mags = np.abs(c)
            cutoff = tol * mags.max()
            nz = np.nonzero(mags > cutoff)[0]
            c = c[: nz[-1] + 1] if nz.size else c[:0]
        c = c.copy()
        c.setflags(write=False)
        self._c = c

    # -- construction helpers -------------------------------------------------
    @classmethod
    def monomial(cls, k: int, coeff: complex = 1.0) -> "ComplexPoly":
        c = np.zeros(k + 1, dtype=np.complex128)
        c[k] = coeff
        return cls(c)

    @classmethod
    def constant(cls, c: complex) -> "ComplexPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "ComplexPoly":
        c = np.array([lead], dtype=np.complex128)
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(c)

    # -- basic properties -----------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return self._c.size - 1

    @property
    def is_zero(self) -> bool:
        return self._c.size == 0

    @property
    def lead(self) -> complex:
        return complex(self._c[-1]) if self._c.size else 0j

    def padded(self, length: int) -> np.ndarray:
        """Coefficients zero-padded (ascending) to ``length`` entries."""
        out = np.zeros(length, dtype=np.complex128)
        out[: self._c.size] = self._c
        return out

    def __len__(self) -> int:
        return self._c.size

    def __repr__(self) -> str:
        return f"ComplexPoly({self._c.tolist()!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self) -> int:
        return hash(self._c.tobytes())

    def allclose(self, other: "ComplexPoly", rtol: float = 1e-10, atol: float = 0.0) -> bool:
        n = max(len(self), len(other))
        a, b = self.padded(n), other.padded(n)
        scale = max(np.abs(a).max(initial=0.0), np.abs(b).max(initial=0.0))
        return bool(np.all(np.abs(a - b) <= atol + rtol * scale))

    # -- arithmetic -------------------------------------------------------------
    def __call__(self, z):
        """Horner evaluation; works on scalars and numpy arrays."""
        z = np.asarray(z, dtype=np.complex128)
        acc = np.zeros_like(z)
        for a in self._c[::-1]:
            acc = acc * z + a
        return complex(acc) if acc.ndim == 0 else acc

    def _coerce(self, other) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            return other
        return ComplexPoly([complex(other)])

    def __add__(self, other) -> "ComplexPoly":
        other = self._coerce(other)
        n = max(len(self), len(other))
        return ComplexPoly(self.padded(n) + other.padded(n))

    __radd__ = __add__

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(-self._c)

    def __sub__(self, other) -> "ComplexPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ComplexPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "ComplexPoly":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return ComplexPoly()
        out = np.convolve(self._c, other._c)
        if not np.all(np.isfinite(out)):
            raise NonFinite("coefficient overflow in polynomial product")
        return ComplexPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ComplexPoly":
        out = ComplexPoly([1.0])
        for _ in range(k):
            out = out * self
        return out

    def scale(self, s: complex) -> "ComplexPoly":
        return ComplexPoly(self._c * s)

    def derivative(self) -> "ComplexPoly":
        if self.degree <= 0:
            return ComplexPoly()
        return ComplexPoly(self._c[1:] * np.arange(1, self._c.size))

    def compose(self, q: "ComplexPoly") -> "ComplexPoly":
        return poly_compose(self, q)

    def reversed(self, n: int) -> "ComplexPoly":
        """``z**n * p(1/z)`` for ``n >= degree``."""
        return ComplexPoly(self.padded(n + 1)[::-1])

    # -- serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self._c]}

    @classmethod
    def from_json(cls, obj: dict) -> "ComplexPoly":
        return cls([complex(re, im) for re, im in obj["coeffs"]])


def poly_compose(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    """Return ``r`` with ``r(z) = p(q(z))`` (Horner in the ring of polynomials)."""
    if p.is_zero:
        return ComplexPoly()
    acc = np.array([p.coeffs[-1]], dtype=np.complex128)
    qc = q.coeffs if not q.is_zero else np.zeros(1, dtype=np.complex128)
    for a in p.coeffs[-2::-1]:
        acc = np.convolve(acc, qc)
        acc[0] += a
    if not np.all(np.isfinite(acc)):
        raise NonFinite("coefficient overflow in composition")
    return ComplexPoly(acc)


def sylvester_matrix(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two descending coefficient vectors, p-rows first."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    S = np.zeros((size, size), dtype=np.complex128)
    for i in range(n):
        S[i, i:i + m + 1] = p
    for i in range(m):
        S[n + i, i:i + n + 1] = q
    return S


def poly_resultant(p: ComplexPoly, q: ComplexPoly) -> complex:
    """Resultant as the Sylvester determinant with the rows of ``p`` first.

    With this convention ``Res(z, z - 3) = -3`` and
    ``Res(p, q) = lead(p)**deg(q) * prod(q(root) for root of p)``.
    """
    if p.is_zero or q.is_zero:
        return 0j
    if p.degree == 0 and q.degree == 0:
        return 1.0 + 0j
    S = sylvester_matrix(p.coeffs[::-1], q.coeffs[::-1])
    return complex(np.linalg.det(S))


def homogeneous_resultant(num: np.ndarray, den: np.ndarray) -> complex:
    """Resultant of two binary forms of the same degree, scaled to [0, 1] in modulus.

    ``num`` and ``den`` are ascending coefficient vectors of equal length
    ``d + 1`` (leading entries may vanish).  Each vector is normalised to unit
    2-norm first, so by Hadamard's bound the modulus never exceeds 1; zero
    means a common root on the projective line.
    """
    num = np.asarray(num, dtype=np.complex128)
    den = np.asarray(den, dtype=np.complex128)
    if len(num) == 1:
        return 1.0 + 0j
    nn, nd = np.linalg.norm(num), np.linalg.norm(den)
    if nn == 0 or nd == 0:
        return 0j
    S = sylvester_matrix(num[::-1] / nn, den[::-1] / nd)
    sign, logdet = np.linalg.slogdet(S)
    if sign == 0:
        return 0j
    return complex(sign * np.exp(logdet))


@dataclass(frozen=True)
class RootCluster:
    value: complex
    multiplicity: int
    residual: float


# ---------------------------------------------------------------------------
# Aberth iteration
# ---------------------------------------------------------------------------

def _horner_logder(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p'(z)/p(z) for ascending coefficients, evaluated in the stable chart."""
    n = c.size - 1
    out = np.empty_like(z)
    inside = np.abs(z) <= 1.0
    if np.any(inside):
        zi = z[inside]
        p = np.zeros_like(zi)
        dp = np.zeros_like(zi)
        for a in c[::-1]:
            dp = dp * zi + p
            p = p * zi + a
        with np.errstate(divide="ignore", invalid="ignore"):
            out[inside] = dp / p
    if np.any(~inside):
        zo = z[~inside]
        w = 1.0 / zo
        rev = c  # coefficients of the reversed polynomial, read ascending in w from the top
        p = np.zeros_like(w)
        dp = np.zeros_like(w)
        for a in rev:
            dp = dp * w + p
            p = p * w + a
        # p(z) = z^n r(w), r(w) = sum c_k w^(n-k)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[~inside] = n * w - w * w * dp / p
    return out


def _backward_error(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """|p(z)| / sum |c_k| |z|^k, computed without overflow."""
    n = c.size - 1
    ac = np.abs(c)
    out = np.empty(z.shape, dtype=float)
    inside = np.abs(z) <= 1.0
    if np.any(inside):
        zi = z[inside]
        p = np.zeros_like(zi)
        s = np.zeros(zi.shape)
        for a, b in zip(c[::-1], ac[::-1]):
            p = p * zi + a
            s = s * np.abs(zi) + b
        with np.errstate(invalid="ignore"):
            out[inside] = np.where(s > 0, np.abs(p) / np.where(s > 0, s, 1.0), 0.0)
    if np.any(~inside):
        w = 1.0 / z[~inside]
        p = np.zeros_like(w)
        s = np.zeros(w.shape)
        for a, b in zip(c, ac):
            p = p * w + a
            s = s * np.abs(w) + b
        out[~inside] = np.abs(p) / s
    return out


def initial_circle(n: int, radius: float, seed: int = 0, center: complex = 0j) -> np.ndarray:
    """``n`` starting points on a circle with small seeded angular jitter."""
    rng = np.random.default_rng(seed)
    k = np.arange(n)
    theta = 2 * np.pi * (k + 0.25 + 0.1 * rng.random(n)) / n + 0.4
    return center + radius * np.exp(1j * theta)


def _root_radius(c: np.ndarray) -> float:
    """Geometric-mean modulus |c_0/c_n|^(1/n), clamped to a Fujiwara-type bound."""
    n = c.size - 1
    ac = np.abs(c)
    with np.errstate(divide="ignore"):
        bound = 2 * max((ac[n - k] / ac[n]) ** (1.0 / k) for k in range(1, n + 1))
    if ac[0] == 0:
        return min(1.0, bound) if bound > 0 else 1.0
    gm = (ac[0] / ac[n]) ** (1.0 / n)
    return float(min(max(gm, 1e-8), bound))


def aberth(logder: Callable[[np.ndarray], np.ndarray], z0: np.ndarray,
           max_iter: int = 500) -> tuple[np.ndarray, bool, int]:
    """Run the Aberth-Ehrlich iteration.

    ``logder(z)`` must return ``p'(z) / p(z)`` elementwise (``inf`` on exact
    roots).  Returns the final approximations, a converged flag and the
    iteration count.
    """
    z = np.array(z0, dtype=np.complex128)
    n = z.size
    active = np.ones(n, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        idx = np.nonzero(active)[0]
        za = z[idx]
        q = logder(za)
        diff = za[:, None] - z[None, :]
        diff[np.arange(idx.size), idx] = 1.0
        inv = 1.0 / diff
        inv[np.arange(idx.size), idx] = 0.0
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = 1.0 / (q - s)
        w[~np.isfinite(w)] = 0.0
        z[idx] = za - w
        small = np.abs(w) <= 4 * _EPS * np.maximum(np.abs(z[idx]), 1e-300)
        active[idx[small]] = False
        if not active.any():
            return z, True, it
    return z, False, it


def _aberth_mp(c: np.ndarray, bits: int, seed: int, max_iter: int):
    import mpmath as mp

    n = c.size - 1
    with mp.workprec(bits):
        cc = [mp.mpc(complex(a)) for a in c]
        dc = [k * cc[k] for k in range(1, n + 1)]

        def ev(coeffs, x):
            acc = mp.mpc(0)
            for a in reversed(coeffs):
                acc = acc * x + a
            return acc

        z = [mp.mpc(complex(v)) for v in initial_circle(n, _root_radius(c), seed)]
        tol = mp.mpf(2) ** (-bits + 4)
        done = [False] * n
        for _ in range(max_iter):
            for i in range(n):
                if done[i]:
                    continue
                p = ev(cc, z[i])
                if p == 0:
                    done[i] = True
                    continue
                ratio = p / ev(dc, z[i])
                s = mp.fsum(1 / (z[i] - z[j]) for j in range(n) if j != i)
                w = ratio / (1 - ratio * s)
                z[i] -= w
                if abs(w) <= tol * max(abs(z[i]), mp.mpf(1e-300)):
                    done[i] = True
            if all(done):
                return np.array([complex(v) for v in z]), True
        return np.array([complex(v) for v in z]), False


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def cluster_roots(z: np.ndarray, steps: np.ndarray, radius: float | None = None,
                  links: Sequence[tuple[int, int]] = ()) -> list[list[int]]:
    """Group raw roots into clusters (lists of indices).

    Two roots merge when their distance is below the clustering radius or
    their local inclusion disks overlap.  The disk of a root whose current
    cluster has ``m`` members has radius ``2 max(m, 2) * step``: near an
    isolated ``m``-fold root the raw roots sit on a circle of radius about
    ``m |p/p'|``, so neighbours are at most ``2 pi |p/p'|`` apart and the
    floor of 2 lets the very first pass join them.  Disks are regrown until
    the partition stops changing.  The default radius is
    ``max(1e-6, 1e-4 * rms pairwise spacing)``.  ``links`` are index pairs
    known to belong together.
    """
    n = z.size
    if n == 0:
        return []
    dist = np.abs(z[:, None] - z[None, :])
    if radius is None:
        rms = float(np.sqrt((dist ** 2).sum() / (n * (n - 1)))) if n > 1 else 0.0
        radius = max(1e-6, 1e-4 * rms)
    mult = np.ones(n)
    groups: list[list[int]] = []
    for _ in range(n):
        incl = 2.0 * np.maximum(mult, 2.0) * steps
        uf = _UnionFind(n)
        reach = np.maximum(radius, incl[:, None] + incl[None, :])
        ii, jj = np.nonzero(np.triu(dist <= reach, k=1))
        for i, j in list(zip(ii, jj)) + list(links):
            uf.union(int(i), int(j))
        by_root: dict[int, list[int]] = {}
        for i in range(n):
            by_root.setdefault(uf.find(i), []).append(i)
        new_groups = [by_root[k] for k in sorted(by_root)]
        if new_groups == groups:
            break
        groups = new_groups
        for g in groups:
            mult[g] = len(g)
    return groups


def poly_roots(p: ComplexPoly, tol: float = 1e-10, *, seed: int = 0, bits: int | None = None,
               max_iter: int = 1000, cluster_radius: float | None = None) -> list[RootCluster]:
    """All roots of ``p`` with multiplicity.

    ``tol`` bounds the normwise backward error ``|p(z)| / sum |c_k||z|^k`` of
    every raw root (coefficients below ``1e-280`` times the largest count as
    zero); exceeding it after ``max_iter`` sweeps raises
    :class:`NonConvergence`.  With ``bits`` set, the iteration runs in mpmath
    at that working precision and only the clustering is done in doubles.
    """
    if p.degree < 1:
        raise ValueError("poly_roots needs a polynomial of degree >= 1")
    c = p.coeffs.copy()
    n = p.degree
    c[np.abs(c) < _UNDERFLOW * np.abs(c).max()] = 0
    # roots at the origin (exact, or below the underflow level) are peeled off first
    k0 = int(np.argmax(np.abs(c) > 0))
    core = c[k0:]
    raw = [np.zeros(k0, dtype=np.complex128)]
    if core.size > 1:
        if core.size == 2:
            z = np.array([-core[0] / core[1]])
        elif bits is not None:
            z, ok = _aberth_mp(core, bits, seed, max_iter)
        else:
            z, ok, _ = aberth(lambda x: _horner_logder(core, x),
                              initial_circle(core.size - 1, _root_radius(core), seed), max_iter)
            z = _newton_polish(core, z)
        raw.append(z)
    z = np.concatenate(raw)
    berr = _backward_error(c, z) if z.size else np.zeros(0)
    if berr.size and berr.max() > tol:
        raise NonConvergence(f"root finder stalled: backward error {berr.max():.3e} > {tol:.1e}")
    return _make_clusters(z, newton_steps(c, z), p, cluster_radius)


def _eval_log(c: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """log|p(z)| and log(sum |c_k||z|^k), both evaluated in the stable chart."""
    n = c.size - 1
    ac = np.abs(c)
    az = np.abs(z)
    logp = np.empty(z.shape)
    logs = np.empty(z.shape)
    inside = az <= 1.0
    with np.errstate(divide="ignore"):
        if np.any(inside):
            zi = z[inside]
            p = np.zeros_like(zi)
            s = np.zeros(zi.shape)
            for a, b in zip(c[::-1], ac[::-1]):
                p = p * zi + a
                s = s * np.abs(zi) + b
            logp[inside] = np.log(np.abs(p))
            logs[inside] = np.log(s)
        if np.any(~inside):
            w = 1.0 / z[~inside]
            p = np.zeros_like(w)
            s = np.zeros(w.shape)
            for a, b in zip(c, ac):
                p = p * w + a
                s = s * np.abs(w) + b
            shift = n * np.log(az[~inside])
            logp[~inside] = np.log(np.abs(p)) + shift
            logs[~inside] = np.log(s) + shift
    return logp, logs


def newton_steps(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Newton step lengths ``|p(z)| / |p'(z)|`` with ``|p|`` floored.

    The floor is the rounding level ``eps * sum |c_k||z|^k`` of the
    evaluation, so approximations of a numerically multiple root never get an
    artificially small step.
    """
    n = c.size - 1
    if z.size == 0:
        return np.zeros(0)
    if n == 0:
        return np.zeros(z.shape)
    logp, logs = _eval_log(c, z)
    logp = np.maximum(logp, np.log(_EPS) + logs)
    dc = c[1:] * np.arange(1, n + 1)
    logdp, _ = _eval_log(dc, z)
    with np.errstate(invalid="ignore"):
        lr = logp - logdp
    return np.where(np.isnan(lr), 0.0, np.exp(np.minimum(lr, 700.0)))


def _make_clusters(z, steps, p, radius) -> list[RootCluster]:
    out = []
    for g in cluster_roots(z, steps, radius):
        members = z[g]
        vals = np.abs(np.atleast_1d(p(members)))
        value = complex(members.mean())
        if len(g) > 1:
            spread = float(np.abs(members - value).max())
            value = _refine_multiple(p, value, len(g), spread)
        out.append(RootCluster(value, len(g), float(vals.max())))
    return out


def _refine_multiple(p: ComplexPoly, z: complex, m: int, spread: float) -> complex:
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    q = p
    for _ in range(m - 1):
        q = q.derivative()
    dq = q.derivative()
    if dq.is_zero:
        return z
    z0 = z
    for _ in range(8):
        d = dq(z)
        if d == 0:
            break
        step = q(z) / d
        z = z - step
        if abs(step) <= 4 * _EPS * max(abs(z), 1.0):
            break
    return z if abs(z - z0) <= 2 * spread else z0


def _newton_polish(c: np.ndarray, z: np.ndarray, steps: int = 2) -> np.ndarray:
    z = z.copy()
    for _ in range(steps):
        q = _horner_logder(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = 1.0 / q
        ok = np.isfinite(step)
        trial = z.copy()
        trial[ok] -= step[ok]
        better = _backward_error(c, trial) < _backward_error(c, z)
        z[better] = trial[better]
    return z


def implicit_roots(logder: Callable[[np.ndarray], np.ndarray], degree: int, radius: float = 1.0,
                   *, seed: int = 0, max_iter: int = 2000, center: complex = 0j,
                   cluster_radius: float = 1e-12, z0: np.ndarray | None = None,
                   step_tol: float = 1e-8, noise_merge: bool = False) -> list[RootCluster]:
    """Roots of a polynomial known only through its logarithmic derivative.

    Used when the coefficient form is badly conditioned but ``p'/p`` can be
    evaluated accurately pointwise (critical-orbit polynomials, fixed points
    of iterates).  ``z0`` warm-starts the iteration; otherwise it starts on
    the circle of the given radius.  The residual field of each cluster holds
    the largest Newton step ``|p/p'|`` among its raw roots.  ``noise_merge``
    also joins clusters whose spread matches rounding of one multiple root
    (see :func:`_noise_merge`); leave it off when distinct roots may be close.
    """
    if z0 is None:
        z0 = initial_circle(degree, radius, seed, center)
    else:
        z0 = _separate(np.asarray(z0, dtype=np.complex128), seed)
    z, ok, _ = aberth(logder, z0, max_iter)

    def steps_at(x):
        q = logder(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(np.isfinite(q) & (q != 0), 1.0 / q, 0.0)

    for _ in range(2):
        st = steps_at(z)
        z = z - np.where(np.abs(st) < 1e-3 * np.maximum(1.0, np.abs(z)), st, 0.0)
    newton = np.abs(steps_at(z))
    out = []
    groups = cluster_roots(z, newton, cluster_radius)
    if noise_merge:
        groups = _noise_merge(z, groups)
    for g in groups:
        if len(g) == 1 and newton[g[0]] > step_tol * max(1.0, abs(z[g[0]])):
            raise NonConvergence(f"root finder stalled (Newton step {newton[g[0]]:.2e} at {z[g[0]]:.6g})")
        out.append(RootCluster(complex(z[g].mean()), len(g), float(newton[g].max())))
    return out


def _noise_merge(z: np.ndarray, groups: list[list[int]], factor: float = 4.0) -> list[list[int]]:
    """Merge clusters whose spread is what rounding does to one multiple root.

    In double precision the raw roots of an ``m``-fold root scatter over a
    disk of radius about ``eps**(1/m)``; every point in it looks like an exact
    root, so Newton steps cannot join them.  Clusters of combined size ``m``
    whose centroids are closer than ``factor * eps**(1/m) * max(1, |c|)`` are
    merged, closest pair first.
    """
    groups = [list(g) for g in groups]
    while len(groups) > 1:
        cent = np.array([z[g].mean() for g in groups])
        size = np.array([len(g) for g in groups])
        dist = np.abs(cent[:, None] - cent[None, :])
        m = size[:, None] + size[None, :]
        lim = factor * _EPS ** (1.0 / m) * np.maximum(1.0, np.abs(cent))[:, None]
        ok = np.triu(dist < lim, k=1)
        if not ok.any():
            break
        i, j = np.unravel_index(np.argmin(np.where(ok, dist / lim, np.inf)), dist.shape)
        groups[i] = sorted(groups[i] + groups[j])
        del groups[j]
    return sorted(groups)


def _separate(z: np.ndarray, seed: int) -> np.ndarray:
    """Nudge starting values that coincide (Aberth needs distinct points)."""
    z = z.copy()
    rng = np.random.default_rng(seed)
    for _ in range(8):
        diff = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(diff, np.inf)
        bad = (diff <= 1e-12 * np.maximum(1.0, np.abs(z))[:, None]).any(axis=1)
        if not bad.any():
            break
        scale = 1e-7 * np.maximum(1.0, np.abs(z[bad]))
        z[bad] += scale * np.exp(2j * np.pi * rng.random(int(bad.sum())))
    return z


def raw_roots(p: ComplexPoly, *, seed: int = 0, max_iter: int = 1000) -> np.ndarray:
    """Unclustered Aberth approximations of all roots (used as warm starts)."""
    c = p.coeffs
    k0 = int(np.argmax(np.abs(c) > 0))
    core = c[k0:]
    z = np.zeros(k0, dtype=np.complex128)
    if core.size == 2:
        z = np.append(z, -core[0] / core[1])
    elif core.size > 2:
        r, _, _ = aberth(lambda x: _horner_logder(core, x),
                         initial_circle(core.size - 1, _root_radius(core), seed), max_iter)
        z = np.append(z, _newton_polish(core, r))
    return z
