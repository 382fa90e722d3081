"""Periodic points and multiplier spectra of a few rational maps.

Run: python3 demos/spectra_tour.py
"""

import numpy as np

from specrig.moduli import flexible_lattes
from specrig.ratmap import random_map, random_mobius, ratmap_conjugate, ratmap_new
from specrig.spectrum import compare_spectra, fixed_points, index_sum_check, multiplier_spectrum, tau


def show(label, f, n):
    S = multiplier_spectrum(f, n)
    print(f"{label:>24}  S_{n}: " + " ".join(f"{z.real:+.4f}{z.imag:+.4f}i" for z in S))


def main():
    # z^2 has multipliers 0 at 0 and infinity, and d^n at every other fixed point of f^n
    z2 = ratmap_new([0, 0, 1])
    for n in (1, 2, 3):
        show("z^2", z2, n)

    # the basilica z^2 - 1: a superattracting 2-cycle through the critical point
    basilica = ratmap_new([-1, 0, 1])
    fp = fixed_points(basilica, 2)
    print("\nfixed points of the second iterate of z^2 - 1:")
    for x, m in fp.points:
        print(f"  {x}  (multiplicity {m})")
    print(f"holomorphic index sum: {index_sum_check(basilica):.12f}")

    # spectra are conjugacy invariants: a random map against a random conjugate
    rng = np.random.default_rng(1)
    f = random_map(2, rng)
    g = ratmap_conjugate(f, random_mobius(rng))
    dist, equal = compare_spectra(tau(f, 3), tau(g, 3))
    print(f"\nrandom map vs conjugate: equal={equal} distance={dist:.2e}")

    # flexible Lattes maps move with the curve but keep one spectrum
    tabs = {p: tau(flexible_lattes(p), 2) for p in [(1, 1), (2, 3), (-1, 1)]}
    base = tabs[(1, 1)]
    for p, t in tabs.items():
        print(f"Lattes {p}: distance to (1, 1) = {compare_spectra(base, t)[0]:.2e}")
    show("Lattes (1, 1)", flexible_lattes((1, 1)), 1)


if __name__ == "__main__":
    main()
