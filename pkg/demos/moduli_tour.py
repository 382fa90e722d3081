"""Conjugacy classes: Milnor coordinates, elementary transformations and a
semiconjugacy between the Chebyshev and power maps.

Run: python3 demos/moduli_tour.py
"""

import numpy as np

from specrig.moduli import (
    conjugacy_test,
    elementary_transform,
    exceptional_map,
    milnor_coordinates,
    semiconjugacy_residual,
    semiconjugacy_search,
)
from specrig.ratmap import random_map, random_mobius, ratmap_conjugate, ratmap_new
from specrig.spectrum import compare_spectra, tau


def main():
    rng = np.random.default_rng(3)
    f = random_map(2, rng)
    g = ratmap_conjugate(f, random_mobius(rng))
    print("Milnor coordinates of f:        ", np.round(milnor_coordinates(f), 8))
    print("Milnor coordinates of conjugate:", np.round(milnor_coordinates(g), 8))
    e1, _, e3 = milnor_coordinates(f)
    print(f"relation e3 - (e1 - 2) = {abs(e3 - (e1 - 2)):.2e}")
    w = conjugacy_test(f, g)
    print(f"conjugacy witness residual: {w.residual:.2e}")

    # (z + 1)^3 and z^3 + 1 swap the factors of one decomposition, so they
    # share a spectrum; with a Mobius factor the swap is even a conjugacy
    h1, h2 = ratmap_new([0, 0, 0, 1]), ratmap_new([1, 1])
    a, b = elementary_transform(h1, h2)
    print(f"\n(z+1)^3 vs z^3+1: spectrum distance {compare_spectra(tau(a, 2), tau(b, 2))[0]:.2e}, "
          f"conjugate: {conjugacy_test(a, b) is not None}")

    # z^2 - 2 is a quotient of z^2 by z -> z + 1/z
    cheb, power = exceptional_map("chebyshev", 2), exceptional_map("power", 2)
    h = semiconjugacy_search(cheb, power, 2)
    print(f"\nsemiconjugacy h = {h}")
    print(f"residual of h o z^2 = (z^2 - 2) o h: {semiconjugacy_residual(cheb, power, h):.2e}")


if __name__ == "__main__":
    main()
