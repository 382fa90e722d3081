"""Orbit diagnostics and the rescaling experiment at the Misiurewicz parameter -2.

Run: python3 demos/diagnostics_similarity.py
"""

import math

from specrig.errors import DerivativeVanishes
from specrig.famdyn import (
    ce_exponent_estimate,
    dynamically_related_probe,
    recurrence_exponent_estimate,
    separation_statistics,
    similarity_frames,
    unicritical_family,
)
from specrig.ratmap import ratmap_new


def main():
    cheb = ratmap_new([-2, 0, 1])
    print(f"derivative growth along 0 -> -2 -> 2: {ce_exponent_estimate(cheb, 0, 2, 20):.6f} "
          f"(log 4 = {math.log(4):.6f})")
    try:
        ce_exponent_estimate(ratmap_new([-1, 0, 1]), 0, 0, 20)
    except DerivativeVanishes as exc:
        print(f"basilica: {exc}")
    for t in (-2, -1, 0.25):
        s = recurrence_exponent_estimate(ratmap_new([t, 0, 1]), 0, 200)
        print(f"recurrence exponent at t = {t}: {s}")

    z2 = ratmap_new([0, 0, 1])
    fs, avg = separation_statistics(z2, 2, 3, 10, 1e-3, bits=2048)
    print(f"\nescaping pair 2, 3: separated fraction {fs:.2f}, average -log distance {avg:.2f}")
    print("z^2, 2 and 4:", dynamically_related_probe(z2, 2, 4))

    r = similarity_frames(unicritical_family(2), "c0", -2, [4, 6, 8, 10])
    print("\nperiod  rho        spread")
    for f in r.frames:
        print(f"{f.period:6d}  {f.rho:.3e}  {f.spread:.4f}")
    print("consecutive frame distances:", ", ".join(f"{d:.2e}" for d in r.distances()))
    r0 = similarity_frames(unicritical_family(2), "c0", 0, [4, 8])
    print("at the center t = 0:", r0.skipped)


if __name__ == "__main__":
    main()
