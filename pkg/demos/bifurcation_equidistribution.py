"""Bifurcation measure of z^2 + t and the distribution of its centers.

Writes mandelbrot_mu.pgm next to this script, then compares how closely
the centers of period 4, 6, 8 and 10 follow the measure.

Run: python3 demos/bifurcation_equidistribution.py
"""

from pathlib import Path

from specrig.famdyn import (
    bifurcation_grid,
    equidistribution_discrepancy,
    pcf_parameters_unicritical,
    persistent_fixed_point_family,
    unicritical_family,
)

WINDOW = (-2.5, 1.0, -1.75, 1.75)


def main():
    F = unicritical_family(2)
    mu = bifurcation_grid(F, "c0", WINDOW, 256, workers=4)
    out = Path(__file__).with_name("mandelbrot_mu.pgm")
    out.write_bytes(mu.to_pgm())
    print(f"total mass {mu.total_mass:.4f}, clamped fraction {mu.clamped_fraction:.2%}, image {out.name}")

    # a marked point that stays fixed for every parameter is passive: no mass
    P = persistent_fixed_point_family()
    passive = bifurcation_grid(P, "fixed", WINDOW, 128).total_mass
    active = bifurcation_grid(P, "c0", WINDOW, 128).total_mass
    print(f"passive / active mass: {passive / active:.2e}")

    print("\nperiod  centers  discrepancy")
    for n in (4, 6, 8, 10):
        pts = pcf_parameters_unicritical(2, n)
        print(f"{n:6d}  {len(pts):7d}  {equidistribution_discrepancy(pts, mu, 8):.4f}")


if __name__ == "__main__":
    main()
