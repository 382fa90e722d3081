import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import escape_green, quadratic_boundary_distance
from specrig.cpoly import ComplexPoly
from specrig.errors import DegenerateParameter, ShapeMismatch
from specrig.famdyn import (
    FamilySpec,
    GridMeasure,
    bifurcation_grid,
    classify_orbit,
    degenerate_mask,
    family_eval,
    green_field,
    green_value,
    is_hyperbolic_disjoint,
    is_pcf,
    marked_orbit,
    mu_bif,
    persistent_fixed_point_family,
    read_pgm,
    unicritical_family,
)
from specrig.ratmap import INF, orbit, ratmap_new

QUAD = unicritical_family(2)
WINDOW = (-2.5, 1.0, -1.75, 1.75)


@pytest.fixture(scope="module")
def grid256():
    return bifurcation_grid(QUAD, "c0", WINDOW, 256)


# -- families and orbits -----------------------------------------------------

def test_family_eval_examples():
    assert np.allclose(family_eval(QUAD, 0).num.coeffs, [0, 0, 1])
    f = family_eval(QUAD, -1)
    assert f(0.5) == pytest.approx(-0.75)


def test_family_eval_degree_drop():
    # (t z^2 + 1) / z loses its quadratic term at t = 0
    F = FamilySpec(2, (ComplexPoly([1]), ComplexPoly(), ComplexPoly([0, 1])),
                   (ComplexPoly(), ComplexPoly([1])))
    with pytest.raises(DegenerateParameter):
        family_eval(F, 0)
    assert family_eval(F, 2).degree == 2
    mask = degenerate_mask(F, np.array([0, 1, 2j]))
    assert mask.tolist() == [True, False, False]


def test_family_json_round_trip():
    F = persistent_fixed_point_family()
    G = FamilySpec.from_json(F.to_json())
    assert G.to_json() == F.to_json()


def test_marked_orbit_examples():
    assert marked_orbit(QUAD, "c0", -1, 4) == [0, -1, 0, -1, 0]
    assert marked_orbit(QUAD, "c0", -2, 4) == [0, -2, 2, 2, 2]
    # direct complex arithmetic: 0 -> i -> i - 1 -> -i -> i - 1 -> -i
    got = marked_orbit(QUAD, "c0", 1j, 5)
    assert np.allclose(got, [0, 1j, -1 + 1j, -1j, -1 + 1j, -1j], atol=1e-15)


def test_marked_orbit_infinity():
    assert marked_orbit(QUAD, "inf", 0.3, 3) == [INF] * 4


def test_classify_examples():
    c = classify_orbit([0, -1, 0, -1, 0])
    assert (c.status, c.period, c.preperiod) == ("periodic", 2, 0)
    c = classify_orbit([0, -2, 2, 2, 2])
    assert (c.status, c.period, c.preperiod) == ("periodic", 1, 2)
    # plain escape-time oracle: 0.26 leaves the disk of radius 2
    z, k = 0j, 0
    while abs(z) <= 2:
        z, k = z * z + 0.26, k + 1
    assert k < 200
    c = classify_orbit(orbit(family_eval(QUAD, 0.26), 0, 200))
    assert c.status == "escaping"


def test_classify_attracting_is_undecided():
    # 0 converges to the attracting fixed point of z^2 + 0.1 without landing on it
    c = classify_orbit(orbit(family_eval(QUAD, 0.1), 0, 200))
    assert c.status == "undecided"


@given(st.integers(0, 4), st.integers(1, 4))
def test_classify_minimal_pair(m, p):
    # distinct points on a cycle of length p after a tail of length m
    tail = [10.0 + k for k in range(m)]
    cyc = [np.exp(2j * np.pi * k / p) for k in range(p)]
    orb = tail + cyc * 4
    c = classify_orbit(orb)
    assert (c.preperiod, c.period) == (m, p)


def test_classify_json_round_trip():
    c = classify_orbit([0, -2, 2, 2])
    assert type(c).from_json(c.to_json()) == c


def test_pcf_examples():
    ok, cls = is_pcf(ratmap_new([-1, 0, 1]))
    assert ok and sorted((c.preperiod, c.period) for c in cls) == [(0, 1), (0, 2)]
    ok, cls = is_pcf(ratmap_new([-2, 0, 1]))
    assert ok and sorted((c.preperiod, c.period) for c in cls) == [(0, 1), (2, 1)]
    ok, cls = is_pcf(ratmap_new([0.26, 0, 1]))
    assert not ok and "escaping" in [c.status for c in cls]


def test_pcf_never_true_on_undecided():
    ok, cls = is_pcf(ratmap_new([0.1, 0, 1]))
    assert not ok and "undecided" in [c.status for c in cls]


def test_hyperbolic_disjoint_examples():
    assert is_hyperbolic_disjoint(ratmap_new([0, 0, 1]))
    assert is_hyperbolic_disjoint(ratmap_new([-1, 0, 1]))
    assert not is_hyperbolic_disjoint(ratmap_new([-2, 0, 1]))
    # z^3 has double critical points
    assert not is_hyperbolic_disjoint(ratmap_new([0, 0, 0, 1]))


# -- potentials ----------------------------------------------------------------

def test_green_examples():
    assert green_value(QUAD, "c0", 0) == 0
    assert green_value(QUAD, "c0", -1) == 0
    g, err = green_value(QUAD, "c0", 100, with_error=True)
    assert abs(g - 0.5 * math.log(100)) < 0.05
    assert err < 1e-12
    # independent escape-rate oracle, far out where the asymptotic is sharp
    assert green_value(QUAD, "c0", 1e4) == pytest.approx(escape_green(1e4), abs=1e-10)
    assert abs(green_value(QUAD, "c0", 1e4) - 0.5 * math.log(1e4)) < 1e-4


def test_green_degenerate_parameter():
    F = FamilySpec(2, (ComplexPoly([1]), ComplexPoly(), ComplexPoly([0, 1])),
                   (ComplexPoly(), ComplexPoly([1])))
    with pytest.raises(DegenerateParameter):
        green_value(F, QUAD.marked["c0"], 0)


def test_green_matches_oracle_on_samples():
    rng = np.random.default_rng(3)
    t = rng.uniform(-2.5, 1.0, 100) + 1j * rng.uniform(-1.75, 1.75, 100)
    G, _ = green_field(QUAD, "c0", t)
    want = np.array([escape_green(c, 200) for c in t])
    assert np.allclose(G, want, atol=1e-9)


def test_green_functional_equation():
    # the critical value t is the image of 0, so its potential is d times larger
    rng = np.random.default_rng(7)
    r = rng.uniform(2.1, 6.0, 100)
    t = r * np.exp(2j * np.pi * rng.uniform(size=100))
    g0, _ = green_field(QUAD, "c0", t)
    g1, _ = green_field(QUAD, "cv", t)
    assert np.all(g0 > 0)
    assert np.max(np.abs(g1 - 2 * g0)) < 1e-6


def test_green_zero_on_pcf_centers():
    from specrig.famdyn import pcf_parameters_unicritical

    for n in range(1, 5):
        for t in pcf_parameters_unicritical(2, n):
            assert abs(green_value(QUAD, "c0", t)) < 1e-12


@given(st.floats(-2.0, 0.25))
def test_green_zero_on_real_bounded(t):
    # [-2, 1/4] is the real slice of the connectedness locus
    assert abs(green_value(QUAD, "c0", t)) < 1e-12


@given(st.floats(2.01, 50.0), st.floats(0, 2 * math.pi))
def test_green_positive_outside(r, a):
    assert green_value(QUAD, "c0", r * complex(math.cos(a), math.sin(a))) > 0


# -- grids ---------------------------------------------------------------------

def test_grid_mass_on_boundary(grid256):
    dist, _ = quadratic_boundary_distance(WINDOW, (256, 256))
    far = grid256.masses[dist > 0.2].sum()
    assert far < 0.05 * grid256.total_mass
    assert np.all(grid256.masses >= 0)
    assert grid256.total_mass == pytest.approx(grid256.masses.sum(), rel=1e-12)


def test_grid_critical_value_doubles_mass(grid256):
    gv = bifurcation_grid(QUAD, "cv", WINDOW, 256)
    assert gv.total_mass / grid256.total_mass == pytest.approx(2.0, rel=0.1)


def test_grid_passive_point_has_no_mass():
    P = persistent_fixed_point_family()
    passive = bifurcation_grid(P, "fixed", WINDOW, 128)
    active = bifurcation_grid(P, "c0", WINDOW, 128)
    assert passive.total_mass < 1e-3 * active.total_mass


def test_grid_workers_identical():
    a = bifurcation_grid(QUAD, "c0", WINDOW, 64, workers=1)
    b = bifurcation_grid(QUAD, "c0", WINDOW, 64, workers=3)
    assert np.array_equal(a.masses, b.masses) and a.total_mass == b.total_mass


def test_grid_validation():
    with pytest.raises(ValueError):
        bifurcation_grid(QUAD, "c0", WINDOW, 8)
    with pytest.raises(ValueError):
        bifurcation_grid(QUAD, "c0", (1, 0, 0, 1), 32)


def test_grid_sum_and_shapes():
    a = bifurcation_grid(QUAD, "c0", WINDOW, 32)
    s = mu_bif(QUAD, ["c0", "c0"], WINDOW, 32)
    assert np.allclose(s.masses, 2 * a.masses)
    with pytest.raises(ShapeMismatch):
        a + bifurcation_grid(QUAD, "c0", WINDOW, 48)


def test_grid_serialisation():
    g = bifurcation_grid(QUAD, "c0", WINDOW, 32)
    img = read_pgm(g.to_pgm())
    assert img.shape == (32, 32) and img.max() == 65535
    # top row of the image is the largest imaginary part
    assert np.array_equal(img[::-1], np.round(g.masses / g.masses.max() * 65535))
    rows = g.to_csv().strip().split("\n")
    assert rows[0] == "x,y,mass" and len(rows) == 32 * 32 + 1
    assert isinstance(g, GridMeasure) and "total_mass" in g.to_json()
