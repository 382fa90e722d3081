"""Parametric families of rational maps and their bifurcation experiments."""

from .diagnostics import (
    Relation,
    ce_exponent_estimate,
    dynamically_related_probe,
    recurrence_exponent_estimate,
    separation_statistics,
)
from .family import (
    INFINITY_POINT,
    FamilySpec,
    MarkedPoint,
    constant_point,
    degenerate_mask,
    family_eval,
    marked_orbit,
    persistent_fixed_point_family,
    unicritical_family,
)
from .green import GridMeasure, bifurcation_grid, green_field, green_value, mu_bif, read_pgm
from .orbits import OrbitClassification, classify_orbit, is_hyperbolic_disjoint, is_pcf
from .pcf import equidistribution_discrepancy, pcf_parameters_unicritical, sample_from_grid
from .renorm import Frame, SimilarityResult, orbit_derivative, similarity_frames

__all__ = [
    "FamilySpec", "Frame", "GridMeasure", "INFINITY_POINT", "MarkedPoint", "OrbitClassification",
    "Relation", "SimilarityResult", "bifurcation_grid", "ce_exponent_estimate", "classify_orbit",
    "constant_point", "degenerate_mask", "dynamically_related_probe", "equidistribution_discrepancy",
    "family_eval", "green_field", "green_value", "is_hyperbolic_disjoint", "is_pcf", "marked_orbit",
    "mu_bif", "orbit_derivative", "pcf_parameters_unicritical", "persistent_fixed_point_family", "read_pgm",
    "recurrence_exponent_estimate", "sample_from_grid", "separation_statistics", "similarity_frames",
    "unicritical_family",
]
