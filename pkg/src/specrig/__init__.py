"""Periodic points, multiplier spectra and parameter-space experiments for
rational maps of the Riemann sphere."""

from .cpoly import ComplexPoly, poly_roots
from .errors import (
    DegenerateMap,
    DegenerateParameter,
    NumericalError,
    SpecrigError,
    ValidationError,
)
from .moduli import (
    conjugacy_test,
    elementary_transform,
    exceptional_map,
    flexible_lattes,
    milnor_coordinates,
    semiconjugacy_search,
)
from .ratmap import INF, MobiusTransform, RationalMap, chordal, compose, critical_points, ratmap_new
from .spectrum import (
    SpectrumTable,
    compare_spectra,
    fixed_points,
    length_spectrum,
    multiplier,
    multiplier_spectrum,
    tau,
)

__version__ = "0.1.0"

__all__ = [
    "INF", "ComplexPoly", "DegenerateMap", "DegenerateParameter", "MobiusTransform", "NumericalError",
    "RationalMap", "SpecrigError", "SpectrumTable", "ValidationError", "chordal", "compare_spectra",
    "compose", "conjugacy_test", "critical_points", "elementary_transform", "exceptional_map",
    "fixed_points", "flexible_lattes", "length_spectrum", "milnor_coordinates", "multiplier",
    "multiplier_spectrum", "poly_roots", "ratmap_new", "semiconjugacy_search", "tau",
]
