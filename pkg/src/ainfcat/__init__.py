"""Exact computations with finite A-infinity categories over the integers."""

__version__ = "0.1.0"

from .category import (AInfCategory, AInfFunctor, Basis, ExplicitCategory, check_ainf_relations,
                       hom_cohomology)
from .linalg import CohomologyReport, FiniteComplex, complex_cohomology, smith_normal_form
from .twisted import TwCategory, TwistedComplex, cone, is_zero_object, twisted_complex

__all__ = [
    "__version__", "AInfCategory", "AInfFunctor", "Basis", "ExplicitCategory", "check_ainf_relations",
    "hom_cohomology", "CohomologyReport", "FiniteComplex", "complex_cohomology", "smith_normal_form",
    "TwCategory", "TwistedComplex", "cone", "is_zero_object", "twisted_complex",
]
