"""Exact Novikov-homology vanishing loci for chain complexes over Laurent polynomial rings."""
from .complexes import (BasedChainComplex, PositivityVerdict, VanishingReport, betti_numbers,
                        enumerate_tau_chains, euler_characteristic, mapping_torus, validate_complex,
                        vanishes_at, vanishing_set, verify_positive_vanishing)
from .conegeometry import HalfSpace, IntegralCone, IntegralSubset, lattice_point
from .errors import (InexactDivisionError, NovikovError, ResourceError, StructuralError,
                     UndefinedError, ValidationError)
from .foxfront import TwistedPresentation, fox_derivative, knot_presentation, presentation_complex
from .grouprings import GF, QQ, ZZ, CoefficientDomain, LaurentPoly, character
from .invertibility import PolyMatrix, determinant, invertibility_cones, matrix_invertibility_cones

__version__ = "0.1.0"
