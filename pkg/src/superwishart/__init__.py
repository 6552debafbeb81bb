"""Supersymmetric Wishart integrals: Grassmann algebra, supermatrices,
direct Berezin integration and the closed-form right-hand sides."""

__version__ = "0.1.0"

from .ensembles import SpecError, WishartSpec, kappa
from .grassmann import GrassmannElement
from .integrator import QuadratureSpec, Superfunction, lhs_integral
from .report import VerificationReport
from .supermatrix import SuperMatrix, SuperShape, sdet, supertrace

__all__ = [
    "GrassmannElement",
    "QuadratureSpec",
    "SpecError",
    "SuperMatrix",
    "SuperShape",
    "Superfunction",
    "VerificationReport",
    "WishartSpec",
    "__version__",
    "kappa",
    "lhs_integral",
    "sdet",
    "supertrace",
]
