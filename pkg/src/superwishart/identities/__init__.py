"""Closed-form sides of the integral identities and the checks that compare them."""

from .constants import constant_C, constant_Ctilde, constant_ratio, gamma_product
from .rhs import RhsQuadrature, RhsResult, rhs_hubbard_stratonovich, rhs_superbosonization

__all__ = [
    "RhsQuadrature",
    "RhsResult",
    "constant_C",
    "constant_Ctilde",
    "constant_ratio",
    "gamma_product",
    "rhs_hubbard_stratonovich",
    "rhs_superbosonization",
]
