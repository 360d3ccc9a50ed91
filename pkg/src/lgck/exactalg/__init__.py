"""Exact coefficient arithmetic and the multivariate polynomial engine."""

from fractions import Fraction as Rational

from .cyclo import Cyclo, cyclotomic_polynomial, euler_phi, zeta
from .poly import MultiPoly, drl_key
from .groebner import (
    PolyIdeal,
    buchberger,
    groebner_basis,
    jacobian_ideal,
    normal_form,
    quotient_basis,
    reduce_full,
)
from .cone import ConeResult, exact_lp_cone_membership
from . import linalg

__all__ = [
    "Rational",
    "Cyclo",
    "zeta",
    "cyclotomic_polynomial",
    "euler_phi",
    "MultiPoly",
    "drl_key",
    "PolyIdeal",
    "buchberger",
    "groebner_basis",
    "normal_form",
    "quotient_basis",
    "jacobian_ideal",
    "reduce_full",
    "ConeResult",
    "exact_lp_cone_membership",
    "linalg",
]
