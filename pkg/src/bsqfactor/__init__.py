"""Exact spectral factorization of third order Boussinesq operators over Q(x)."""

__version__ = "0.1.0"

from .boussinesq import Potentials, assemble_P, bsq_residual, centralizer_basis, solve_constants
from .curvepoly import MPoly3, PolyMatrix, determinant
from .diffop import DiffOp, compose, right_divmod, right_gcd
from .exactfield import RatFunc, UPoly
from .resultants import SpectralPair, diff_resultant, first_subresultant
from .spectral import Parametrization, planar_factor, spectral_curve, spf

__all__ = [
    "Potentials",
    "assemble_P",
    "bsq_residual",
    "centralizer_basis",
    "solve_constants",
    "MPoly3",
    "PolyMatrix",
    "determinant",
    "DiffOp",
    "compose",
    "right_divmod",
    "right_gcd",
    "RatFunc",
    "UPoly",
    "SpectralPair",
    "diff_resultant",
    "first_subresultant",
    "Parametrization",
    "planar_factor",
    "spectral_curve",
    "spf",
]
