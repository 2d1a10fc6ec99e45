"""Exact R-matrices for quantized Kac-Moody algebras from bar involutions."""

from .bar import BarOperator, bar_irrep, bar_singular_image, bar_tensor, fixed_basis
from .cartan import CartanDatum, Weight, new_cartan_datum, parse_datum, preset
from .irrep import Representation, build_irrep
from .qfield import QScalar
from .rmatrix import RMatrixOperator, braiding, half_twist_r, oracle_r, theta_op
from .tensor import TensorRep, singular_basis, tensor_rep
from .verify import verify_suite

__all__ = [
    "BarOperator",
    "CartanDatum",
    "QScalar",
    "RMatrixOperator",
    "Representation",
    "TensorRep",
    "Weight",
    "bar_irrep",
    "bar_singular_image",
    "bar_tensor",
    "braiding",
    "build_irrep",
    "fixed_basis",
    "half_twist_r",
    "new_cartan_datum",
    "oracle_r",
    "parse_datum",
    "preset",
    "singular_basis",
    "tensor_rep",
    "theta_op",
    "verify_suite",
]
