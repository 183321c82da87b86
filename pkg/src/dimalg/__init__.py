"""Exact computation with dimensioned Poisson and Jacobi brackets on power rings."""

__version__ = "0.1.0"

from .algebra_ops import (
    ProductModel,
    ReductionData,
    is_coisotrope,
    product_casimir,
    product_jacobi,
    product_poly_poisson,
    reduce,
    tensor_heterogeneous,
)
from .bracket import (
    BracketSpec,
    JacobiData,
    evaluate,
    evaluate_leibniz,
    from_jacobi,
    is_casimir,
    jacobi_closed_form,
    to_jacobi,
    verify_poisson,
    verify_symbols,
)
from .derivations import DimDerivation, commutator
from .dims import DimMap, DimVector, tensor_dim_set
from .dsl import Document, ParseDiagnostic, ParseError, parse, render
from .errors import DimalgError
from .poly import Poly, VarTable
from .power_ring import CoordIdeal, DimElement, Factor, PolyLineModel, odot, pullback, quotient_project

__all__ = [
    "BracketSpec",
    "CoordIdeal",
    "DimDerivation",
    "DimElement",
    "DimMap",
    "DimVector",
    "DimalgError",
    "Document",
    "Factor",
    "JacobiData",
    "ParseDiagnostic",
    "ParseError",
    "Poly",
    "PolyLineModel",
    "ProductModel",
    "ReductionData",
    "VarTable",
    "commutator",
    "evaluate",
    "evaluate_leibniz",
    "from_jacobi",
    "is_casimir",
    "is_coisotrope",
    "jacobi_closed_form",
    "odot",
    "parse",
    "product_casimir",
    "product_jacobi",
    "product_poly_poisson",
    "pullback",
    "quotient_project",
    "reduce",
    "render",
    "tensor_dim_set",
    "tensor_heterogeneous",
    "to_jacobi",
    "verify_poisson",
    "verify_symbols",
]
