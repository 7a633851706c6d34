"""Multivector calculus: directional derivatives, differential extensors and
the curl/divergence/gradient family for functions of a p-vector variable."""

from .algebra import (
    Extensor,
    Frame,
    Multivector,
    clifford,
    coordinates,
    from_coordinates,
    grade_project,
    left_contract,
    norm,
    parse_multivector,
    reciprocal_basis,
    reverse,
    right_contract,
    scalar_product,
    wedge,
)
from .function import eval_dual, evaluate, infer_signature, parse

__version__ = "0.1.0"
