"""Independent ground truth: finite differences, random generators and the
identity-verification harness.  Named rules live in :mod:`mvcalc.oracle.rules`."""

from .fd import central_difference, default_step, fd_extrapolated
from .generators import (
    GenConfig,
    poly_degree,
    random_extensor,
    random_frame,
    random_multivector,
    random_poly_expr,
)
from .harness import VerifyReport, compare, verify_identity

__all__ = [
    "central_difference", "default_step", "fd_extrapolated", "GenConfig", "poly_degree",
    "random_extensor", "random_frame", "random_multivector", "random_poly_expr",
    "VerifyReport", "compare", "verify_identity",
]
