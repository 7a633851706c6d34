"""Central differences with one level of Richardson extrapolation."""

from __future__ import annotations

import numpy as np

from ..algebra import Multivector, norm
from ..function import Expr, evaluate

# One Richardson level leaves an O(h**4) truncation error, so the rounding
# balance point is eps**(1/5) rather than the plain central-difference eps**(1/3).
STEP_SCALE = float(np.finfo(float).eps) ** 0.2


def default_step(X0: Multivector, A: Multivector) -> float:
    return max(1.0, norm(X0)) * STEP_SCALE / max(1.0, norm(A))


def central_difference(F: Expr, X0: Multivector, A: Multivector, h: float) -> Multivector:
    return (evaluate(F, X0 + h * A) - evaluate(F, X0 - h * A)) / (2.0 * h)


def fd_extrapolated(F: Expr, X0: Multivector, A: Multivector,
                    h: float | None = None) -> Multivector:
    """Approximate the A-directional derivative of F at X0.

    Combines central differences at ``h`` and ``h/2`` as ``(4 D(h/2) - D(h)) / 3``.
    Exact up to rounding for polynomials of degree <= 4 along the line.
    """
    if not np.any(A.coeffs):
        raise ValueError("direction must be non-zero")
    if h is None:
        h = default_step(X0, A)
    if not h > 0:
        raise ValueError(f"step must be positive, got {h}")
    coarse = central_difference(F, X0, A, h)
    fine = central_difference(F, X0, A, h / 2.0)
    return (4.0 * fine - coarse) / 3.0
