"""Directional derivatives, differentials and the derivative operators.

Every operation takes an expression ``F`` in the single variable ``X`` and
a point ``X0``.  Derivatives are computed exactly by dual evaluation unless
``method="fd"`` asks for the extrapolated finite-difference oracle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import algebra as ga
from .algebra import AlgebraError, Extensor, Frame, Multivector, blades_of_grade
from .function import Expr, SignatureError, eval_dual, evaluate, infer_signature
from .oracle.fd import fd_extrapolated


class DerivKind(enum.Enum):
    CURL = "curl"
    SCALAR_DIV = "div"
    LEFT_DIV = "ldiv"
    GRADIENT = "grad"

    def apply(self, A: Multivector, B: Multivector) -> Multivector:
        if self is DerivKind.CURL:
            return ga.wedge(A, B)
        if self is DerivKind.SCALAR_DIV:
            return Multivector.scalar(A.dim, ga.scalar_product(A, B))
        if self is DerivKind.LEFT_DIV:
            return ga.left_contract(A, B)
        return ga.clifford(A, B)

    @classmethod
    def parse(cls, name: str) -> DerivKind:
        aliases = {"curl": cls.CURL, "wedge": cls.CURL,
                   "div": cls.SCALAR_DIV, "scalar-div": cls.SCALAR_DIV,
                   "ldiv": cls.LEFT_DIV, "left-div": cls.LEFT_DIV,
                   "grad": cls.GRADIENT, "gradient": cls.GRADIENT}
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"unknown derivative kind {name!r}") from None


def input_grade(X0: Multivector, A: Multivector | None = None, p: int | None = None) -> int:
    """Grade of the variable, checked against the point (and direction)."""
    points = [X0] if A is None else [X0, A]
    for M in points[1:]:
        X0._check(M)
    if p is None:
        grades = frozenset().union(*(M.grades() for M in points))
        if len(grades) > 1:
            raise SignatureError(f"expected a homogeneous p-vector, got grades {sorted(grades)}")
        p = next(iter(grades)) if grades else 0
    if not 0 <= p <= X0.dim:
        raise SignatureError(f"grade {p} out of range for dimension {X0.dim}")
    for M in points:
        if not M.is_homogeneous(p):
            raise SignatureError(f"expected a {p}-vector")
    return p


def directional_derivative(F: Expr, X0: Multivector, A: Multivector,
                           method: str = "dual", p: int | None = None) -> Multivector:
    """F'_A(X0) = d/dl F(X0 + l A) at l = 0."""
    p = input_grade(X0, A, p)
    infer_signature(F, p, X0.dim)
    if method == "dual":
        return eval_dual(F, X0, A).deriv
    if method == "fd":
        if not np.any(A.coeffs):
            return evaluate(F, X0) * 0.0
        return fd_extrapolated(F, X0, A)
    raise ValueError(f"unknown method {method!r}")


def differential_extensor(F: Expr, X0: Multivector, p: int, q: int | None = None,
                          method: str = "dual") -> Extensor:
    """The differential f_{X0}, assembled from basis directional derivatives.

    Row J of the matrix holds the grade-q coefficients of F'_{e_J}(X0).
    """
    n = X0.dim
    input_grade(X0, p=p)
    sig = infer_signature(F, p, n)
    if not sig.homogeneous:
        raise SignatureError(f"not a (p,q)-function: output grades {sorted(sig.grades)}")
    if q is None:
        q = sig.q
    elif sig.grades and q != sig.q:
        raise SignatureError(f"function has output grade {sig.q}, not {q}")
    rows = []
    out_blades = list(blades_of_grade(n, q))
    for J in blades_of_grade(n, p):
        d = directional_derivative(F, X0, Multivector.blade(n, J), method=method, p=p)
        rows.append(d.coeffs[out_blades])
    return Extensor(n, p, q, np.array(rows).reshape(len(rows), len(out_blades)))


@dataclass(frozen=True)
class RemainderProfile:
    """Normalized remainders ||F(X0+hA) - F(X0) - f(hA)|| / ||hA||."""

    steps: list = field(default_factory=list)

    def slope(self) -> float:
        """Least-squares slope of log(ratio) against log(h)."""
        h = np.array([s[0] for s in self.steps])
        r = np.array([s[1] for s in self.steps])
        if np.any(r <= 0):
            return float("nan")
        return float(np.polyfit(np.log(h), np.log(r), 1)[0])

    def to_json(self) -> dict:
        return {"steps": [{"h": h, "ratio": r} for h, r in self.steps]}


def remainder_profile(F: Expr, X0: Multivector, A: Multivector, h0: float = 1.0,
                      count: int = 7, p: int | None = None) -> RemainderProfile:
    """Sample the differentiability remainder at h = h0 * 2**-k, k < count.

    For a (p,q)-function the linear term comes from its differential
    extensor; for mixed output it is h * F'_A(X0), the same map.
    """
    if count < 3:
        raise ValueError(f"count must be at least 3, got {count}")
    if not h0 > 0:
        raise ValueError(f"h0 must be positive, got {h0}")
    if not np.any(A.coeffs):
        raise ValueError("direction must be non-zero")
    p = input_grade(X0, A, p)
    sig = infer_signature(F, p, X0.dim)
    f = differential_extensor(F, X0, p, sig.q) if sig.homogeneous else None
    dA = directional_derivative(F, X0, A, p=p)
    F0 = evaluate(F, X0)
    steps = []
    for k in range(count):
        h = h0 * 2.0 ** -k
        H = h * A
        linear = f.apply(H) if f is not None else h * dA
        ratio = ga.norm(evaluate(F, X0 + H) - F0 - linear) / ga.norm(H)
        steps.append((h, ratio))
    return RemainderProfile(steps)


def _scalar_point(lam, dim: int) -> Multivector:
    if isinstance(lam, Multivector):
        if lam.dim != dim:
            raise AlgebraError(f"dimension mismatch: {lam.dim} vs {dim}")
        if not lam.is_homogeneous(0):
            raise SignatureError("a curve takes a real (grade-0) variable")
        return lam
    return Multivector.scalar(dim, float(lam))


def curve_derivative(X: Expr, lam0, dim: int, alpha: float = 1.0) -> Multivector:
    """X'(lam0) * alpha for a multivector function of a real variable."""
    point = _scalar_point(lam0, dim)
    infer_signature(X, 0, dim)
    return eval_dual(X, point, Multivector.scalar(dim, alpha)).deriv


def _frame_for(X0: Multivector, frame: Frame | None) -> Frame:
    if frame is None:
        return Frame.orthonormal(X0.dim)
    if frame.dim != X0.dim:
        raise AlgebraError(f"frame dimension {frame.dim} does not match point dimension {X0.dim}")
    return frame


def derivative_operator(F: Expr, X0: Multivector, kind: DerivKind, frame: Frame | None = None,
                        p: int | None = None, method: str = "dual") -> Multivector:
    """Sum over ordered p-blades J of e^J * F'_{e_J}(X0).

    ``kind`` picks * as wedge (curl), scalar product (scalar divergence),
    left contraction (left contracted divergence) or Clifford (gradient).
    """
    frame = _frame_for(X0, frame)
    p = input_grade(X0, p=p)
    total = Multivector.zero(X0.dim)
    for E, E_recip in zip(frame.blades(p), frame.reciprocal_blades(p)):
        total = total + kind.apply(E_recip, directional_derivative(F, X0, E, method, p))
    return total


def a_dot_del(F: Expr, X0: Multivector, A: Multivector, frame: Frame | None = None,
              p: int | None = None) -> Multivector:
    """(A . d/dX) F at X0, expanded as sum_J (A . e^J) F'_{e_J}(X0)."""
    frame = _frame_for(X0, frame)
    p = input_grade(X0, A, p)
    total = Multivector.zero(X0.dim)
    for E, E_recip in zip(frame.blades(p), frame.reciprocal_blades(p)):
        total = total + ga.scalar_product(A, E_recip) * directional_derivative(F, X0, E, p=p)
    return total


def extensor_norm_bound(f: Extensor) -> float:
    """Frobenius norm M of the matrix, so that ||f(X)|| <= M ||X||."""
    return float(np.linalg.norm(f.matrix))
