"""Evaluation, dual-number (forward-mode) evaluation and grade inference."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .. import algebra as ga
from ..algebra import Multivector
from .ast import (
    Add,
    Clifford,
    Compose,
    Const,
    Expr,
    GradeProj,
    LContract,
    Neg,
    RContract,
    Reverse,
    ScalarMul,
    ScalarProd,
    Var,
    Wedge,
)


class SignatureError(ValueError):
    """Grade mismatch: a composition with a mixed or wrong-grade inner
    function, or a variable bound to a value of the wrong grade."""


MIXED = "mixed"


@dataclass(frozen=True)
class FuncSignature:
    p: int
    q: Union[int, str]
    grades: frozenset = frozenset()

    @property
    def homogeneous(self) -> bool:
        return self.q != MIXED

    def __str__(self):
        return f"({self.p}, {self.q})"


def _scalar_mv(A: Multivector, value: float) -> Multivector:
    return Multivector.scalar(A.dim, value)


def _scalar_product_mv(A: Multivector, B: Multivector) -> Multivector:
    return _scalar_mv(A, ga.scalar_product(A, B))


PRODUCTS = {
    Wedge: ga.wedge,
    Clifford: ga.clifford,
    ScalarProd: _scalar_product_mv,
    LContract: ga.left_contract,
    RContract: ga.right_contract,
}


# ---------------------------------------------------------------------------
# grade inference


def _grade_set(e: Expr, p: int, n: int) -> frozenset:
    if isinstance(e, Var):
        return frozenset({p})
    if isinstance(e, Const):
        return e.value.grades()
    if isinstance(e, Add):
        return _grade_set(e.left, p, n) | _grade_set(e.right, p, n)
    if isinstance(e, (Neg, ScalarMul, Reverse)):
        return _grade_set(e.operand, p, n)
    if isinstance(e, GradeProj):
        return frozenset({e.k}) & _grade_set(e.operand, p, n)
    if isinstance(e, ScalarProd):
        return frozenset({0})
    if isinstance(e, Compose):
        sig = infer_signature(e.inner, p, n)
        if not sig.homogeneous:
            raise SignatureError("composition needs a homogeneous inner function, "
                                 f"got grades {sorted(sig.grades)}")
        return _grade_set(e.outer, sig.q, n)
    a = _grade_set(e.left, p, n)
    b = _grade_set(e.right, p, n)
    out = set()
    for r in a:
        for s in b:
            if isinstance(e, Wedge) and r + s <= n:
                out.add(r + s)
            elif isinstance(e, LContract) and s >= r:
                out.add(s - r)
            elif isinstance(e, RContract) and r >= s:
                out.add(r - s)
            elif isinstance(e, Clifford):
                out.update(range(abs(r - s), min(r + s, 2 * n - r - s) + 1, 2))
    return frozenset(out)


def infer_signature(e: Expr, p: int, n: int | None = None) -> FuncSignature:
    """Output grade of ``e`` as a function of a ``p``-vector.

    ``q`` is ``"mixed"`` when more than one output grade is possible.  A
    function that is identically zero by grade arithmetic reports ``q = 0``.
    ``n`` defaults to the dimension of the first constant found, else ``p``.
    """
    if n is None:
        n = _find_dim(e) or max(p, 1)
    if not 0 <= p <= n:
        raise SignatureError(f"input grade {p} out of range for dimension {n}")
    grades = _grade_set(e, p, n)
    if len(grades) > 1:
        return FuncSignature(p, MIXED, grades)
    q = next(iter(grades)) if grades else 0
    return FuncSignature(p, q, grades)


def _find_dim(e: Expr) -> int | None:
    if isinstance(e, Const):
        return e.value.dim
    for attr in ("left", "right", "operand", "outer", "inner"):
        child = getattr(e, attr, None)
        if child is not None:
            d = _find_dim(child)
            if d:
                return d
    return None


# ---------------------------------------------------------------------------
# evaluation


def _check_const(c: Multivector, dim: int) -> None:
    if c.dim != dim:
        raise ga.AlgebraError(f"constant of dimension {c.dim} in a dimension-{dim} context")


def evaluate(e: Expr, X: Multivector) -> Multivector:
    """Value of the function denoted by ``e`` at ``X``."""
    if isinstance(e, Var):
        return X
    if isinstance(e, Const):
        _check_const(e.value, X.dim)
        return e.value
    if isinstance(e, Add):
        return evaluate(e.left, X) + evaluate(e.right, X)
    if isinstance(e, Neg):
        return -evaluate(e.operand, X)
    if isinstance(e, ScalarMul):
        return e.scalar * evaluate(e.operand, X)
    if isinstance(e, GradeProj):
        return ga.grade_project(evaluate(e.operand, X), e.k)
    if isinstance(e, Reverse):
        return ga.reverse(evaluate(e.operand, X))
    if isinstance(e, Compose):
        return evaluate(e.outer, evaluate(e.inner, X))
    product = PRODUCTS.get(type(e))
    if product is None:
        raise TypeError(f"unknown node {type(e).__name__}")
    return product(evaluate(e.left, X), evaluate(e.right, X))


def eval_at(e: Expr, X: Multivector, p: int) -> Multivector:
    """:func:`evaluate` with the variable's grade and the signature checked."""
    if not X.is_homogeneous(p):
        raise SignatureError(f"variable must be a {p}-vector")
    infer_signature(e, p, X.dim)
    return evaluate(e, X)


@dataclass(frozen=True, eq=False)
class DualMultivector:
    """``value + eps * deriv`` with ``eps**2 = 0``."""

    value: Multivector
    deriv: Multivector

    def __add__(self, other: DualMultivector) -> DualMultivector:
        return DualMultivector(self.value + other.value, self.deriv + other.deriv)

    def __neg__(self) -> DualMultivector:
        return DualMultivector(-self.value, -self.deriv)

    def scale(self, s: float) -> DualMultivector:
        return DualMultivector(s * self.value, s * self.deriv)

    def map_linear(self, f) -> DualMultivector:
        return DualMultivector(f(self.value), f(self.deriv))

    def product(self, other: DualMultivector, op) -> DualMultivector:
        """Lift a bilinear product: (a + eps a')(b + eps b') = ab + eps(a'b + ab')."""
        return DualMultivector(
            op(self.value, other.value),
            op(self.deriv, other.value) + op(self.value, other.deriv),
        )


def _dual(e: Expr, X: DualMultivector) -> DualMultivector:
    if isinstance(e, Var):
        return X
    if isinstance(e, Const):
        _check_const(e.value, X.value.dim)
        return DualMultivector(e.value, Multivector.zero(e.value.dim))
    if isinstance(e, Add):
        return _dual(e.left, X) + _dual(e.right, X)
    if isinstance(e, Neg):
        return -_dual(e.operand, X)
    if isinstance(e, ScalarMul):
        return _dual(e.operand, X).scale(e.scalar)
    if isinstance(e, GradeProj):
        return _dual(e.operand, X).map_linear(lambda A: ga.grade_project(A, e.k))
    if isinstance(e, Reverse):
        return _dual(e.operand, X).map_linear(ga.reverse)
    if isinstance(e, Compose):
        return _dual(e.outer, _dual(e.inner, X))
    product = PRODUCTS.get(type(e))
    if product is None:
        raise TypeError(f"unknown node {type(e).__name__}")
    return _dual(e.left, X).product(_dual(e.right, X), product)


def eval_dual(e: Expr, X0: Multivector, A: Multivector) -> DualMultivector:
    """Evaluate at ``X0 + eps*A``; ``deriv`` is the exact A-directional
    derivative since every node is polynomial in X."""
    X0._check(A)
    return _dual(e, DualMultivector(X0, A))


def compose(outer: Expr, inner: Expr, p: int, n: int) -> Compose:
    """``outer`` after ``inner``; ``inner`` must have homogeneous output."""
    sig = infer_signature(inner, p, n)
    if not sig.homogeneous:
        raise SignatureError(f"inner function has mixed output grades {sorted(sig.grades)}")
    infer_signature(outer, sig.q, n)
    return Compose(outer, inner)
