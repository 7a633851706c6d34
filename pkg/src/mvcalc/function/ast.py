"""Expression trees for multivector functions of one p-vector variable X."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..algebra import Multivector, format_multivector, format_number


class Expr:
    """Base node.  Nodes are immutable and compare structurally."""

    __slots__ = ()

    # operator sugar for building trees in Python
    def __add__(self, other):
        return Add(self, _lift(other, self))

    def __sub__(self, other):
        return Add(self, Neg(_lift(other, self)))

    def __neg__(self):
        return Neg(self)

    def __xor__(self, other):
        return Wedge(self, _lift(other, self))

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return ScalarMul(float(other), self)
        return Clifford(self, _lift(other, self))

    def __rmul__(self, other):
        return ScalarMul(float(other), self)

    def __invert__(self):
        return Reverse(self)

    def __str__(self):
        return to_text(self)


def _lift(value, _ctx) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, Multivector):
        return Const(value)
    raise TypeError(f"cannot use {type(value).__name__} in an expression")


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Const(Expr):
    value: Multivector


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class ScalarMul(Expr):
    scalar: float
    operand: Expr


@dataclass(frozen=True)
class Wedge(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Clifford(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class ScalarProd(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class LContract(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class RContract(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class GradeProj(Expr):
    k: int
    operand: Expr


@dataclass(frozen=True)
class Reverse(Expr):
    operand: Expr


@dataclass(frozen=True)
class Compose(Expr):
    """``outer`` evaluated at the value of ``inner``."""

    outer: Expr
    inner: Expr


X = Var()

BINARY_NODES = (Add, Wedge, ScalarProd, LContract, RContract, Clifford)
PRODUCT_NODES = (Wedge, ScalarProd, LContract, RContract, Clifford)

# loosest to tightest
_PREC = {Add: 1, Wedge: 2, ScalarProd: 3, LContract: 4, RContract: 4,
         Clifford: 5, ScalarMul: 5, Neg: 6, Reverse: 6}
_ATOM_PREC = 7
_SYMBOL = {Add: "+", Wedge: "^", ScalarProd: ".", LContract: "_|",
           RContract: "|_", Clifford: "*"}


def precedence(e: Expr) -> int:
    return _PREC.get(type(e), _ATOM_PREC)


def to_text(e: Expr) -> str:
    """Print in the expression grammar; ``parse(to_text(e))`` rebuilds ``e``.

    Constants are always bracketed (``[2 e1]``) and scalar multiples are
    written with a bare leading number (``2 * X``), which keeps the two
    distinguishable after a round trip.
    """
    if isinstance(e, Var):
        return "X"
    if isinstance(e, Const):
        return f"[{format_multivector(e.value)}]"
    if isinstance(e, GradeProj):
        return f"<{to_text(e.operand)}>_{e.k}"
    if isinstance(e, Compose):
        return f"{{{to_text(e.outer)}}}({to_text(e.inner)})"
    if isinstance(e, (Neg, Reverse)):
        sym = "-" if isinstance(e, Neg) else "~"
        inner = to_text(e.operand)
        if precedence(e.operand) < _PREC[Neg]:
            inner = f"({inner})"
        return sym + inner
    if isinstance(e, ScalarMul):
        mag = format_number(abs(e.scalar), None)
        sign = "-" if math.copysign(1.0, e.scalar) < 0 else ""
        right = to_text(e.operand)
        if precedence(e.operand) <= _PREC[ScalarMul]:
            right = f"({right})"
        return f"{sign}{mag} * {right}"
    if isinstance(e, BINARY_NODES):
        prec = _PREC[type(e)]
        left, right = to_text(e.left), to_text(e.right)
        if precedence(e.left) < prec:
            left = f"({left})"
        if precedence(e.right) <= prec:
            right = f"({right})"
        return f"{left} {_SYMBOL[type(e)]} {right}"
    raise TypeError(f"unknown node {type(e).__name__}")


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, BINARY_NODES):
        return (e.left, e.right)
    if isinstance(e, (Neg, Reverse, ScalarMul, GradeProj)):
        return (e.operand,)
    if isinstance(e, Compose):
        return (e.outer, e.inner)
    return ()


def node_count(e: Expr) -> int:
    return 1 + sum(node_count(c) for c in children(e))
