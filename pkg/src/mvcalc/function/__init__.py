"""Expression language for multivector functions of one p-vector variable."""

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
    X,
    to_text,
)
from .evaluate import (
    MIXED,
    DualMultivector,
    FuncSignature,
    SignatureError,
    compose,
    eval_at,
    eval_dual,
    evaluate,
    infer_signature,
)
from .parser import ParseError, UnknownIdentifier, parse

__all__ = [
    "Add", "Clifford", "Compose", "Const", "Expr", "GradeProj", "LContract", "Neg",
    "RContract", "Reverse", "ScalarMul", "ScalarProd", "Var", "Wedge", "X", "to_text",
    "MIXED", "DualMultivector", "FuncSignature", "SignatureError", "compose", "eval_at",
    "eval_dual", "evaluate", "infer_signature", "ParseError", "UnknownIdentifier", "parse",
]
