"""Seeded random inputs: multivectors, frames, extensors and polynomial expressions."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from ..algebra import MAX_DIM, Extensor, Frame, Multivector, blades_of_grade, reciprocal_basis
from ..function import (
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
    infer_signature,
)

PRODUCT_NODES = (Wedge, ScalarProd, LContract, RContract, Clifford)


@dataclass(frozen=True)
class GenConfig:
    dims: tuple[int, int] = (2, 4)
    grades: tuple[int, int] = (1, 2)
    degree: int = 3
    coeff_range: tuple[float, float] = (-2.0, 2.0)
    seed: int = 0
    trials: int = 100
    max_depth: int = 6

    def __post_init__(self):
        lo, hi = self.dims
        if not 1 <= lo <= hi <= MAX_DIM:
            raise ValueError(f"dimension range must lie in [1, {MAX_DIM}], got {self.dims}")
        if not 0 <= self.grades[0] <= self.grades[1] <= hi:
            raise ValueError(f"bad grade range {self.grades}")
        if not 0 <= self.degree <= 4:
            raise ValueError(f"degree cap must be in [0, 4], got {self.degree}")
        a, b = self.coeff_range
        if not -2.0 <= a < b <= 2.0:
            raise ValueError(f"coefficient range must lie in [-2, 2], got {self.coeff_range}")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")

    def rng(self, *stream: int) -> np.random.Generator:
        """Generator for one independent stream, e.g. ``cfg.rng(trial_index)``."""
        return np.random.default_rng([self.seed, *stream])

    def draw_dim(self, rng: np.random.Generator, min_dim: int = 1) -> int:
        lo, hi = self.dims
        return int(rng.integers(max(lo, min_dim), hi + 1))

    def draw_grade(self, rng: np.random.Generator, dim: int) -> int:
        lo, hi = self.grades
        hi = min(hi, dim)
        lo = min(lo, hi)
        return int(rng.integers(lo, hi + 1))


def random_multivector(cfg: GenConfig, grade: int, dim: int | None = None,
                       rng: np.random.Generator | None = None) -> Multivector:
    """Homogeneous multivector with coefficients uniform in ``cfg.coeff_range``."""
    if rng is None:
        rng = cfg.rng()
    if dim is None:
        dim = cfg.draw_dim(rng, min_dim=max(grade, 1))
    if not 0 <= grade <= dim:
        raise ValueError(f"grade {grade} out of range for dimension {dim}")
    c = np.zeros(1 << dim)
    blades = list(blades_of_grade(dim, grade))
    c[blades] = rng.uniform(*cfg.coeff_range, size=len(blades))
    return Multivector(dim, c)


def random_scalar(cfg: GenConfig, rng: np.random.Generator) -> float:
    return float(rng.uniform(*cfg.coeff_range))


def random_frame(dim: int, rng: np.random.Generator, max_cond: float = 50.0) -> Frame:
    """A random invertible (generally non-orthonormal) frame."""
    while True:
        B = rng.uniform(-2.0, 2.0, size=(dim, dim))
        if np.linalg.cond(B) <= max_cond:
            return reciprocal_basis(B)


def random_extensor(cfg: GenConfig, dim: int, p: int, q: int,
                    rng: np.random.Generator) -> Extensor:
    m = rng.uniform(*cfg.coeff_range, size=(comb(dim, p), comb(dim, q)))
    return Extensor(dim, p, q, m)


def poly_degree(e: Expr) -> int:
    """Structural degree in X (an upper bound on the true degree)."""
    if isinstance(e, Var):
        return 1
    if isinstance(e, Const):
        return 0
    if isinstance(e, Add):
        return max(poly_degree(e.left), poly_degree(e.right))
    if isinstance(e, (Neg, ScalarMul, Reverse, GradeProj)):
        return poly_degree(e.operand)
    if isinstance(e, Compose):
        return poly_degree(e.outer) * poly_degree(e.inner)
    return poly_degree(e.left) + poly_degree(e.right)


class _ExprBuilder:
    def __init__(self, cfg: GenConfig, dim: int, rng: np.random.Generator,
                 allow_compose: bool):
        self.cfg = cfg
        self.dim = dim
        self.rng = rng
        self.allow_compose = allow_compose

    def const(self) -> Const:
        grade = int(self.rng.integers(0, self.dim + 1))
        return Const(random_multivector(self.cfg, grade, self.dim, self.rng))

    def build(self, budget: int, depth: int, p: int) -> Expr:
        rng = self.rng
        if depth >= self.cfg.max_depth - 1 or rng.random() < 0.15 + 0.1 * depth:
            if budget >= 1 and rng.random() < 0.75:
                return Var()
            return self.const()
        kinds = ["add", "unary", "product", "product"]
        if self.allow_compose and budget >= 1 and depth < self.cfg.max_depth - 2:
            kinds.append("compose")
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "add":
            return Add(self.build(budget, depth + 1, p), self.build(budget, depth + 1, p))
        if kind == "unary":
            operand = self.build(budget, depth + 1, p)
            which = int(rng.integers(4))
            if which == 0:
                return Neg(operand)
            if which == 1:
                return ScalarMul(random_scalar(self.cfg, rng), operand)
            if which == 2:
                return Reverse(operand)
            return GradeProj(int(rng.integers(0, self.dim + 1)), operand)
        if kind == "compose":
            q = int(rng.integers(0, self.dim + 1))
            inner_budget = int(rng.integers(1, budget + 1))
            inner = GradeProj(q, self.build(inner_budget, depth + 2, p))
            return Compose(self.build(budget // inner_budget, depth + 1, q), inner)
        node = PRODUCT_NODES[int(rng.integers(len(PRODUCT_NODES)))]
        left_budget = int(rng.integers(0, budget + 1)) if budget else 0
        return node(self.build(left_budget, depth + 1, p),
                    self.build(budget - left_budget, depth + 1, p))


def random_poly_expr(cfg: GenConfig, p: int, homogeneous_q: int | None = None,
                     dim: int | None = None, rng: np.random.Generator | None = None,
                     allow_compose: bool = False, degree: int | None = None) -> Expr:
    """Random polynomial expression in X of degree at most ``cfg.degree``.

    With ``homogeneous_q`` the result is wrapped in a grade-q projection,
    and is regenerated until that grade actually occurs, so the result is
    a (p,q)-function that is not trivially zero by grade arithmetic.
    Expressions without X are rejected unless the degree cap is 0.
    """
    if rng is None:
        rng = cfg.rng()
    if dim is None:
        dim = cfg.draw_dim(rng, min_dim=max(p, 1))
    if not 0 <= p <= dim:
        raise ValueError(f"input grade {p} out of range for dimension {dim}")
    if homogeneous_q is not None and not 0 <= homogeneous_q <= dim:
        raise ValueError(f"output grade {homogeneous_q} out of range for dimension {dim}")
    cap = cfg.degree if degree is None else degree
    builder = _ExprBuilder(cfg, dim, rng, allow_compose)
    for _ in range(50):
        e = builder.build(cap, 0, p)
        if cap >= 1 and poly_degree(e) == 0:
            continue
        if homogeneous_q is None:
            return e
        if homogeneous_q in infer_signature(e, p, dim).grades:
            return GradeProj(homogeneous_q, e)
    if homogeneous_q is None:
        return Var()
    filler = Const(random_multivector(cfg, homogeneous_q, dim, rng))
    return GradeProj(homogeneous_q, Add(e, filler))
