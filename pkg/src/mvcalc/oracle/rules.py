"""Named derivation rules checked by random trials.

Each rule pairs an instance sampler with two evaluators that must agree.
Default trial counts and tolerances are the acceptance settings.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from types import SimpleNamespace
from typing import Callable

import numpy as np

from .. import algebra as ga
from ..calculus import (
    DerivKind,
    a_dot_del,
    curve_derivative,
    derivative_operator,
    differential_extensor,
    directional_derivative,
    extensor_norm_bound,
    remainder_profile,
)
from ..function import Add, Clifford, Compose, LContract, RContract, ScalarProd, Wedge, evaluate
from ..function.evaluate import PRODUCTS
from .generators import (
    GenConfig,
    poly_degree,
    random_extensor,
    random_frame,
    random_multivector,
    random_poly_expr,
    random_scalar,
)
from .harness import VerifyReport, verify_identity

# float comparisons of two sides that are equal in exact arithmetic
ROUNDING_SLACK = 8 * float(np.finfo(float).eps)


@dataclass(frozen=True)
class Rule:
    name: str
    sample: Callable
    lhs: Callable
    rhs: Callable
    tol: float
    trials: int
    extra: bool = False  # not in the documented rule list


def _setup(rng, cfg, n_funcs=1, q=None):
    dim = cfg.draw_dim(rng)
    p = cfg.draw_grade(rng, dim)
    funcs = [random_poly_expr(cfg, p, q, dim, rng) for _ in range(n_funcs)]
    X0 = random_multivector(cfg, p, dim, rng)
    A = random_multivector(cfg, p, dim, rng)
    return SimpleNamespace(dim=dim, p=p, funcs=funcs, X0=X0, A=A)


def _dd(F, X0, A, p, method="dual"):
    return directional_derivative(F, X0, A, method=method, p=p)


# -- linearity in the direction ----------------------------------------------

def _sample_linearity(rng, cfg):
    s = _setup(rng, cfg)
    s.B = random_multivector(cfg, s.p, s.dim, rng)
    s.alpha, s.beta = random_scalar(cfg, rng), random_scalar(cfg, rng)
    return s


def _linearity_lhs(s):
    return _dd(s.funcs[0], s.X0, s.alpha * s.A + s.beta * s.B, s.p)


def _linearity_rhs(s):
    F = s.funcs[0]
    return s.alpha * _dd(F, s.X0, s.A, s.p) + s.beta * _dd(F, s.X0, s.B, s.p)


# -- sum and product rules ----------------------------------------------------

def _sample_pair(rng, cfg):
    return _setup(rng, cfg, n_funcs=2)


def _sum_lhs(s):
    F, G = s.funcs
    return _dd(Add(F, G), s.X0, s.A, s.p)


def _sum_rhs(s):
    F, G = s.funcs
    return _dd(F, s.X0, s.A, s.p) + _dd(G, s.X0, s.A, s.p)


def _product_rule(node):
    op = PRODUCTS[node]

    def lhs(s):
        F, G = s.funcs
        return _dd(node(F, G), s.X0, s.A, s.p)

    def rhs(s):
        F, G = s.funcs
        dF, dG = _dd(F, s.X0, s.A, s.p), _dd(G, s.X0, s.A, s.p)
        return op(dF, evaluate(G, s.X0)) + op(evaluate(F, s.X0), dG)

    return lhs, rhs


# -- chain rule and its two corollaries --------------------------------------

def _sample_chain(rng, cfg):
    dim = cfg.draw_dim(rng)
    p = cfg.draw_grade(rng, dim)
    q = int(rng.integers(0, dim + 1))
    r = int(rng.integers(0, dim + 1))
    G = random_poly_expr(cfg, p, q, dim, rng)
    F = random_poly_expr(cfg, q, r, dim, rng)
    X0 = random_multivector(cfg, p, dim, rng)
    A = random_multivector(cfg, p, dim, rng)
    return SimpleNamespace(dim=dim, p=p, q=q, r=r, F=F, G=G, X0=X0, A=A)


def _chain_lhs(s):
    return _dd(Compose(s.F, s.G), s.X0, s.A, s.p)


def _chain_rhs(s):
    f = differential_extensor(s.F, evaluate(s.G, s.X0), s.q, s.r)
    return f.apply(_dd(s.G, s.X0, s.A, s.p))


def _sample_scalar_curve(rng, cfg):
    dim = cfg.draw_dim(rng)
    p = cfg.draw_grade(rng, dim)
    Phi = random_poly_expr(cfg, p, 0, dim, rng)
    curve = random_poly_expr(cfg, 0, None, dim, rng)
    X0 = random_multivector(cfg, p, dim, rng)
    A = random_multivector(cfg, p, dim, rng)
    return SimpleNamespace(dim=dim, p=p, Phi=Phi, curve=curve, X0=X0, A=A)


def _scalar_curve_lhs(s):
    return _dd(Compose(s.curve, s.Phi), s.X0, s.A, s.p)


def _scalar_curve_rhs(s):
    phi0 = evaluate(s.Phi, s.X0)
    dphi = _dd(s.Phi, s.X0, s.A, s.p)[0]
    return curve_derivative(s.curve, phi0, s.dim) * dphi


def _sample_curve_then_f(rng, cfg):
    dim = cfg.draw_dim(rng)
    q = cfg.draw_grade(rng, dim)
    curve = random_poly_expr(cfg, 0, q, dim, rng)
    F = random_poly_expr(cfg, q, None, dim, rng)
    lam0 = random_scalar(cfg, rng)
    alpha = random_scalar(cfg, rng)
    return SimpleNamespace(dim=dim, q=q, curve=curve, F=F, lam0=lam0, alpha=alpha)


def _curve_then_f_lhs(s):
    return curve_derivative(Compose(s.F, s.curve), s.lam0, s.dim, s.alpha)


def _curve_then_f_rhs(s):
    point = ga.Multivector.scalar(s.dim, s.lam0)
    velocity = curve_derivative(s.curve, s.lam0, s.dim) * s.alpha
    return _dd(s.F, evaluate(s.curve, point), velocity, s.q)


# -- derivative operators -----------------------------------------------------

FRAMES_PER_TRIAL = 10


def _sample_frames(rng, cfg):
    s = _setup(rng, cfg)
    s.frames = [random_frame(s.dim, rng) for _ in range(FRAMES_PER_TRIAL)]
    return s


def _frames_lhs(s):
    F = s.funcs[0]
    return [derivative_operator(F, s.X0, kind, frame, s.p)
            for frame in s.frames for kind in DerivKind]


def _frames_rhs(s):
    F = s.funcs[0]
    ortho = [derivative_operator(F, s.X0, kind, None, s.p) for kind in DerivKind]
    return ortho * len(s.frames)


def _sample_operator(rng, cfg):
    s = _setup(rng, cfg)
    s.frame = random_frame(s.dim, rng) if rng.random() < 0.5 else None
    return s


def _operator_lhs(s):
    return a_dot_del(s.funcs[0], s.X0, s.A, s.frame, s.p)


def _operator_rhs(s):
    return _dd(s.funcs[0], s.X0, s.A, s.p)


def _sample_operator_rules(rng, cfg):
    s = _setup(rng, cfg, n_funcs=2)
    s.frame = random_frame(s.dim, rng)
    q = int(rng.integers(0, s.dim + 1))
    s.q = q
    s.G = random_poly_expr(cfg, s.p, q, s.dim, rng)
    s.H = random_poly_expr(cfg, q, None, s.dim, rng)
    return s


def _operator_rules_lhs(s):
    F, G = s.funcs
    out = [a_dot_del(Add(F, G), s.X0, s.A, s.frame, s.p)]
    out += [a_dot_del(node(F, G), s.X0, s.A, s.frame, s.p) for node in PRODUCTS]
    out.append(a_dot_del(Compose(s.H, s.G), s.X0, s.A, s.frame, s.p))
    return out


def _operator_rules_rhs(s):
    F, G = s.funcs
    dF = a_dot_del(F, s.X0, s.A, s.frame, s.p)
    dG = a_dot_del(G, s.X0, s.A, s.frame, s.p)
    F0, G0 = evaluate(F, s.X0), evaluate(G, s.X0)
    out = [dF + dG]
    out += [op(dF, G0) + op(F0, dG) for op in PRODUCTS.values()]
    inner_dir = a_dot_del(s.G, s.X0, s.A, s.frame, s.p)
    out.append(a_dot_del(s.H, evaluate(s.G, s.X0), inner_dir, s.frame, s.q))
    return out


# -- differentials ------------------------------------------------------------

def _sample_fd(rng, cfg):
    return _setup(rng, cfg)


def _fd_lhs(s):
    return _dd(s.funcs[0], s.X0, s.A, s.p, "dual")


def _fd_rhs(s):
    return _dd(s.funcs[0], s.X0, s.A, s.p, "fd")


def _sample_uniqueness(rng, cfg):
    dim = cfg.draw_dim(rng)
    p = cfg.draw_grade(rng, dim)
    q = int(rng.integers(0, dim + 1))
    F = random_poly_expr(cfg, p, q, dim, rng)
    X0 = random_multivector(cfg, p, dim, rng)
    return SimpleNamespace(dim=dim, p=p, q=q, F=F, X0=X0)


def _uniqueness_lhs(s):
    return differential_extensor(s.F, s.X0, s.p, s.q, method="dual").matrix


def _uniqueness_rhs(s):
    return differential_extensor(s.F, s.X0, s.p, s.q, method="fd").matrix


REMAINDER_COUNT = 7  # six halvings
QUADRATIC_FLOOR = 1e-6


def _sample_quadratic(rng, cfg):
    dim = cfg.draw_dim(rng)
    p = cfg.draw_grade(rng, dim)
    quad_cfg = replace(cfg, degree=2)
    while True:
        F = random_poly_expr(quad_cfg, p, None, dim, rng)
        X0 = random_multivector(cfg, p, dim, rng)
        A = random_multivector(cfg, p, dim, rng)
        if poly_degree(F) != 2:
            continue
        prof = remainder_profile(F, X0, A, 1.0, REMAINDER_COUNT, p)
        # the quadratic part must not vanish along A
        if min(r for _, r in prof.steps) > QUADRATIC_FLOOR:
            return SimpleNamespace(p=p, F=F, X0=X0, A=A)


def _slope_lhs(s):
    return remainder_profile(s.F, s.X0, s.A, 1.0, REMAINDER_COUNT, s.p).slope()


def _sample_linear(rng, cfg):
    dim = cfg.draw_dim(rng)
    p = cfg.draw_grade(rng, dim)
    F = random_poly_expr(replace(cfg, degree=1), p, None, dim, rng)
    X0 = random_multivector(cfg, p, dim, rng)
    A = random_multivector(cfg, p, dim, rng)
    return SimpleNamespace(p=p, F=F, X0=X0, A=A)


def _linear_lhs(s):
    prof = remainder_profile(s.F, s.X0, s.A, 1.0, REMAINDER_COUNT, s.p)
    return max(r for _, r in prof.steps)


INPUTS_PER_EXTENSOR = 100


def _sample_extensor(rng, cfg):
    dim = cfg.draw_dim(rng)
    p = int(rng.integers(0, dim + 1))
    q = int(rng.integers(0, dim + 1))
    f = random_extensor(cfg, dim, p, q, rng)
    xs = [random_multivector(cfg, p, dim, rng) for _ in range(INPUTS_PER_EXTENSOR)]
    return SimpleNamespace(f=f, xs=xs)


def _bound_violation(s):
    """Worst relative excess of ||f(X)|| over M ||X||, floored at zero."""
    M = extensor_norm_bound(s.f)
    worst = 0.0
    for X in s.xs:
        bound = M * ga.norm(X)
        if bound > 0:
            worst = max(worst, (ga.norm(s.f.apply(X)) - bound) / bound)
        elif ga.norm(s.f.apply(X)) > 0:
            return float("inf")
    return worst


def _zero(_s):
    return 0.0


def _one(_s):
    return 1.0


def _build_rules() -> dict[str, Rule]:
    rules = [
        Rule("linearity", _sample_linearity, _linearity_lhs, _linearity_rhs, 1e-12, 200),
        Rule("sum", _sample_pair, _sum_lhs, _sum_rhs, 1e-12, 100),
    ]
    for name, node in [("product-wedge", Wedge), ("product-scalar", ScalarProd),
                       ("product-lcontract", LContract), ("product-clifford", Clifford)]:
        rules.append(Rule(name, _sample_pair, *_product_rule(node), 1e-10, 100))
    rules += [
        Rule("chain", _sample_chain, _chain_lhs, _chain_rhs, 1e-9, 100),
        Rule("chain-scalar-curve", _sample_scalar_curve, _scalar_curve_lhs,
             _scalar_curve_rhs, 1e-10, 100),
        Rule("chain-curve", _sample_curve_then_f, _curve_then_f_lhs, _curve_then_f_rhs,
             1e-10, 100),
        Rule("frame-independence", _sample_frames, _frames_lhs, _frames_rhs, 1e-8, 20),
        Rule("operator-equality", _sample_operator, _operator_lhs, _operator_rhs, 1e-10, 200),
        Rule("remainder-decay", _sample_quadratic, _slope_lhs, _one, 0.1, 20),
        Rule("extensor-bound", _sample_extensor, _bound_violation, _zero, ROUNDING_SLACK, 100),
        # beyond the documented list
        Rule("product-rcontract", _sample_pair, *_product_rule(RContract), 1e-10, 100, extra=True),
        Rule("operator-rules", _sample_operator_rules, _operator_rules_lhs,
             _operator_rules_rhs, 1e-9, 100, extra=True),
        Rule("remainder-linear", _sample_linear, _linear_lhs, _zero, 1e-12, 20, extra=True),
        Rule("fd-agreement", _sample_fd, _fd_lhs, _fd_rhs, 1e-6, 500, extra=True),
        Rule("uniqueness", _sample_uniqueness, _uniqueness_lhs, _uniqueness_rhs, 1e-6, 50,
             extra=True),
    ]
    return {r.name: r for r in rules}


RULES = _build_rules()


def run_rule(name: str, seed: int = 0, trials: int | None = None, tol: float | None = None,
             cfg: GenConfig | None = None) -> VerifyReport:
    """Run one named rule; unset trials/tol fall back to the rule's defaults."""
    try:
        rule = RULES[name]
    except KeyError:
        raise KeyError(f"unknown rule {name!r}") from None
    cfg = cfg or GenConfig()
    cfg = replace(cfg, seed=seed, trials=rule.trials if trials is None else trials)
    return verify_identity(rule.lhs, rule.rhs, cfg, rule.tol if tol is None else tol,
                           sample=rule.sample, rule=name)


def run_all(seed: int = 0, trials: int | None = None, tol: float | None = None,
            cfg: GenConfig | None = None) -> list[VerifyReport]:
    return [run_rule(name, seed, trials, tol, cfg) for name in RULES]
