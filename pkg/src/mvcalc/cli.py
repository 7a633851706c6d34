"""``mvcalc`` command-line front end.

Exit codes: 0 success, 1 verification failure, 2 parse/usage error,
3 signature or grade error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import (
    AlgebraError,
    LiteralError,
    MAX_DIM,
    Frame,
    Multivector,
    blade_label,
    blades_of_grade,
    format_multivector,
    multivector_from_json,
    multivector_to_json,
    parse_multivector,
    reciprocal_basis,
)
from .calculus import (
    DerivKind,
    a_dot_del,
    derivative_operator,
    differential_extensor,
    directional_derivative,
    input_grade,
    remainder_profile,
)
from .function import ParseError, SignatureError, eval_at, parse
from .oracle.generators import GenConfig
from .oracle.rules import RULES, run_all, run_rule

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_SIGNATURE = 3
EXIT_IO = 4

DIGITS = 12

VERIFY_RULES = [name for name, rule in RULES.items() if not rule.extra]


class UsageError(ValueError):
    pass


@dataclass
class CliConfig:
    dim: int | None = None
    grade: int | None = None
    expr: str | None = None
    at: str | None = None
    direction: str | None = None
    frame: str | None = None
    method: str = "dual"
    seed: int = 0
    tol: float | None = None
    format: str = "text"

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> CliConfig:
        cfg = cls(**{k: getattr(args, k, None) for k in
                     ("dim", "grade", "expr", "at", "direction", "frame", "tol")})
        cfg.method = getattr(args, "method", None) or "dual"
        cfg.seed = getattr(args, "seed", None) or 0
        cfg.format = args.format
        if cfg.dim is not None and not 1 <= cfg.dim <= MAX_DIM:
            raise UsageError(f"dimension must be in [1, {MAX_DIM}], got {cfg.dim}")
        if cfg.grade is not None and cfg.dim is not None and not 0 <= cfg.grade <= cfg.dim:
            raise UsageError(f"grade must be in [0, {cfg.dim}], got {cfg.grade}")
        if cfg.tol is not None and not cfg.tol > 0:
            raise UsageError(f"tolerance must be positive, got {cfg.tol}")
        return cfg


# ---------------------------------------------------------------------------
# input helpers


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from exc


def read_multivector(value: str, dim: int) -> Multivector:
    """A literal, inline JSON object, or path to a ``.json`` file."""
    text = value.strip()
    if text.endswith(".json"):
        A = multivector_from_json(_load_json(text))
    elif text.startswith("{"):
        try:
            A = multivector_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise UsageError(f"invalid JSON multivector: {exc}") from exc
    else:
        return parse_multivector(text, dim)
    if A.dim != dim:
        raise AlgebraError(f"multivector has dimension {A.dim}, expected {dim}")
    return A


def read_frame(path: str | None, dim: int) -> Frame | None:
    if path is None:
        return None
    rows = _load_json(path)
    try:
        basis = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{path}: frame must be an n x n matrix") from exc
    if basis.shape != (dim, dim):
        raise AlgebraError(f"frame must be {dim} x {dim}, got shape {basis.shape}")
    return reciprocal_basis(basis)


def _require(cfg: CliConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join(f"--{n}" for n in missing))


def _point(cfg: CliConfig) -> tuple[Multivector, int]:
    X0 = read_multivector(cfg.at, cfg.dim)
    return X0, input_grade(X0, p=cfg.grade)


# ---------------------------------------------------------------------------
# output helpers


def _round(x: float) -> float:
    return float(f"{x:.{DIGITS}g}")


def _emit_multivector(A: Multivector, cfg: CliConfig) -> None:
    if cfg.format == "json":
        print(json.dumps(multivector_to_json(A, digits=DIGITS)))
    else:
        print(format_multivector(A, digits=DIGITS))


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(cfg: CliConfig) -> int:
    _require(cfg, "dim", "expr", "at")
    F = parse(cfg.expr, cfg.dim)
    X0, p = _point(cfg)
    _emit_multivector(eval_at(F, X0, p), cfg)
    return EXIT_OK


def cmd_diff(cfg: CliConfig) -> int:
    _require(cfg, "dim", "expr", "at", "direction")
    F = parse(cfg.expr, cfg.dim)
    X0, p = _point(cfg)
    A = read_multivector(cfg.direction, cfg.dim)
    input_grade(X0, A, p)
    frame = read_frame(cfg.frame, cfg.dim)
    if frame is not None:
        result = a_dot_del(F, X0, A, frame, p)
    else:
        result = directional_derivative(F, X0, A, cfg.method, p)
    _emit_multivector(result, cfg)
    return EXIT_OK


def cmd_operator(cfg: CliConfig, kind: str) -> int:
    _require(cfg, "dim", "expr", "at")
    F = parse(cfg.expr, cfg.dim)
    X0, p = _point(cfg)
    frame = read_frame(cfg.frame, cfg.dim)
    result = derivative_operator(F, X0, DerivKind.parse(kind), frame, p, cfg.method)
    _emit_multivector(result, cfg)
    return EXIT_OK


def cmd_extensor(cfg: CliConfig, q: int | None) -> int:
    _require(cfg, "dim", "expr", "at")
    F = parse(cfg.expr, cfg.dim)
    X0, p = _point(cfg)
    f = differential_extensor(F, X0, p, q, cfg.method)
    if cfg.format == "json":
        obj = f.to_json()
        obj["matrix"] = [[_round(v) for v in row] for row in obj["matrix"]]
        print(json.dumps(obj))
        return EXIT_OK
    out_labels = ["e" + blade_label(b) if b else "1" for b in blades_of_grade(f.dim, f.q)]
    in_labels = ["e" + blade_label(b) if b else "1" for b in blades_of_grade(f.dim, f.p)]
    width = max(len(s) for s in in_labels)
    print(f"differential ({f.p},{f.q})-extensor, rows: inputs, columns: outputs")
    print(" " * width + "  " + "  ".join(f"{s:>18}" for s in out_labels))
    for label, row in zip(in_labels, f.matrix):
        print(f"{label:>{width}}  " + "  ".join(f"{v:>18.{DIGITS}g}" for v in row))
    return EXIT_OK


def cmd_remainder(cfg: CliConfig, h0: float, count: int) -> int:
    _require(cfg, "dim", "expr", "at", "direction")
    F = parse(cfg.expr, cfg.dim)
    X0, p = _point(cfg)
    A = read_multivector(cfg.direction, cfg.dim)
    prof = remainder_profile(F, X0, A, h0, count, p)
    slope = prof.slope()
    if cfg.format == "json":
        obj = {"steps": [{"h": _round(h), "ratio": _round(r)} for h, r in prof.steps],
               "slope": None if np.isnan(slope) else _round(slope)}
        print(json.dumps(obj))
        return EXIT_OK
    print(f"{'h':>20}  {'ratio':>20}")
    for h, r in prof.steps:
        print(f"{h:>20.{DIGITS}g}  {r:>20.{DIGITS}g}")
    print(f"log-log slope: {slope:.{DIGITS}g}")
    return EXIT_OK


def cmd_verify(cfg: CliConfig, rule: str, trials: int | None) -> int:
    if rule != "all" and rule not in RULES:
        raise UsageError(f"unknown rule {rule!r}; choose from: all, " + ", ".join(RULES))
    gen = GenConfig()
    if cfg.dim is not None:
        lo = cfg.grade if cfg.grade is not None else min(gen.grades[0], cfg.dim)
        gen = GenConfig(dims=(cfg.dim, cfg.dim),
                        grades=(lo, cfg.grade if cfg.grade is not None else min(gen.grades[1], cfg.dim)))
    elif cfg.grade is not None:
        gen = GenConfig(dims=(max(cfg.grade, 1), gen.dims[1]), grades=(cfg.grade, cfg.grade))
    if rule == "all":
        reports = run_all(cfg.seed, trials, cfg.tol, gen)
    else:
        reports = [run_rule(rule, cfg.seed, trials, cfg.tol, gen)]
    failures = sum(r.failures for r in reports)
    if cfg.format == "json":
        def clean(r):
            obj = r.to_json()
            for key in ("max_abs_error", "max_rel_error"):
                obj[key] = _round(obj[key]) if np.isfinite(obj[key]) else None
            return obj
        if rule == "all":
            print(json.dumps({"rule": "all", "seed": cfg.seed, "failures": failures,
                              "reports": [clean(r) for r in reports]}))
        else:
            print(json.dumps(clean(reports[0])))
    else:
        print(f"{'rule':<20} {'trials':>6} {'fail':>5} {'max_abs':>12} {'max_rel':>12}  seed")
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            print(f"{r.rule:<20} {r.trials:>6} {r.failures:>5} {r.max_abs_error:>12.4g} "
                  f"{r.max_rel_error:>12.4g}  {r.seed}  {status}")
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvcalc", description="Calculus of multivector functions of a p-vector variable.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, point=True):
        p.add_argument("-n", "--dim", type=int, help="dimension of the vector space (1-8)")
        p.add_argument("-p", "--grade", type=int, help="grade of the variable X")
        # verification reports are machine-readable by default
        p.add_argument("--format", choices=("text", "json"), default="text" if point else "json")
        if point:
            p.add_argument("-e", "--expr", help="expression in X")
            p.add_argument("--at", help="point X0: literal, inline JSON, or .json file")

    p_eval = sub.add_parser("eval", help="evaluate F(X0)")
    common(p_eval)

    p_diff = sub.add_parser("diff", help="A-directional derivative F'_A(X0)")
    common(p_diff)
    p_diff.add_argument("--dir", dest="direction", help="direction A")
    p_diff.add_argument("--method", choices=("dual", "fd"), default="dual")
    p_diff.add_argument("--frame", help="JSON n x n basis; computes (A . d/dX) F in that frame")

    p_op = sub.add_parser("operator", help="curl, divergences or gradient at X0")
    common(p_op)
    p_op.add_argument("--kind", default="grad",
                      choices=("curl", "div", "ldiv", "grad"))
    p_op.add_argument("--frame", help="JSON n x n basis (rows are e_1..e_n)")
    p_op.add_argument("--method", choices=("dual", "fd"), default="dual")

    p_ext = sub.add_parser("extensor", help="differential extensor matrix at X0")
    common(p_ext)
    p_ext.add_argument("-q", "--out-grade", type=int, dest="out_grade")
    p_ext.add_argument("--method", choices=("dual", "fd"), default="dual")

    p_rem = sub.add_parser("remainder", help="normalized differentiability remainder")
    common(p_rem)
    p_rem.add_argument("--dir", dest="direction", help="direction A")
    p_rem.add_argument("--h0", type=float, default=1.0)
    p_rem.add_argument("--count", type=int, default=7)

    p_ver = sub.add_parser("verify", help="run randomized derivation-rule checks")
    common(p_ver, point=False)
    p_ver.add_argument("--rule", required=True,
                       help="one of: all, " + ", ".join(RULES))
    p_ver.add_argument("--trials", type=int)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--tol", type=float)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = CliConfig.from_args(args)
        if args.command == "eval":
            return cmd_eval(cfg)
        if args.command == "diff":
            return cmd_diff(cfg)
        if args.command == "operator":
            return cmd_operator(cfg, args.kind)
        if args.command == "extensor":
            return cmd_extensor(cfg, args.out_grade)
        if args.command == "remainder":
            return cmd_remainder(cfg, args.h0, args.count)
        return cmd_verify(cfg, args.rule, args.trials)
    except (ParseError, LiteralError, UsageError) as exc:
        print(f"mvcalc: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SignatureError, AlgebraError) as exc:
        print(f"mvcalc: grade error: {exc}", file=sys.stderr)
        return EXIT_SIGNATURE
    except OSError as exc:
        print(f"mvcalc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"mvcalc: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main() -> None:
    sys.exit(run())
