"""Randomized identity checking with deterministic, per-trial seeding."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Any, Callable

import numpy as np

from ..algebra import Multivector
from .generators import GenConfig


@dataclass(frozen=True)
class VerifyReport:
    rule: str
    trials: int
    failures: int
    max_abs_error: float
    max_rel_error: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> VerifyReport:
        return cls(str(obj["rule"]), int(obj["trials"]), int(obj["failures"]),
                   float(obj["max_abs_error"]), float(obj["max_rel_error"]), int(obj["seed"]))


def _as_array(value) -> np.ndarray:
    if isinstance(value, Multivector):
        return value.coeffs
    if isinstance(value, (list, tuple)):
        return np.concatenate([_as_array(v).ravel() for v in value]) if value else np.zeros(0)
    return np.atleast_1d(np.asarray(value, dtype=float))


def compare(lhs, rhs) -> tuple[float, float]:
    """Absolute and relative error; relative uses max(1, ||rhs||) as denominator.

    Values may be multivectors, floats, arrays or lists of these; lists are
    compared item by item and the worst item is reported.
    """
    if isinstance(lhs, (list, tuple)):
        pairs = [compare(a, b) for a, b in zip(lhs, rhs, strict=True)]
        if not pairs:
            return 0.0, 0.0
        return max(p[0] for p in pairs), max(p[1] for p in pairs)
    a, b = _as_array(lhs), _as_array(rhs)
    err = float(np.linalg.norm(a - b))
    return err, err / max(1.0, float(np.linalg.norm(b)))


Sampler = Callable[[np.random.Generator, GenConfig], Any]
Evaluator = Callable[[Any], Any]


def verify_identity(lhs: Evaluator, rhs: Evaluator, cfg: GenConfig, tol: float,
                    sample: Sampler, rule: str = "identity") -> VerifyReport:
    """Run ``cfg.trials`` random trials of ``lhs(x) == rhs(x)``.

    Trial ``i`` draws its instance from ``cfg.rng(i)``, so reports depend on
    the seed only.  A trial fails when its relative error exceeds ``tol`` or
    when evaluating it raises.
    """
    failures = 0
    max_abs = 0.0
    max_rel = 0.0
    for i in range(cfg.trials):
        try:
            instance = sample(cfg.rng(i), cfg)
            abs_err, rel_err = compare(lhs(instance), rhs(instance))
        except (ArithmeticError, ValueError, TypeError):
            abs_err = rel_err = math.inf
        if math.isnan(abs_err) or math.isnan(rel_err):
            abs_err = rel_err = math.inf
        if not rel_err <= tol:
            failures += 1
        max_abs = max(max_abs, abs_err)
        max_rel = max(max_rel, rel_err)
    return VerifyReport(rule, cfg.trials, failures, max_abs, max_rel, cfg.seed)
