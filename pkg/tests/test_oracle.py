import math

import numpy as np
import pytest

from mvcalc import algebra as ga
from mvcalc.function import infer_signature
from mvcalc.oracle.generators import (
    GenConfig,
    poly_degree,
    random_extensor,
    random_frame,
    random_multivector,
    random_poly_expr,
)
from mvcalc.oracle.harness import VerifyReport, compare, verify_identity
from mvcalc.oracle.rules import RULES, run_all, run_rule


def test_gen_config_validation():
    with pytest.raises(ValueError):
        GenConfig(dims=(0, 3))
    with pytest.raises(ValueError):
        GenConfig(dims=(2, 9))
    with pytest.raises(ValueError):
        GenConfig(grades=(3, 2))
    with pytest.raises(ValueError):
        GenConfig(degree=5)
    with pytest.raises(ValueError):
        GenConfig(coeff_range=(-3.0, 1.0))


def test_random_inputs_respect_config():
    cfg = GenConfig(seed=1)
    rng = cfg.rng(0)
    for _ in range(50):
        n = cfg.draw_dim(rng)
        p = cfg.draw_grade(rng, n)
        assert 2 <= n <= 4 and 1 <= p <= 2
        A = random_multivector(cfg, p, n, rng)
        assert A.is_homogeneous(p)
        assert np.all(np.abs(A.coeffs) <= 2.0)
        e = random_poly_expr(cfg, p, dim=n, rng=rng)
        assert 1 <= poly_degree(e) <= 3
        q = int(rng.integers(0, n + 1))
        assert infer_signature(random_poly_expr(cfg, p, q, n, rng), p, n).q == q
    frame = random_frame(4, rng)
    assert np.linalg.cond(frame.basis) <= 50
    assert random_extensor(cfg, 4, 2, 1, rng).matrix.shape == (6, 4)


def test_streams_are_deterministic():
    cfg = GenConfig(seed=3)
    a = random_poly_expr(cfg, 1, dim=3, rng=cfg.rng(5))
    b = random_poly_expr(cfg, 1, dim=3, rng=cfg.rng(5))
    assert a == b


def test_compare_shapes():
    assert compare(1.0, 1.5) == (0.5, 0.5 / 1.5)
    assert compare(1.0, 0.5) == (0.5, 0.5)
    A = ga.Multivector.vector([3.0, 4.0])
    assert compare(A, A) == (0.0, 0.0)
    err, rel = compare([A, 1.0], [ga.Multivector.zero(2), 1.0])
    assert err == pytest.approx(5.0) and rel == pytest.approx(5.0)


def test_verify_identity_counts_failures_and_exceptions():
    cfg = GenConfig(trials=10)

    def sample(rng, _cfg):
        return float(rng.integers(0, 2))

    def lhs(x):
        if x == 1.0:
            raise ValueError("boom")
        return x

    report = verify_identity(lhs, lambda x: x, cfg, 1e-12, sample, rule="demo")
    assert report.rule == "demo" and report.trials == 10
    assert 0 < report.failures < 10
    assert math.isinf(report.max_abs_error)
    assert not report.passed


def test_report_json_round_trip():
    r = VerifyReport("sum", 100, 0, 0.0, 0.0, 7)
    assert VerifyReport.from_json(r.to_json()) == r
    assert r.passed


@pytest.mark.parametrize("name", sorted(RULES))
def test_rule_is_green_at_reduced_trials(name):
    report = run_rule(name, seed=123, trials=10)
    assert report.failures == 0, report


def test_rule_reports_are_reproducible():
    assert run_rule("chain", seed=5, trials=15) == run_rule("chain", seed=5, trials=15)


def test_tiny_tolerance_produces_failures():
    assert run_rule("fd-agreement", seed=0, trials=20, tol=1e-300).failures > 0


def test_unknown_rule():
    with pytest.raises(KeyError):
        run_rule("nonsense")


def test_run_all_covers_every_rule():
    reports = run_all(seed=1, trials=2)
    assert [r.rule for r in reports] == list(RULES)
