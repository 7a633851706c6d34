import math

import numpy as np
import pytest

from mvcalc import algebra as ga
from mvcalc.algebra import Frame, Multivector, parse_multivector, reciprocal_basis
from mvcalc.calculus import (
    DerivKind,
    RemainderProfile,
    a_dot_del,
    curve_derivative,
    derivative_operator,
    differential_extensor,
    directional_derivative,
    extensor_norm_bound,
    input_grade,
    remainder_profile,
)
from mvcalc.function import SignatureError, X, parse
from mvcalc.oracle.fd import central_difference, default_step, fd_extrapolated


def lit(text, n=3):
    return parse_multivector(text, n)


SKEW = reciprocal_basis([[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.5, -1.0, 2.0]])


def test_directional_derivative_examples():
    assert directional_derivative(X, lit("e1"), lit("e2")) == lit("e2")
    XX = parse("X X", 3)
    X0, A = lit("e1 + 2 e2"), lit("e1")
    assert directional_derivative(XX, X0, A) == lit("2")
    fd = directional_derivative(XX, X0, A, method="fd")
    assert ga.allclose(fd, lit("2"), atol=1e-9)


def test_unknown_method_and_grade_checks():
    with pytest.raises(ValueError):
        directional_derivative(X, lit("e1"), lit("e2"), method="symbolic")
    with pytest.raises(SignatureError):
        directional_derivative(X, lit("e1"), lit("e12"))
    with pytest.raises(SignatureError):
        input_grade(lit("e1 + e12"))
    assert input_grade(lit("e12"), lit("e13")) == 2
    assert input_grade(Multivector.zero(3), p=2) == 2


def test_fd_zero_direction():
    assert directional_derivative(X, lit("e1"), Multivector.zero(3), method="fd") == Multivector.zero(3)
    with pytest.raises(ValueError):
        fd_extrapolated(X, lit("e1"), Multivector.zero(3))


def test_fd_is_exact_to_rounding_for_quartics():
    F = parse("X X X X", 3)
    X0, A = lit("0.3 e1 - 0.7 e2 + e3"), lit("e1 + 0.5 e3")
    assert ga.allclose(fd_extrapolated(F, X0, A), directional_derivative(F, X0, A), atol=1e-8)
    # plain central differences carry an O(h^2) error that extrapolation removes
    h = default_step(X0, A)
    plain = ga.norm(central_difference(F, X0, A, h) - directional_derivative(F, X0, A))
    extrap = ga.norm(fd_extrapolated(F, X0, A) - directional_derivative(F, X0, A))
    assert extrap < plain


def test_differential_extensor_rows_are_basis_derivatives():
    F = parse("X ^ e3", 3)
    f = differential_extensor(F, lit("e1"), 1)
    assert (f.p, f.q) == (1, 2)
    np.testing.assert_array_equal(f.matrix, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    H = lit("2 e1 - e2")
    assert f.apply(H) == directional_derivative(F, lit("e1"), H)


def test_differential_extensor_errors():
    with pytest.raises(SignatureError):
        differential_extensor(parse("X X", 3), lit("e1"), 1)
    with pytest.raises(SignatureError):
        differential_extensor(X, lit("e1"), 1, q=2)


def test_differential_of_zero_function_uses_requested_grade():
    f = differential_extensor(parse("X ^ X", 3), lit("e1"), 1, q=2)
    assert f.matrix.shape == (3, 3) and not np.any(f.matrix)


def test_dual_and_fd_extensors_agree():
    F = parse("<(X ^ e3) X>_2 + 2 * X . X ^ e12", 3)
    X0 = lit("e1 - 2 e2 + 0.5 e3")
    dual = differential_extensor(F, X0, 1)
    fd = differential_extensor(F, X0, 1, method="fd")
    np.testing.assert_allclose(fd.matrix, dual.matrix, atol=1e-8)


def test_operators_of_identity():
    for n in (2, 3, 4):
        X0 = Multivector.basis_vector(n, 1)
        assert derivative_operator(X, X0, DerivKind.GRADIENT) == Multivector.scalar(n, n)
        assert derivative_operator(X, X0, DerivKind.SCALAR_DIV) == Multivector.scalar(n, n)
        assert derivative_operator(X, X0, DerivKind.LEFT_DIV) == Multivector.scalar(n, n)
        assert derivative_operator(X, X0, DerivKind.CURL) == Multivector.zero(n)


def test_gradient_of_squared_norm():
    F = parse("X . X", 3)
    X0 = lit("0.5 e1 - e2 + 2 e3")
    assert ga.allclose(derivative_operator(F, X0, DerivKind.GRADIENT), 2 * X0, atol=1e-14)
    assert ga.allclose(derivative_operator(F, X0, DerivKind.GRADIENT, SKEW), 2 * X0, atol=1e-12)


@pytest.mark.parametrize("kind", list(DerivKind))
def test_operators_are_frame_independent_for_bivector_variable(kind):
    F = parse("X X + e1 ^ X", 3)
    X0 = lit("e12 - 2 e23 + 0.5 e13")
    ortho = derivative_operator(F, X0, kind)
    skew = derivative_operator(F, X0, kind, SKEW)
    assert ga.allclose(ortho, skew, atol=1e-10)


def test_operator_kind_parsing():
    assert DerivKind.parse("grad") is DerivKind.GRADIENT
    assert DerivKind.parse("Curl") is DerivKind.CURL
    assert DerivKind.parse("left-div") is DerivKind.LEFT_DIV
    with pytest.raises(ValueError):
        DerivKind.parse("laplacian")


def test_operator_frame_dimension_mismatch():
    with pytest.raises(ga.AlgebraError):
        derivative_operator(X, lit("e1"), DerivKind.CURL, Frame.orthonormal(2))


def test_a_dot_del_equals_directional_derivative():
    F = parse("X X X + e123 _| X", 3)
    X0, A = lit("e1 + e2 - e3"), lit("2 e2 + e3")
    expected = directional_derivative(F, X0, A)
    assert ga.allclose(a_dot_del(F, X0, A), expected, atol=1e-12)
    assert ga.allclose(a_dot_del(F, X0, A, SKEW), expected, atol=1e-11)


def test_curve_derivative():
    curve = parse("X e1 + X X e12", 3)
    assert curve_derivative(curve, 1.0, 3, alpha=2.0) == lit("2 e1 + 4 e12")
    assert curve_derivative(curve, Multivector.scalar(3, 1.0), 3) == lit("e1 + 2 e12")
    with pytest.raises(SignatureError):
        curve_derivative(curve, lit("e1"), 3)


def test_remainder_profile_of_quadratic():
    # F = X X: remainder at step h is h A A exactly, so ratio = h ||A A|| / ||A||
    F = parse("X X", 3)
    X0, A = lit("e1 + 2 e2"), lit("e1 + e3")
    prof = remainder_profile(F, X0, A, h0=1.0, count=7)
    for h, r in prof.steps:
        assert r == pytest.approx(h * ga.norm(A * A) / ga.norm(A), rel=1e-9)
    assert prof.slope() == pytest.approx(1.0, abs=1e-9)
    assert [s["h"] for s in prof.to_json()["steps"]] == [2.0 ** -k for k in range(7)]


def test_remainder_profile_of_linear_function_vanishes():
    prof = remainder_profile(parse("3 * X + e1 ^ X", 3), lit("e2"), lit("e1 - e3"))
    assert all(r < 1e-12 for _, r in prof.steps)
    assert math.isnan(RemainderProfile([(1.0, 0.0), (0.5, 0.0), (0.25, 0.0)]).slope())


def test_remainder_profile_validation():
    with pytest.raises(ValueError):
        remainder_profile(X, lit("e1"), lit("e2"), count=2)
    with pytest.raises(ValueError):
        remainder_profile(X, lit("e1"), lit("e2"), h0=0.0)
    with pytest.raises(ValueError):
        remainder_profile(X, lit("e1"), Multivector.zero(3))


def test_extensor_norm_bound_of_identity():
    f = differential_extensor(X, lit("e1"), 1)
    assert extensor_norm_bound(f) == pytest.approx(math.sqrt(3), abs=1e-15)
