import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvcalc import algebra as ga
from mvcalc.algebra import (
    AlgebraError,
    Extensor,
    Frame,
    FrameError,
    LiteralError,
    Multivector,
    blade_bits,
    blades_of_grade,
    coordinates,
    format_multivector,
    from_coordinates,
    multivector_from_json,
    multivector_to_json,
    parse_multivector,
    reciprocal_basis,
)


def lit(text, n=3):
    return parse_multivector(text, n)


# --- independent oracle: products of basis blades by explicit factor lists


def blade_product_by_factors(a, b):
    """Multiply e_a e_b by concatenating index lists and bubble-sorting,
    cancelling e_i e_i = 1 as equal neighbours meet."""
    factors = list(ga.blade_indices(a)) + list(ga.blade_indices(b))
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            if factors[i] > factors[i + 1]:
                factors[i], factors[i + 1] = factors[i + 1], factors[i]
                sign = -sign
                changed = True
            elif factors[i] == factors[i + 1]:
                del factors[i:i + 2]
                changed = True
                break
    return sign, blade_bits(factors)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_clifford_table_matches_factor_list_oracle(n):
    for a in range(1 << n):
        for b in range(1 << n):
            sign, bits = blade_product_by_factors(a, b)
            expected = Multivector.blade(n, bits, float(sign))
            assert ga.clifford(Multivector.blade(n, a), Multivector.blade(n, b)) == expected


@pytest.mark.parametrize("n", [3, 4])
def test_wedge_and_contractions_are_grade_parts_of_clifford(n):
    for a in range(1 << n):
        for b in range(1 << n):
            A, B = Multivector.blade(n, a), Multivector.blade(n, b)
            r, s = ga.grade_of(a), ga.grade_of(b)
            prod = ga.clifford(A, B)
            wedge = ga.grade_project(prod, r + s) if r + s <= n else Multivector.zero(n)
            assert ga.wedge(A, B) == wedge
            lc = ga.grade_project(prod, s - r) if s >= r else Multivector.zero(n)
            rc = ga.grade_project(prod, r - s) if r >= s else Multivector.zero(n)
            assert ga.left_contract(A, B) == lc
            assert ga.right_contract(A, B) == rc


def test_documented_products():
    assert ga.clifford(lit("e1"), lit("e1")) == lit("1")
    assert ga.clifford(lit("e1"), lit("e12")) == lit("e2")
    assert ga.wedge(lit("e1"), lit("e2")) == lit("e12")
    assert ga.wedge(lit("e2"), lit("e1")) == lit("-e12")
    assert ga.wedge(lit("e1"), lit("e1")) == Multivector.zero(3)
    assert ga.left_contract(lit("e2"), lit("e12")) == lit("-e1")
    assert ga.left_contract(lit("e12"), lit("e2")) == Multivector.zero(3)
    assert ga.right_contract(lit("e12"), lit("e2")) == lit("e1")
    assert ga.scalar_product(lit("e12"), lit("e12")) == 1.0
    assert ga.scalar_product(lit("e1 + 2 e2"), lit("e1 + 2 e2")) == 5.0
    assert ga.norm(lit("1 + e12")) == pytest.approx(math.sqrt(2), abs=1e-15)


def test_reverse_signs():
    A = lit("1 + e1 + e12 + e123")
    assert ga.reverse(A) == lit("1 + e1 - e12 - e123")
    assert ~A == ga.reverse(A)


def test_operator_sugar():
    a, b = lit("e1"), lit("e2")
    assert a * b == ga.clifford(a, b)
    assert (a ^ b) == ga.wedge(a, b)
    assert 2 * a == lit("2 e1") and a * 2 == lit("2 e1") and a / 2 == lit("0.5 e1")
    assert a - b == lit("e1 - e2")
    with pytest.raises(AlgebraError):
        _ = lit("e1", 2) + lit("e1", 3)


def test_multivector_is_immutable():
    A = lit("e1")
    with pytest.raises(AttributeError):
        A.dim = 4
    with pytest.raises(ValueError):
        A.coeffs[0] = 1.0


def test_grades_and_projection():
    A = lit("1 + 2 e1 + 3 e23")
    assert A.grades() == {0, 1, 2}
    assert ga.grade_project(A, 1) == lit("2 e1")
    assert lit("2 e1 + e3").is_homogeneous(1)
    assert not A.is_homogeneous(1)
    assert Multivector.zero(3).is_homogeneous(2)


def test_blades_of_grade_is_lexicographic():
    labels = [ga.blade_label(b) for b in blades_of_grade(4, 2)]
    assert labels == ["12", "13", "14", "23", "24", "34"]
    assert len(blades_of_grade(5, 3)) == math.comb(5, 3)


# --- literals and JSON


def test_literal_parsing():
    A = lit("1 + 2 e1 - 3 e12")
    assert A[0] == 1 and A[0b1] == 2 and A[0b11] == -3
    assert lit("-e3") == Multivector.blade(3, 0b100, -1.0)
    assert lit("2e1") == lit("2 e1")
    assert lit("e1 + e1") == lit("2 e1")


@pytest.mark.parametrize("text, offset", [
    ("e21", 0), ("e4", 1), ("1 +", 3), ("1 + * e1", 4), ("", 0), ("e", 0),
])
def test_literal_errors_report_offsets(text, offset):
    with pytest.raises(LiteralError) as info:
        parse_multivector(text, 3)
    assert info.value.offset == offset


def test_format_round_trips_exactly():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        c = rng.normal(size=1 << n) * (rng.random(1 << n) < 0.6)
        A = Multivector(n, c)
        assert parse_multivector(format_multivector(A), n) == A
        assert multivector_from_json(multivector_to_json(A)) == A


def test_format_with_digits():
    assert format_multivector(lit("5")) == "5"
    assert format_multivector(lit("e2")) == "e2"
    assert format_multivector(lit("-e1 + 0.5 e23")) == "-e1 + 0.5 e23"
    assert format_multivector(Multivector.scalar(3, 1 / 3), digits=12) == "0.333333333333"
    assert format_multivector(Multivector.zero(2)) == "0"
    assert format_multivector(Multivector(2, [2.0, 1e-15, 0, 0]), digits=12) == "2"


def test_json_schema():
    obj = multivector_to_json(lit("1 + 2 e1 - 3 e12"))
    assert obj == {"dim": 3, "coeffs": {"": 1.0, "1": 2.0, "12": -3.0}}
    assert multivector_from_json('{"dim":3,"coeffs":{"":1.0,"1":2.0,"12":-3.0}}') == lit("1 + 2 e1 - 3 e12")
    with pytest.raises(LiteralError):
        multivector_from_json({"coeffs": {}})
    with pytest.raises(AlgebraError):
        multivector_from_json({"dim": 9, "coeffs": {}})


# --- frames


def test_skew_frame_reciprocal_and_coordinates():
    frame = reciprocal_basis([[1.0, 0.0], [1.0, 1.0]])
    np.testing.assert_allclose(frame.reciprocal, [[1.0, -1.0], [0.0, 1.0]], atol=1e-15)
    A = Multivector.vector([2.0, 3.0])
    np.testing.assert_allclose(coordinates(A, frame, 1, "covariant"), [2.0, 5.0], atol=1e-15)
    contra = coordinates(A, frame, 1)
    np.testing.assert_allclose(contra, [-1.0, 3.0], atol=1e-15)
    assert ga.allclose(from_coordinates(contra, frame, 1), A, atol=1e-14)


def test_bivector_coordinates_in_random_frame():
    rng = np.random.default_rng(5)
    frame = reciprocal_basis(rng.normal(size=(4, 4)) + 3 * np.eye(4))
    A = Multivector(4, rng.normal(size=16))
    A2 = ga.grade_project(A, 2)
    back = from_coordinates(coordinates(A2, frame, 2), frame, 2)
    assert ga.allclose(back, A2, atol=1e-12)


@pytest.mark.parametrize("basis", [
    [[1.0, 2.0], [2.0, 4.0]], [[1.0, 0.0, 0.0]], np.zeros((3, 3)), [[1.0, np.nan], [0.0, 1.0]],
])
def test_bad_frames_are_rejected(basis):
    with pytest.raises(FrameError):
        reciprocal_basis(basis)


def test_orthonormal_frame_blades():
    frame = Frame.orthonormal(3)
    assert [str(B) for B in frame.blades(2)] == ["e12", "e13", "e23"]
    assert [str(B) for B in frame.reciprocal_blades(2)] == ["e12", "e13", "e23"]


def test_extensor_apply_and_json():
    f = Extensor(3, 1, 2, np.arange(9.0).reshape(3, 3))
    out = f.apply(lit("e2"))
    assert out == lit("3 e12 + 4 e13 + 5 e23")
    assert Extensor.from_json(f.to_json()).apply(lit("e1 + e3")) == f.apply(lit("e1 + e3"))
    with pytest.raises(AlgebraError):
        f.apply(lit("e12"))
    with pytest.raises(AlgebraError):
        Extensor(3, 1, 2, np.zeros((2, 3)))


# --- properties

coeff = st.floats(-2, 2, allow_nan=False)


def mv(n):
    return st.lists(coeff, min_size=1 << n, max_size=1 << n).map(lambda c: Multivector(n, c))


@settings(max_examples=60, deadline=None)
@given(mv(3), mv(3), mv(3))
def test_clifford_is_associative_and_distributive(A, B, C):
    assert ga.allclose(ga.clifford(ga.clifford(A, B), C), ga.clifford(A, ga.clifford(B, C)),
                       atol=1e-11)
    assert ga.allclose(ga.clifford(A, B + C), ga.clifford(A, B) + ga.clifford(A, C), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(mv(3), mv(3), mv(3))
def test_wedge_is_associative(A, B, C):
    assert ga.allclose(ga.wedge(ga.wedge(A, B), C), ga.wedge(A, ga.wedge(B, C)), atol=1e-11)


@settings(max_examples=60, deadline=None)
@given(mv(4), mv(4))
def test_scalar_product_is_reverse_clifford_scalar_part(A, B):
    expected = ga.grade_project(ga.clifford(ga.reverse(A), B), 0)[0]
    assert ga.scalar_product(A, B) == pytest.approx(expected, abs=1e-12)
    assert ga.norm(A) ** 2 == pytest.approx(ga.scalar_product(A, A), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(mv(3), mv(3))
def test_reverse_is_anti_automorphism(A, B):
    assert ga.allclose(ga.reverse(ga.clifford(A, B)), ga.clifford(ga.reverse(B), ga.reverse(A)),
                       atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=3, max_size=3), st.lists(coeff, min_size=3, max_size=3))
def test_vector_anticommutator(a, b):
    a, b = Multivector.vector(a), Multivector.vector(b)
    lhs = ga.clifford(a, b) + ga.clifford(b, a)
    assert ga.allclose(lhs, Multivector.scalar(3, 2 * ga.scalar_product(a, b)), atol=1e-12)


def test_all_grade_pairs_in_dimension_five_commute_correctly():
    # wedge of homogeneous parts: A_r ^ B_s = (-1)^{rs} B_s ^ A_r
    rng = np.random.default_rng(11)
    for r, s in itertools.product(range(6), repeat=2):
        A = ga.grade_project(Multivector(5, rng.normal(size=32)), r)
        B = ga.grade_project(Multivector(5, rng.normal(size=32)), s)
        assert ga.allclose(ga.wedge(A, B), (-1) ** (r * s) * ga.wedge(B, A), atol=1e-12)
