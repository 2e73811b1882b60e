import numpy as np
import pytest
from fractions import Fraction

from src.scalars.scalars import Ring, Scalar, InputError, parse_scalar, encode_array
from src.scalars.linalg import (Mat, NoSolutionError, rank, nullspace, solve, solve_linear,
                                inverse, scalar_ratio, span_contains, kron)
from src.scalars.smith import smith_normal_form, invariant_factors, int_matmul, int_matrix
from src.scalars.units import unit_group, UnitGroupError


def test_ring_literals():
    assert Ring.parse("GF(5)") == Ring.prime_field(5)
    assert Ring.parse(" Z/8 ") == Ring.residue_ring(8)
    assert Ring.parse("Q") == Ring.rationals()
    assert Ring.parse("GF(7)").literal == "GF(7)"
    for bad in ["GF(6)", "Z/1", "R", "GF(x)"]:
        with pytest.raises(InputError):
            Ring.parse(bad)


def test_scalar_arithmetic():
    F5 = Ring.prime_field(5)
    a = Scalar(F5, 3)
    assert int(a * 2) == 1
    assert int(a.inverse()) == 2
    assert int(a ** 4) == 1
    assert int(-a) == 2
    Z8 = Ring.residue_ring(8)
    assert not Scalar(Z8, 4).is_unit()
    with pytest.raises(ZeroDivisionError):
        Z8.inv(2)
    Q = Ring.rationals()
    assert Q.div(1, 3) == Fraction(1, 3)
    assert parse_scalar(Q, "-2/6") == Fraction(-1, 3)
    assert parse_scalar(F5, "1/2") == 3


def test_scalar_rejects_bool_and_ring_mismatch():
    with pytest.raises(InputError):
        parse_scalar(Ring.prime_field(5), True)
    with pytest.raises(InputError):
        Scalar(Ring.prime_field(5), 1) + Scalar(Ring.prime_field(7), 1)


def test_encode_rationals():
    Q = Ring.rationals()
    assert encode_array(Q, Q.array([[1, "1/2"], ["-3/4", 0]])) == [[1, "1/2"], ["-3/4", 0]]


def test_rank_and_nullspace_over_fields():
    F5 = Ring.prime_field(5)
    M = F5.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(F5, M) == 2
    N = nullspace(F5, M)
    assert N.shape == (3, 1)
    assert F5.is_zero_array(F5.dot(M, N))
    Q = Ring.rationals()
    assert rank(Q, Q.array([[1, "1/2"], [2, 1]])) == 1


def test_solve_and_certificate():
    F7 = Ring.prime_field(7)
    A = F7.array([[1, 1], [1, 1]])
    with pytest.raises(NoSolutionError) as info:
        solve(F7, A, F7.array([1, 2]))
    y = info.value.certificate
    assert F7.is_zero_array(F7.dot(y, A))
    assert not F7.is_zero(F7.dot(y, F7.array([1, 2])))
    x = solve(F7, F7.array([[2, 0], [0, 3]]), F7.array([1, 1]))
    assert list(x) == [4, 5]


def test_solve_over_residue_ring():
    Z6 = Ring.residue_ring(6)
    A = Z6.array([[2]])
    x = solve(Z6, A, Z6.array([4]))
    assert (2 * int(x[0])) % 6 == 4
    with pytest.raises(NoSolutionError) as info:
        solve(Z6, A, Z6.array([1]))
    y = info.value.certificate
    assert (int(y[0]) * 2) % 6 == 0
    assert int(y[0]) % 6 != 0


def test_solve_linear_on_mats():
    F5 = Ring.prime_field(5)
    A = Mat.from_rows(F5, [[1, 1, 0], [0, 1, 1]])
    b = Mat.from_rows(F5, [[1], [2]])
    sol = solve_linear(A, b)
    assert A @ sol.particular == b
    assert sol.nullspace.cols == 1
    assert (A @ sol.nullspace) == Mat.zeros(F5, 2, 1)


def test_inverse_and_singular():
    Q = Ring.rationals()
    M = Q.array([[2, 1], [1, 1]])
    assert Q.equal_arrays(Q.dot(M, inverse(Q, M)), Q.eye(2))
    with pytest.raises(NoSolutionError):
        inverse(Q, Q.array([[1, 2], [2, 4]]))


def test_span_helpers():
    F3 = Ring.prime_field(3)
    G = F3.array([[1, 0], [0, 1], [1, 1]])
    assert span_contains(F3, G, F3.array([2, 1, 0]))
    assert not span_contains(F3, G, F3.array([0, 0, 1]))
    assert scalar_ratio(F3, F3.array([2, 2]), F3.array([1, 1])) == 2
    assert scalar_ratio(F3, F3.array([2, 1]), F3.array([1, 1])) is None
    assert kron(F3, F3.eye(2), F3.array([[1, 2]])).shape == (2, 4)


def test_smith_normal_form():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    U, D, V = smith_normal_form(A)
    assert np.array_equal(int_matmul(int_matmul(U, int_matrix(A)), V), D)
    assert invariant_factors(A) == [2, 6, 12]
    assert invariant_factors([[0, 0], [0, 0]]) == []


@pytest.mark.parametrize("A", [
    [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
    [[12, 6, 4], [3, 9, 6], [2, 16, 14]],
    [[6, 0], [0, 4], [0, 0]],
    [[1, 2, 3, 4]],
])
def test_invariant_factors_agree_with_sympy(A):
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form as sympy_smith

    D = sympy_smith(Matrix(A), domain=ZZ)
    expected = [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]
    assert invariant_factors(A) == expected


@pytest.mark.parametrize("literal, factors", [
    ("GF(7)", [6]),
    ("GF(2)", []),
    ("Z/8", [2, 2]),
    ("Z/15", [2, 4]),
])
def test_unit_group_factors(literal, factors):
    ring = Ring.parse(literal)
    presentation = unit_group(ring)
    assert presentation.invariant_factors == factors
    for u in ring.units():
        assert presentation.element(presentation.log(u)) == u


def test_unit_group_caps():
    with pytest.raises(UnitGroupError):
        unit_group(Ring.rationals())
    with pytest.raises(UnitGroupError):
        unit_group(Ring.prime_field(101), max_units=50)
