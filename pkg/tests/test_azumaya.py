import pytest
from fractions import Fraction

from src.finalg.finalg import matrix_algebra, truncated_polynomial
from src.azumaya.elementary import DualPairError, dual_pair, elementary_from_pair
from src.azumaya.azumaya import (
    NotTaylorAzumayaError, BrauerClass, is_taylor_azumaya, require_taylor_azumaya,
    is_elementary, morita_equivalent, brauer_product, brauer_inverse,
)
from src.azumaya.quaternion import (
    quaternion_algebra, hilbert_symbol, split_report, zero_divisor, norm_form_solution,
)


def test_matrix_algebra_is_azumaya_and_elementary(m2_f5):
    cert = is_taylor_azumaya(m2_f5)
    assert cert.passed
    assert set(cert.stages) == {"unital", "faithful", "central", "projective", "generator"}
    result = is_elementary(m2_f5)
    assert result.elementary
    assert result.method == "pair"
    assert result.isomorphism.is_bijective()


def test_non_unital_elementary_algebra(F5):
    E = elementary_from_pair(dual_pair(F5, 2, 1, [[1, 0]])).algebra
    assert is_taylor_azumaya(E).passed
    found = is_elementary(E)
    assert found.elementary and found.pair.dim == 2


@pytest.mark.parametrize("coeffs, stage", [([0, 0], "central"), ([2, 0], "central")])
def test_commutative_algebras_fail_central(F5, coeffs, stage):
    cert = is_taylor_azumaya(truncated_polynomial(F5, coeffs))
    assert not cert
    assert cert.failed_stage == stage
    with pytest.raises(NotTaylorAzumayaError):
        require_taylor_azumaya(truncated_polynomial(F5, coeffs))


def test_dual_pair_must_be_surjective(F5):
    with pytest.raises(DualPairError):
        dual_pair(F5, 2, 1, [[0, 0]])
    with pytest.raises(DualPairError):
        dual_pair(F5, 2, 2, [[1, 0]])


def test_hamilton_quaternions(Q):
    H = quaternion_algebra(-1, -1)
    assert is_taylor_azumaya(H).passed
    assert not is_elementary(H).elementary
    report = split_report(-1, -1)
    assert not report.split
    assert report.ramified == ["inf", "2"]
    assert zero_divisor(-1, -1) is None


def test_split_quaternion_is_morita_trivial(Q):
    assert split_report(1, 1).split
    left, right = zero_divisor(1, 1)
    assert not Q.is_zero_array(left) and not Q.is_zero_array(right)
    result = morita_equivalent(quaternion_algebra(1, 1), matrix_algebra(Q, 2))
    assert result.elementary


@pytest.mark.parametrize("a, b, split", [
    (2, -1, True),
    (5, -1, True),
    (-1, 3, False),
    (Fraction(1, 2), Fraction(-1, 3), False),
])
def test_split_reports(a, b, split):
    assert split_report(a, b).split == split
    if split:
        assert norm_form_solution(a, b) is not None


def test_hilbert_symbols():
    assert hilbert_symbol(-1, 3, 3) == -1
    assert hilbert_symbol(-1, 3, "inf") == 1
    assert hilbert_symbol(2, 3, 5) == 1
    assert hilbert_symbol(-1, -1, "inf") == -1


def test_quaternions_over_a_finite_field_split(F5):
    H = quaternion_algebra(-1, -1, F5)
    assert is_taylor_azumaya(H).passed
    assert is_elementary(H).elementary


def test_brauer_class_arithmetic(m2_f5, F5):
    M = BrauerClass.of(m2_f5, "M2")
    assert M.is_trivial()
    H = BrauerClass.of(quaternion_algebra(2, 3, F5), "Q23")
    assert M.equals(M.inverse())
    assert (H * H.inverse()).is_trivial()


def test_brauer_product_of_representatives(m2_f5, F5):
    H = quaternion_algebra(2, 3, F5)
    product = brauer_product(m2_f5, H)
    assert product.dim == 16
    assert product.has_identity
    assert brauer_inverse(H).dim == 4
