import numpy as np
import pytest

from src.scalars.scalars import Ring, InputError
from src.finalg.finalg import truncated_polynomial
from src.grouplib.groups import cyclic, symmetric_group
from src.grouplib.cohomology import make_cocycle, trivial_cocycle
from src.grouplib.dual import group_algebra
from src.graded.graded import (
    GradingError, attach_grading, grading_from_degrees, trivial_grading, is_strongly_graded,
    component_table,
)
from src.graded.galois import (
    galois_check, require_galois, crossed_product, cotensor, galois_classes_equal, class_is_trivial,
)
from src.graded.miyashita import miyashita_properties, miyashita_action


@pytest.fixture
def C2():
    return cyclic(2)


def test_grading_rejects_products_leaving_degree(m2_f5, C2):
    with pytest.raises(GradingError) as info:
        grading_from_degrees(m2_f5, C2, [0, 0, 0, 1])
    assert info.value.witness is not None
    with pytest.raises(GradingError):
        grading_from_degrees(m2_f5, C2, [0, 1, 1])


def test_checkerboard_grading_is_strong_but_not_galois(m2_f5, C2):
    S = grading_from_degrees(m2_f5, C2, [0, 1, 1, 0])
    assert S.component_dims() == [2, 2]
    assert is_strongly_graded(S)
    check = galois_check(S)
    assert not check.is_galois
    assert check.reason == "S_e != k"


def test_trivial_grading_is_not_strong(sqrt2_f5, C2):
    S = trivial_grading(sqrt2_f5, C2)
    assert not is_strongly_graded(S)
    assert component_table(S) == {"e": 2, "g": 0}


def test_square_zero_is_not_galois(F5, C2):
    S = grading_from_degrees(truncated_polynomial(F5, [0, 0]), C2, [0, 1])
    check = galois_check(S)
    assert not check.is_galois
    assert not check.gamma_bijective
    assert check.kernel is not None
    with pytest.raises(InputError):
        require_galois(S)


def test_square_root_of_two_is_galois(sqrt2_f5, C2):
    check = galois_check(grading_from_degrees(sqrt2_f5, C2, [0, 1]))
    assert check.is_galois and check.strongly_graded
    assert check.galois.cocycle.values[1, 1] == 2


def test_crossed_products_and_classes(F5, C2, sqrt2_f5):
    cross3 = crossed_product(F5, C2, make_cocycle(C2, F5, [[1, 1], [1, 3]]))
    sqrt2 = require_galois(grading_from_degrees(sqrt2_f5, C2, [0, 1]))
    same = galois_classes_equal(cross3, sqrt2)
    assert same.equal
    assert same.isomorphism.is_bijective()
    kG = crossed_product(F5, C2, trivial_cocycle(C2, F5))
    assert not galois_classes_equal(sqrt2, kG)
    assert class_is_trivial(kG)
    assert not class_is_trivial(sqrt2)


def test_cotensor_multiplies_cocycles(sqrt2_f5, C2):
    sqrt2 = require_galois(grading_from_degrees(sqrt2_f5, C2, [0, 1]))
    square = cotensor(sqrt2, sqrt2)
    assert square.dim == 2
    assert square.cocycle.values[1, 1] == 4
    assert class_is_trivial(square)


def test_group_algebra_of_s3_miyashita():
    F7 = Ring.prime_field(7)
    kS3 = require_galois(group_algebra(F7, symmetric_group(3)))
    corrected = miyashita_properties(kS3, "corrected")
    assert corrected.passed
    literal = miyashita_properties(kS3, "literal")
    assert not literal.quantum_commutative
    assert "quantum_commutative" in literal.witnesses


def test_miyashita_identity_and_bad_convention(sqrt2_f5, C2):
    S = require_galois(grading_from_degrees(sqrt2_f5, C2, [0, 1]))
    ring = S.ring
    assert ring.equal_arrays(miyashita_action(S, 0), ring.eye(2))
    with pytest.raises(InputError):
        miyashita_action(S, 1, convention="sideways")


def test_attach_grading_from_projections(sqrt2_f5):
    F5 = sqrt2_f5.ring
    C2 = cyclic(2)
    projections = np.stack([F5.array([[1, 0], [0, 0]]), F5.array([[0, 0], [0, 1]])])
    S = attach_grading(sqrt2_f5, C2, projections, degrees=[0, 1])
    assert S.degrees == (0, 1)
    assert galois_check(S)

    with pytest.raises(GradingError):
        attach_grading(sqrt2_f5, C2, projections[::-1])
    with pytest.raises(GradingError):
        attach_grading(sqrt2_f5, C2, np.stack([F5.eye(2), F5.eye(2)]))
