import numpy as np
import pytest

from src.scalars.scalars import Ring, InputError, CapExceededError
from src.finalg.finalg import (
    FinAlgebra, AlgebraMap, NonAssociativeError, make_algebra, matrix_algebra,
    truncated_polynomial, tensor_product, opposite, ground_algebra, subalgebra,
    is_unital, unital_decomposition, center_endos, is_faithful, is_isomorphism,
)


BROKEN_SC = [[[0, 1], [0, 0]], [[1, 0], [0, 0]]]


def test_identity_is_detected(m2_f5):
    assert m2_f5.has_identity
    assert list(m2_f5.identity) == [1, 0, 0, 1]
    plain = make_algebra(m2_f5.ring, 4, m2_f5.sc)
    assert m2_f5.ring.equal_arrays(plain.identity, m2_f5.identity)


def test_non_associative_is_rejected(F5):
    with pytest.raises(NonAssociativeError) as info:
        make_algebra(F5, 2, BROKEN_SC)
    assert info.value.witness is not None


def test_bad_shapes_and_caps(F5):
    with pytest.raises(InputError):
        make_algebra(F5, 2, [[[1]]])
    with pytest.raises(CapExceededError):
        make_algebra(F5, 3, np.zeros((3, 3, 3), dtype=int), max_dim=2)
    with pytest.raises(InputError):
        make_algebra(F5, 1, [[[1]]], identity=[2])


def test_matrix_units_multiply(m2_f5):
    e12, e21, e11 = (m2_f5.basis_vector(i) for i in (1, 2, 0))
    assert list(m2_f5.product(e12, e21)) == list(e11)
    assert not m2_f5.is_commutative()


def test_truncated_polynomial(sqrt2_f5):
    x = sqrt2_f5.basis_vector(1)
    assert list(sqrt2_f5.product(x, x)) == [2, 0]
    assert sqrt2_f5.is_commutative()


def test_tensor_product_dimension(m2_f5, sqrt2_f5):
    T = tensor_product(m2_f5, sqrt2_f5)
    assert T.dim == 8
    assert T.has_identity


def test_transpose_is_anti_automorphism(m2_f5):
    P = m2_f5.ring.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    F = AlgebraMap(m2_f5, m2_f5, P, anti=True)
    assert F.is_bijective()
    assert is_isomorphism(m2_f5, opposite(m2_f5), P)
    with pytest.raises(InputError):
        AlgebraMap(m2_f5, m2_f5, P)


def test_certificate_shape(m2_f5):
    cert = AlgebraMap(m2_f5, m2_f5, m2_f5.ring.eye(4)).certificate()
    assert cert["kind"] == "isomorphism"
    assert cert["source"]["dim"] == 4
    assert cert["matrix"][0] == [1, 0, 0, 0]


def test_unital_without_identity(m2_f5):
    bare = FinAlgebra(m2_f5.ring, 4, m2_f5.sc, None, m2_f5.labels)
    cert = is_unital(bare)
    assert cert.unital and cert.reason == "bijective"
    T = unital_decomposition(bare)
    ring = m2_f5.ring
    for a in range(4):
        total = ring.zeros(4)
        for i in range(4):
            for j in range(4):
                total = ring.reduce(total + T[a, i, j] * m2_f5.sc[i, j])
        assert list(total) == list(m2_f5.basis_vector(a))


def test_not_unital_nilpotent(F5):
    nil = make_algebra(F5, 1, [[[0]]])
    cert = is_unital(nil)
    assert not cert
    assert cert.reason == "not surjective"


def test_center_of_matrix_algebra(m2_f5, sqrt2_f5):
    assert center_endos(m2_f5).dim == 1
    assert center_endos(sqrt2_f5).dim == 2


def test_subalgebra_of_diagonal(m2_f5):
    basis = m2_f5.ring.array([[1, 0], [0, 0], [0, 0], [0, 1]])
    D = subalgebra(m2_f5, basis, identity=m2_f5.identity)
    assert D.dim == 2 and D.is_commutative()
    with pytest.raises(InputError):
        subalgebra(m2_f5, m2_f5.ring.array([[0], [1], [1], [0]]))


def test_faithfulness():
    Z4 = Ring.residue_ring(4)
    assert is_faithful(ground_algebra(Z4))
    assert not is_faithful(make_algebra(Z4, 1, [[[2]]], detect_identity=False))
