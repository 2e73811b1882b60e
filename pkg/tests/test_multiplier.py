import pytest

from src.scalars.scalars import Ring, InputError, InternalInconsistencyError
from src.finalg.finalg import is_unital, tensor_product, opposite
from src.azumaya.elementary import dual_pair, perfect_pair, elementary_from_pair
from src.multiplier.multiplier import (
    multiplier_algebra, canonical_embedding, elementary_multiplier_model,
    is_ideal_image, unit_inverse,
)

PAIRS = {
    "first": (2, 1, [[1, 0]]),
    "second": (1, 2, [[0], [1]]),
    "perfect2": (2, 2, [[1, 0], [0, 1]]),
    "skew2": (2, 2, [[1, 2], [3, 4]]),
    "rank1": (2, 2, [[1, 1], [1, 1]]),
    "wide": (3, 2, [[1, 0, 0], [0, 1, 0]]),
}


@pytest.fixture
def first_pair(F5):
    return dual_pair(F5, 2, 1, [[1, 0]])


def test_first_pair_has_no_identity_but_is_unital(first_pair):
    E = elementary_from_pair(first_pair).algebra
    assert E.dim == 2
    assert not E.has_identity
    assert is_unital(E).unital


def test_multiplier_algebra_of_first_pair(first_pair):
    E = elementary_from_pair(first_pair).algebra
    M = multiplier_algebra(E)
    assert M.dim == 3
    assert M.algebra.has_identity
    for s in range(M.dim):
        assert M.multiplier(M.algebra.basis_vector(s)).defect() is None


def test_embedding_is_an_ideal(first_pair):
    E = elementary_from_pair(first_pair).algebra
    M = multiplier_algebra(E)
    embedding = canonical_embedding(E, M)
    assert embedding.is_injective()
    assert embedding.matrix.shape == (3, 2)
    assert is_ideal_image(M, embedding)


def test_embedding_with_two_sided_annihilator(first_pair):
    E = elementary_from_pair(first_pair).algebra
    T = tensor_product(E, opposite(E))
    M = multiplier_algebra(T)
    assert (T.dim, M.dim) == (4, 5)
    with pytest.raises(InternalInconsistencyError):
        canonical_embedding(T, M)
    embedding = canonical_embedding(T, M, require_injective=False)
    assert not embedding.is_injective()
    assert is_ideal_image(M, embedding)


def test_multiplier_of_algebra_with_identity(m2_f5):
    M = multiplier_algebra(m2_f5)
    assert M.dim == 4
    assert canonical_embedding(m2_f5, M).is_bijective()


@pytest.mark.parametrize("name", sorted(PAIRS))
def test_model_matches_multipliers(F5, name):
    m, mp, mu = PAIRS[name]
    model = elementary_multiplier_model(dual_pair(F5, m, mp, mu))
    assert model.algebra.dim == model.multipliers.dim
    assert model.alpha.is_bijective()
    assert model.beta.is_bijective()


def test_model_dimension_first_pair(first_pair):
    assert elementary_multiplier_model(first_pair).algebra.dim == 3


def test_residue_ring_without_identity_is_rejected():
    Z4 = Ring.residue_ring(4)
    E = elementary_from_pair(dual_pair(Z4, 2, 1, [[1, 0]])).algebra
    with pytest.raises(InputError):
        multiplier_algebra(E)


def test_unit_inverse(m2_f5):
    ring = m2_f5.ring
    x = ring.array([1, 1, 0, 1])
    y = unit_inverse(m2_f5, x)
    assert list(y) == [1, 4, 0, 1]
    assert unit_inverse(m2_f5, ring.array([1, 0, 0, 0])) is None
    assert elementary_from_pair(perfect_pair(ring, 2)).algebra.dim == 4
