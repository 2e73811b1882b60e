import numpy as np
import pytest

from src.finalg.finalg import matrix_algebra
from src.azumaya.elementary import DualPairError, dual_pair, perfect_pair
from src.grouplib.groups import cyclic
from src.grouplib.cohomology import make_cocycle, trivial_cocycle
from src.graded.galois import crossed_product, galois_classes_equal, class_is_trivial
from src.equivariant.gmodule import (
    ActionError, make_gmodule, conjugation_action, trivial_action, tensor_gmodule, ground_gmodule,
)
from src.equivariant.smash import smash_product, balanced_square_check
from src.equivariant.pi import pi_galois, commutant_check, anti_hom_p, graded_component_endos
from src.equivariant.inner import (
    strongly_inner_witness, compare_with_pi_lifts, extended_action,
    g_dual_pair, elementary_g_module, pair_witness, recover_pair, pair_rescaling,
)
from src.equivariant.splitting import smash_with_dual, split_and_verify, cotensor_comparison

SWAP = [[0, 1], [1, 0]]


@pytest.fixture
def C2():
    return cyclic(2)


@pytest.fixture
def m2u(m2_f5, C2):
    return conjugation_action(m2_f5, C2, {1: [[0, 1], [2, 0]]}, name="M2u")


@pytest.fixture
def m2d(m2_f5, C2):
    return conjugation_action(m2_f5, C2, {1: [[1, 0], [0, 4]]}, name="M2d")


@pytest.fixture
def cross2(F5, C2):
    return crossed_product(F5, C2, make_cocycle(C2, F5, [[1, 1], [1, 2]]))


def test_invalid_actions_are_rejected(m2_f5, C2):
    ring = m2_f5.ring
    transpose = ring.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    with pytest.raises(ActionError):
        make_gmodule(m2_f5, C2, np.stack([ring.eye(4), transpose]))
    with pytest.raises(ActionError):
        conjugation_action(m2_f5, C2, {1: [[1, 0], [0, 2]]})
    with pytest.raises(ActionError):
        conjugation_action(m2_f5, C2, {1: [[1, 1], [1, 1]]})


def test_smash_product_of_conjugation(m2u):
    S = smash_product(m2u)
    assert S.dim == 8
    assert S.algebra.has_identity
    assert balanced_square_check(S).passed


def test_pi_of_nontrivial_conjugation(m2u, cross2):
    pi = pi_galois(m2u)
    assert pi.dim == 2
    assert pi.decomposition_independent
    assert not class_is_trivial(pi.galois)
    assert galois_classes_equal(pi.galois, cross2).equal
    ring = pi.galois.ring
    value = ring.div(pi.galois.cocycle.values[1, 1], 3)
    assert any(ring.mul(r, r) == value for r in ring.units())


def test_pi_of_trivial_and_ground(m2_f5, C2, F5):
    assert class_is_trivial(pi_galois(trivial_action(m2_f5, C2)).galois)
    pi_k = pi_galois(ground_gmodule(F5, C2))
    assert pi_k.dim == 2 and class_is_trivial(pi_k.galois)


def test_commutant_and_anti_hom(m2u):
    pi = pi_galois(m2u)
    report = commutant_check(m2u, pi)
    assert report.passed
    assert report.commutant_dim == report.pi_dim == 2
    p = anti_hom_p(m2u, pi)
    assert p.anti and p.is_injective()


def test_strongly_inner_diagonal_conjugation(m2d):
    pi = pi_galois(m2d)
    decision = strongly_inner_witness(m2d, pi)
    assert decision.strongly_inner and decision.pi_trivial
    assert decision.witness.defect() is None
    assert compare_with_pi_lifts(decision, pi).passed
    extended = extended_action(decision.witness)
    assert extended.dim == 4


def test_not_strongly_inner_conjugation(m2u):
    decision = strongly_inner_witness(m2u)
    assert not decision.strongly_inner
    assert not decision.pi_trivial
    assert decision.lift_cocycle is not None
    assert "coboundary" in decision.note


def test_equivariant_dual_pair_round_trip(F5, C2):
    P = g_dual_pair(perfect_pair(F5, 2), C2, np.stack([F5.eye(2), F5.array(SWAP)]),
                    np.stack([F5.eye(2), F5.array(SWAP)]))
    E = elementary_g_module(P)
    witness = pair_witness(P, E)
    assert witness.defect() is None
    Q = recover_pair(P.pair, witness)
    assert pair_rescaling(P, Q) is not None
    assert class_is_trivial(pi_galois(E).galois)


def test_pairing_must_be_invariant(F5, C2):
    with pytest.raises(DualPairError):
        g_dual_pair(perfect_pair(F5, 2), C2, np.stack([F5.eye(2), F5.array(SWAP)]),
                    np.stack([F5.eye(2), F5.eye(2)]))


def test_non_unital_elementary_with_trivial_action(F5, C2):
    P = g_dual_pair(dual_pair(F5, 2, 1, [[1, 0]]), C2, np.stack([F5.eye(2)] * 2), np.stack([F5.eye(1)] * 2))
    E = elementary_g_module(P, name="E21")
    assert not E.algebra.has_identity
    assert class_is_trivial(pi_galois(E).galois)
    assert strongly_inner_witness(E).strongly_inner


def test_commutant_of_identity_free_elementary(F5, C2):
    P = g_dual_pair(dual_pair(F5, 2, 1, [[1, 0]]), C2, np.stack([F5.eye(2), F5.array([[1, 0], [0, 4]])]),
                    np.stack([F5.eye(1)] * 2))
    E = elementary_g_module(P, name="E21s")
    assert not E.algebra.has_identity
    pi = pi_galois(E)
    report = commutant_check(E, pi)
    assert report.direct_formula is None
    assert report.mutually_inverse
    assert report.passed
    assert report.beta.compose(report.alpha).is_bijective()
    assert report.commutant_dim == report.pi_dim


def test_tensor_products_multiply_classes(m2u):
    pi_a = pi_galois(m2u)
    square = tensor_gmodule(m2u, m2u)
    pi_ab = pi_galois(square, check_azumaya=False)
    assert class_is_trivial(pi_ab.galois)
    assert cotensor_comparison(pi_a, pi_a, pi_ab).is_bijective()


@pytest.mark.parametrize("values", [[[1, 1], [1, 2]], [[1, 1], [1, 3]], [[1, 1], [1, 1]]])
def test_section_recovers_galois_object(F5, C2, values):
    B = crossed_product(F5, C2, make_cocycle(C2, F5, values))
    dual = smash_with_dual(B)
    assert dual.azumaya.passed
    assert dual.bracket.is_bijective()
    report = split_and_verify(B)
    assert report.passed
    assert report.verdicts()["elementary"] is True
    assert galois_classes_equal(report.pi.galois, B).equal


def test_section_on_trivial_cocycle_is_trivial(F5, C2):
    B = crossed_product(F5, C2, trivial_cocycle(C2, F5))
    assert class_is_trivial(split_and_verify(B).pi.galois)


def test_graded_component_endos_are_lines(m2u, m2d):
    for A in (m2u, m2d):
        for g in A.group.elements():
            assert graded_component_endos(A, g).shape[0] == 1
