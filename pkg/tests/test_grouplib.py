import pytest

from src.scalars.scalars import Ring, CapExceededError, InputError
from src.grouplib.groups import (
    GroupAxiomError, cyclic, direct_product, symmetric_group, parse_group, from_table,
)
from src.grouplib.cohomology import (
    CocycleError, make_cocycle, trivial_cocycle, second_cohomology, is_coboundary,
    cohomologous, brute_force_h2_order,
)
from src.grouplib.dual import group_algebra, dual_function_algebra


def test_parse_group_names():
    assert parse_group("C3").order == 3
    V = parse_group("C2xC2")
    assert V.order == 4 and V.is_abelian()
    S3 = parse_group("S3")
    assert S3.order == 6 and not S3.is_abelian()
    assert S3.exponent() == 6
    with pytest.raises(InputError):
        parse_group("D4")
    with pytest.raises(CapExceededError):
        parse_group("C5xC5", max_order=24)


def test_table_axioms():
    assert from_table([[0, 1], [1, 0]]).identity == 0
    with pytest.raises(GroupAxiomError):
        from_table([[0, 1], [1, 1]])
    with pytest.raises(GroupAxiomError):
        from_table([[0, 2], [1, 0]])


def test_symmetric_group_composition():
    S3 = symmetric_group(3)
    for g in S3.elements():
        assert S3.mul(g, S3.inv(g)) == S3.identity
    assert len(S3.closure(S3.generators())) == 6


def test_direct_product_indexing():
    G = direct_product(cyclic(2), cyclic(3))
    assert G.order == 6 and G.is_abelian()
    assert G.element_order(G.mul(3, 1)) == 6


def test_cocycle_validation():
    C2 = cyclic(2)
    F5 = Ring.prime_field(5)
    alpha = make_cocycle(C2, F5, [[1, 1], [1, 2]])
    assert alpha.is_normalized()
    with pytest.raises(CocycleError):
        make_cocycle(C2, F5, [[1, 1], [1, 0]])
    with pytest.raises(CocycleError):
        make_cocycle(C2, F5, [[1, 2], [1, 1]])


@pytest.mark.parametrize("group, ring, factors", [
    ("C2", "GF(5)", [2]),
    ("C3", "GF(7)", [3]),
    ("C2", "GF(3)", [2]),
    ("C3", "GF(5)", []),
])
def test_h2_of_cyclic_groups(group, ring, factors):
    H = second_cohomology(parse_group(group), Ring.parse(ring))
    assert H.invariant_factors == factors
    for alpha in H.representatives:
        assert alpha.defect() is None


def test_h2_klein_matches_brute_force():
    V = parse_group("C2xC2")
    F3 = Ring.prime_field(3)
    H = second_cohomology(V, F3)
    assert H.order == brute_force_h2_order(V, F3)
    assert H.order == 8


def test_h2_representative_is_not_a_coboundary():
    H = second_cohomology(cyclic(2), Ring.prime_field(5))
    (alpha,) = H.representatives
    assert not is_coboundary(alpha)
    assert is_coboundary(alpha * alpha)


def test_coboundary_witness_over_finite_field():
    C3 = cyclic(3)
    F7 = Ring.prime_field(7)
    b = [1, 2, 3]
    values = [[F7.div(F7.mul(b[g], b[h]), b[C3.mul(g, h)]) for h in range(3)] for g in range(3)]
    result = is_coboundary(make_cocycle(C3, F7, values))
    assert result.coboundary
    assert len(result.witness) == 3
    assert cohomologous(make_cocycle(C3, F7, values), trivial_cocycle(C3, F7))


def test_coboundary_over_rationals():
    C2 = cyclic(2)
    Q = Ring.rationals()
    assert not is_coboundary(make_cocycle(C2, Q, [[1, 1], [1, -1]]))
    result = is_coboundary(make_cocycle(C2, Q, [[1, 1], [1, 4]]))
    assert result.coboundary
    assert result.witness[1] ** 2 == 4


def test_brute_force_cap():
    with pytest.raises(CapExceededError):
        brute_force_h2_order(parse_group("C2xC2"), Ring.prime_field(5), max_candidates=100)


def test_group_algebra_grading():
    kG = group_algebra(Ring.prime_field(5), cyclic(2))
    assert kG.algebra.dim == 2
    assert kG.algebra.is_commutative()


def test_dual_function_algebra_hopf_identities():
    kG = dual_function_algebra(Ring.prime_field(7), symmetric_group(3))
    assert all(kG.checks.values())
    assert kG.algebra.dim == 6
