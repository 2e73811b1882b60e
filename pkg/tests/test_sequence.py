import pytest

from src.scalars.scalars import InputError
from src.scenario.corpus import load_bundled
from src.equivariant.sequence import CLAUSES, Corpus, equivariant_morita, verify_exact_sequence
from src.equivariant.gmodule import ground_gmodule, tensor_gmodule, opposite_gmodule
from src.equivariant.inner import strongly_inner_witness
from src.scenario.scenario import parse_scenario


@pytest.fixture(scope="module")
def gf5():
    return load_bundled("gf5_c2")


@pytest.fixture(scope="module")
def gf5_report(gf5):
    return verify_exact_sequence(gf5.corpus())


def test_all_clauses_hold_over_gf5(gf5_report):
    assert gf5_report.passed
    assert gf5_report.verdicts() == {name: True for name in CLAUSES}
    assert gf5_report.certificates()


def test_kernel_entries(gf5_report):
    entries = {entry["algebra"]: entry for entry in gf5_report.clauses["kernel"].entries}
    assert entries["M2d"]["pi_trivial"] and entries["M2d"]["strongly_inner"]
    assert entries["M2d"]["trivialization"]
    assert not entries["M2u"]["pi_trivial"]
    assert not entries["M2u"]["equivariantly_trivial"]


def test_split_clause_covers_every_galois_object(gf5, gf5_report):
    assert len(gf5_report.clauses["split_surjective"].entries) == len(gf5.galois)


def test_encode_has_every_clause(gf5_report):
    encoded = gf5_report.encode()
    assert encoded["corpus"] == "gf5_c2"
    assert set(encoded["clauses"]) == set(CLAUSES)


def test_caps_skip_instead_of_failing(gf5):
    report = verify_exact_sequence(gf5.corpus(), max_morita_dim=1, max_product_dim=1)
    assert report.clauses["well_defined"].skipped
    assert report.clauses["multiplicative"].skipped
    assert report.passed


def test_all_clauses_hold_over_gf7():
    report = verify_exact_sequence(load_bundled("gf7_c3").corpus())
    assert report.passed


def test_equivariant_morita(gf5):
    M2u = gf5.gmodules["M2u"]
    assert equivariant_morita(M2u, M2u).equivalent
    ground = ground_gmodule(gf5.ring, gf5.group)
    assert not equivariant_morita(M2u, ground).equivalent
    assert equivariant_morita(gf5.gmodules["M2d"], ground)


def test_identity_free_tensor_is_strongly_inner(gf5):
    E21 = gf5.gmodules["E21"]
    T = tensor_gmodule(E21, opposite_gmodule(E21))
    assert not T.algebra.has_identity
    decision = strongly_inner_witness(T, check_azumaya=False)
    assert decision.strongly_inner and decision.pi_trivial
    assert decision.witness.defect() is None


def test_equivariant_morita_without_identity(gf5):
    E21 = gf5.gmodules["E21"]
    verdict = equivariant_morita(E21, E21)
    assert verdict.equivalent
    assert verdict.inner.witness.defect() is None
    assert equivariant_morita(E21, gf5.gmodules["k"]).equivalent


def test_member_named_like_a_product_keeps_its_own_pi():
    scenario = parse_scenario({
        "schema": 1,
        "name": "lookalike",
        "ring": "GF(5)",
        "group": "C2",
        "algebras": {"M2": {"matrix": 2}, "k": {"dim": 1, "sc": [[[1]]], "identity": [1]}},
        "gmodules": {
            "M2u": {"algebra": "M2", "conjugation": {"1": [[0, 1], [2, 0]]}},
            "k": {"algebra": "k"},
            "M2u*k": {"algebra": "M2", "conjugation": {"1": [[1, 0], [0, 4]]}},
        },
    })
    report = verify_exact_sequence(scenario.corpus())
    assert report.passed
    kernel = {entry["algebra"]: entry for entry in report.clauses["kernel"].entries}
    assert kernel["M2u*k"]["pi_trivial"]
    assert not kernel["M2u"]["pi_trivial"]


def test_corpus_rejects_duplicates_and_foreign_members(gf5):
    M2u = gf5.gmodules["M2u"]
    with pytest.raises(InputError):
        Corpus("dup", gf5.ring, gf5.group, [M2u, M2u]).validate()
    other = load_bundled("gf7_c3")
    with pytest.raises(InputError):
        Corpus("mixed", gf5.ring, gf5.group, [M2u, next(iter(other.gmodules.values()))]).validate()
