import json

import pytest

from src.scalars.scalars import CapExceededError
from src.finalg.finalg import AlgebraMap
from src.scenario.scenario import ScenarioError, parse_scenario, load_scenario, first_of
from src.scenario.corpus import BUNDLED, bundled_path, load_bundled
from src.scenario.report import Report, verify_report, check_certificate, iter_certificates, load_report


def _minimal(**sections):
    return {"schema": 1, "ring": "GF(5)", "group": "C2", **sections}


@pytest.mark.parametrize("name", sorted(BUNDLED))
def test_bundled_fixtures_parse(name):
    scenario = load_bundled(name)
    assert len(scenario.sha256) == 64
    assert scenario.summary()["name"] == scenario.name


def test_corpus_fixture_contents():
    scenario = load_bundled("gf5_c2")
    assert scenario.ring.literal == "GF(5)"
    assert set(scenario.gmodules) == {"M2", "M2u", "M2d", "Eswap", "k", "E21"}
    assert set(scenario.galois) == {"kG", "cross2", "cross3", "sqrt2"}
    assert "Eswap" in scenario.g_pairs
    corpus = scenario.corpus()
    assert corpus.group.order == 2
    assert len(corpus.gmodules) == 6


def test_hash_ignores_key_order():
    a = parse_scenario(_minimal(algebras={"M2": {"matrix": 2}, "T": {"truncated": [2, 0]}}))
    b = parse_scenario({"algebras": {"T": {"truncated": [2, 0]}, "M2": {"matrix": 2}},
                        "group": "C2", "ring": "GF(5)", "schema": 1})
    assert a.sha256 == b.sha256


def test_schema_and_ring_are_required():
    with pytest.raises(ScenarioError) as info:
        parse_scenario({"schema": 2, "ring": "GF(5)"})
    assert info.value.location == "schema"
    with pytest.raises(ScenarioError) as info:
        parse_scenario({"schema": 1})
    assert info.value.location == "ring"
    with pytest.raises(ScenarioError):
        parse_scenario({"schema": 1, "ring": "GF(6)"})
    with pytest.raises(ScenarioError):
        parse_scenario([1, 2, 3])


def test_unknown_section_is_rejected():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(_minimal(extras={}))
    assert "extras" in str(info.value)


def test_block_errors_carry_their_location():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(_minimal(algebras={"bad": {"dim": 2, "sc": [[[0, 1], [0, 0]], [[1, 0], [0, 0]]]}}))
    assert info.value.location.startswith("algebras.bad")
    with pytest.raises(ScenarioError) as info:
        parse_scenario(_minimal(gmodules={"A": {"algebra": "missing"}}))
    assert info.value.location == "gmodules.A.algebra"
    with pytest.raises(ScenarioError):
        parse_scenario(_minimal(algebras={"M": {"matrix": 2, "truncated": [1, 0]}}))


def test_group_is_needed_for_group_blocks():
    with pytest.raises(ScenarioError) as info:
        parse_scenario({"schema": 1, "ring": "GF(5)", "algebras": {"kG": {"group_algebra": True}}})
    assert "group" in str(info.value)


def test_non_galois_block_is_rejected():
    data = _minimal(algebras={"N": {"truncated": [0, 0]}},
                    galois={"nil": {"algebra": "N", "grading": {"degrees": [0, 1]}}})
    with pytest.raises(ScenarioError) as info:
        parse_scenario(data)
    assert info.value.location == "galois.nil"


def test_graded_section_keeps_non_galois_gradings():
    data = _minimal(algebras={"M2": {"matrix": 2}},
                    graded={"check": {"algebra": "M2", "grading": {"degrees": [0, 1, 1, 0]}}})
    scenario = parse_scenario(data)
    assert "check" in scenario.graded


def test_group_elements_by_label_and_range():
    data = _minimal(algebras={"M2": {"matrix": 2}},
                    gmodules={"A": {"algebra": "M2", "conjugation": {"5": [[0, 1], [2, 0]]}}})
    with pytest.raises(ScenarioError) as info:
        parse_scenario(data)
    assert "out of range" in str(info.value)


def test_dimension_cap():
    with pytest.raises(ScenarioError):
        parse_scenario(_minimal(algebras={"M3": {"matrix": 3}}), max_dim=8)
    with pytest.raises((ScenarioError, CapExceededError)):
        parse_scenario({"schema": 1, "ring": "GF(5)", "group": "C5"}, max_group=4)


def test_invalid_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json")
    with pytest.raises(ScenarioError):
        load_scenario(str(path))


def test_first_of():
    scenario = load_bundled("m2_conjugation")
    name, _ = first_of(scenario.gmodules, "gmodules")
    assert name == "M2u"
    with pytest.raises(ScenarioError):
        first_of({}, "galois")


def test_bundled_path_points_at_scenarios():
    assert bundled_path("gf7_c3").endswith("gf7_c3_corpus.json")


def test_report_hash_and_tampering(m2_f5, tmp_path):
    report = Report("example", "0.1.0")
    report.check("first", True)
    report.details["note"] = {"value": 3}
    report.certificates.append(AlgebraMap(m2_f5, m2_f5, m2_f5.ring.eye(4)).certificate())
    path = tmp_path / "report.json"
    report.write(str(path))

    data = load_report(str(path))
    outcome = verify_report(data)
    assert outcome == {"hash_ok": True, "certificates": 1, "failures": []}

    data["body"]["details"]["note"]["value"] = 4
    assert not verify_report(data)["hash_ok"]


def test_report_dumps_is_deterministic():
    first, second = Report("x", "0.1.0"), Report("x", "0.1.0")
    for report in (first, second):
        report.check("b", True)
        report.check("a", False)
    assert json.loads(first.dumps())["body_sha256"] == json.loads(second.dumps())["body_sha256"]
    assert not first.passed
    assert "FAIL" in first.scoreboard()


def test_broken_certificate_is_reported(m2_f5):
    cert = AlgebraMap(m2_f5, m2_f5, m2_f5.ring.eye(4)).certificate()
    assert check_certificate(cert) is None
    cert["matrix"] = [[0] * 4 for _ in range(4)]
    assert check_certificate(cert) is not None
    assert check_certificate({"kind": "isomorphism"}) is not None


def test_certificates_are_found_anywhere():
    body = {"a": [{"kind": "isomorphism", "x": 1}], "b": {"c": {"kind": "isomorphism"}}}
    assert len(list(iter_certificates(body))) == 2
