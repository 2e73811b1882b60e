import json
import os

import pytest

from main import main

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def _json_body(capsys):
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("Step 1:")
    return json.loads(lines[-1])["body"]


def test_non_associative_fixture_exits_2(capsys):
    code = main(["check-azumaya", "--scenario", os.path.join(DATA_DIR, "broken_associativity.json")])
    assert code == 2
    assert "Input error" in capsys.readouterr().err


def test_missing_scenario_exits_2(tmp_path):
    assert main(["pi", "--scenario", str(tmp_path / "absent.json")]) == 2


def test_bad_limit_override_exits_2(capsys):
    assert main(["h2", "--max-dim", "0"]) == 2
    assert "max_dim" in capsys.readouterr().err


def test_bad_config_file_exits_2(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("miyashita:\n  convention: sideways\n")
    assert main(["h2", "--config", str(path)]) == 2


def test_h2_with_brute_force(capsys):
    assert main(["h2", "--json", "--brute-force"]) == 0
    row = _json_body(capsys)["details"]["h2"]
    assert row["invariant_factors"] == [2]
    assert row["brute_force_order"] == 2


def test_pi_classifies_conjugation(capsys):
    assert main(["pi", "--json"]) == 0
    body = _json_body(capsys)
    assert body["details"]["M2u"]["galois_class"] == "nontrivial"
    assert body["passed"]


def test_scoreboard_is_default(capsys):
    assert main(["crossed-product"]) == 0
    out = capsys.readouterr().out
    assert "Step 2: running crossed-product" in out
    assert "overall" in out and "PASS" in out


@pytest.mark.parametrize("command", ["check-azumaya", "multiplier", "cotensor", "smash", "split-galois",
                                     "miyashita"])
def test_commands_pass_on_bundled_scenarios(command):
    assert main([command]) == 0


def test_literal_miyashita_convention_fails(capsys):
    assert main(["miyashita", "--convention", "literal", "--json"]) == 1
    assert not _json_body(capsys)["passed"]


def test_verify_sequence(capsys):
    assert main(["verify-sequence", "--json"]) == 0
    checks = _json_body(capsys)["checks"]
    assert set(checks) == {"well_defined", "multiplicative", "split_surjective", "kernel"}


def test_report_round_trip_through_verify_witness(tmp_path, capsys):
    out = tmp_path / "pi.json"
    assert main(["pi", "--out", str(out)]) == 0
    capsys.readouterr()

    assert main(["verify-witness", "--scenario", str(out), "--json"]) == 0
    result = _json_body(capsys)["details"]["verify_witness"]
    assert result["hash_ok"] and result["certificates"] > 0 and not result["failures"]

    data = json.loads(out.read_text())
    data["body"]["passed"] = not data["body"]["passed"]
    out.write_text(json.dumps(data))
    assert main(["verify-witness", "--scenario", str(out)]) == 1


def test_verify_witness_needs_a_report(tmp_path):
    assert main(["verify-witness"]) == 2
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({"schema": 1, "ring": "GF(5)"}))
    assert main(["verify-witness", "--scenario", str(path)]) == 2


def test_selftest(capsys):
    assert main(["selftest", "--json"]) == 0
    assert _json_body(capsys)["passed"]
