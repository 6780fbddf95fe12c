import json

import pytest

from qrelativity.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main

pytestmark = pytest.mark.usefixtures("clean_settings")


def test_run_builtin_writes_outputs(tmp_path, capsys):
    assert main(["run", "builtin:relation_check", "--out", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out.strip()
    assert out.startswith("relation_check: violations=")
    assert out.endswith(str(tmp_path / "relation_check.json"))
    assert json.loads((tmp_path / "relation_check.json").read_text())["kind"] == "relation_check"


def test_run_uses_output_dir_setting(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("QREL_OUTPUT_DIR", str(tmp_path))
    assert main(["run", "builtin:transform_table"]) == EXIT_OK
    assert (tmp_path / "transform_table.json").exists()
    assert (tmp_path / "transform_table.csv").exists()


def test_seed_override_lands_in_report(tmp_path, capsys):
    assert main(["run", "builtin:wigner_chain", "--seed", "11", "--out", str(tmp_path)]) == EXIT_OK
    assert json.loads((tmp_path / "wigner_chain.json").read_text())["seed"] == 11


def test_invalid_config_exits_with_config_status(tmp_path, capsys):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"kind": "chain_fit", "params": {}}))
    assert main(["run", str(config), "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "params.masses" in capsys.readouterr().err


def test_unreadable_config_exits_with_config_status(tmp_path, capsys):
    assert main(["run", str(tmp_path / "missing.json")]) == EXIT_CONFIG


def test_non_utf8_config_exits_with_config_status(tmp_path, capsys):
    config = tmp_path / "latin1.json"
    config.write_bytes(b"\xff\xfe{}")
    assert main(["run", str(config), "--out", str(tmp_path)]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "UTF-8" in err
    assert "latin1.json" in err


def test_precondition_failure_exits_with_failure_status(tmp_path, capsys):
    config = tmp_path / "wigner.json"
    config.write_text(json.dumps({"kind": "wigner_chain", "params": {"c1": 1.0, "c2": 1.0}}))
    assert main(["run", str(config), "--out", str(tmp_path)]) == EXIT_FAILED
    assert "precondition failed" in capsys.readouterr().err
    assert not (tmp_path / "wigner_chain.json").exists()


def test_verify_prefix_passes(capsys):
    assert main(["verify", "--only", "transforms"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert all(line.startswith("PASS transforms.") for line in lines[:-1])
    assert lines[-1] == f"all {len(lines) - 1} invariants passed"


def test_verify_reports_failures(capsys):
    code = main(["verify", "--only", "relations", "--tolerance", "relations.reciprocal_involution=-1"])
    assert code == EXIT_FAILED
    out = capsys.readouterr().out
    assert "FAIL relations.reciprocal_involution" in out
    assert "1 of 4 invariants failed: relations.reciprocal_involution" in out


def test_verify_unknown_tolerance_is_a_config_error(capsys):
    assert main(["verify", "--tolerance", "nothing.here=1"]) == EXIT_CONFIG


def test_malformed_tolerance_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--tolerance", "no-equals-sign"])
    assert info.value.code == 2


def test_transform_table_command(tmp_path, capsys):
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"mass_pairs": [[1.0, 4.0]], "energies": [0.0, 1.0], "h": 1.0}))
    assert main(["transform-table", str(params), "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "transform_table.json").read_text())
    assert [row["dilation"] for row in report["rows"]] == [0.5, 0.5]
    assert report["rows"][1]["delta"] is None
    assert capsys.readouterr().out.startswith("transform_table: rows=2")


def test_invalid_log_level_setting(monkeypatch, capsys):
    monkeypatch.setenv("QREL_LOG_LEVEL", "CHATTY")
    assert main(["verify", "--only", "transforms.flat"]) == EXIT_CONFIG
