"""Command-line surface: exit codes, artifacts, overrides."""

from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from semslice import cli
from semslice.baselines import PolicyKind
from semslice.engine import (
    ARTIFACT_FILES,
    COMPARISON_FILE,
    GeneratorParams,
    SUMMARY_FILE,
    generate_first_responder,
    load_scenario,
    scenario_to_json,
)

from test_engine import base_doc

SMALL = GeneratorParams(ues=3, duration_ticks=100, accident_tick=30, seed=7)


@pytest.fixture()
def scenario_file(tmp_path):
    path = tmp_path / "small.scn.json"
    path.write_text(scenario_to_json(generate_first_responder(SMALL)))
    return path


def test_run_emits_artifacts_and_prints_the_summary(tmp_path, scenario_file,
                                                    capsys):
    out = tmp_path / "out"
    code = cli.main(["run", "--scenario", str(scenario_file),
                     "--policy", "static", "--out", str(out)])
    assert code == 0
    for name in ARTIFACT_FILES:
        assert (out / name).exists()
    printed = json.loads(capsys.readouterr().out)
    assert printed == json.loads((out / SUMMARY_FILE).read_text())
    assert printed["policy"] == "static"


def test_missing_scenario_file_is_an_environment_error(tmp_path, capsys):
    code = cli.main(["run", "--scenario", str(tmp_path / "nope.json"),
                     "--policy", "static", "--out", str(tmp_path / "o")])
    assert code == 2
    assert "semslice:" in capsys.readouterr().err


def test_unparsable_scenario_is_an_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    code = cli.main(["validate", "--scenario", str(bad)])
    assert code == 1


def test_invalid_scenario_lists_every_issue(tmp_path, capsys):
    doc = base_doc()
    doc["timeline"][0]["stream_id"] = "ghost"
    doc["ues"][0]["allowed_nssai"] = ["1-1"] * 9
    path = tmp_path / "invalid.json"
    path.write_text(json.dumps(doc))
    code = cli.main(["validate", "--scenario", str(path)])
    assert code == 1
    err = capsys.readouterr().err
    assert "2 issue(s)" in err
    assert "ghost" in err and "at most 8" in err


def test_validate_reports_scenario_shape(scenario_file, capsys):
    assert cli.main(["validate", "--scenario", str(scenario_file)]) == 0
    out = capsys.readouterr().out
    assert "scenario ok" in out and "3 UEs" in out and "100 ticks" in out


def test_generate_writes_the_builtin_scenario(tmp_path, capsys):
    path = tmp_path / "gen" / "scn.json"
    code = cli.main(["generate", "--ues", "3", "--duration", "100",
                     "--t-accident", "30", "--seed", "7", "--out", str(path)])
    assert code == 0
    assert load_scenario(path.read_text()) == generate_first_responder(SMALL)
    assert str(path) in capsys.readouterr().out


def test_generate_rejects_impossible_timing(tmp_path, capsys):
    code = cli.main(["generate", "--t-accident", "1000", "--duration", "200",
                     "--out", str(tmp_path / "x.json")])
    assert code == 1
    assert "accident_tick" in capsys.readouterr().err


def test_compare_runs_all_policies_in_canonical_order(tmp_path, scenario_file,
                                                      capsys):
    out = tmp_path / "cmp"
    code = cli.main(["compare", "--scenario", str(scenario_file),
                     "--out", str(out)])
    assert code == 0
    lines = (out / COMPARISON_FILE).read_text().splitlines()
    assert [line.split(",")[0] for line in lines[1:]] \
        == [k.value for k in PolicyKind]
    for kind in PolicyKind:
        for name in ARTIFACT_FILES:
            assert (out / kind.value / name).exists()
    stdout = capsys.readouterr().out
    assert stdout.count("qos=") == 4


def test_compare_subset_keeps_canonical_order(tmp_path, scenario_file):
    out = tmp_path / "cmp"
    code = cli.main(["compare", "--scenario", str(scenario_file),
                     "--policies", "semantic,static", "--out", str(out)])
    assert code == 0
    lines = (out / COMPARISON_FILE).read_text().splitlines()
    assert [line.split(",")[0] for line in lines[1:]] == ["static", "semantic"]
    assert not (out / "dns").exists()


def test_unknown_policy_token_is_an_input_error(tmp_path, scenario_file,
                                                capsys):
    code = cli.main(["compare", "--scenario", str(scenario_file),
                     "--policies", "adaptive", "--out", str(tmp_path / "o")])
    assert code == 1
    assert "unknown policy" in capsys.readouterr().err


def test_emitted_schema_validates_generated_documents(capsys):
    assert cli.main(["emit-schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    doc = json.loads(scenario_to_json(generate_first_responder(SMALL)))
    jsonschema.Draft202012Validator(schema).validate(doc)


def test_set_overrides_reach_the_loaded_scenario(scenario_file, capsys):
    code = cli.main(["validate", "--scenario", str(scenario_file),
                     "--set", "duration_ticks=300"])
    assert code == 0
    assert "300 ticks" in capsys.readouterr().out


def test_malformed_override_is_an_input_error(scenario_file, capsys):
    code = cli.main(["validate", "--scenario", str(scenario_file),
                     "--set", "duration_ticks"])
    assert code == 1
    assert "key=value" in capsys.readouterr().err


def test_override_that_breaks_the_scenario_is_reported(scenario_file, capsys):
    code = cli.main(["validate", "--scenario", str(scenario_file),
                     "--set", "duration_ticks=5"])
    assert code == 1
    assert "outside" in capsys.readouterr().err


def test_builtin_scenario_is_the_default(capsys):
    assert cli.main(["validate"]) == 0
    assert "6 UEs" in capsys.readouterr().out


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        cli.main(["run", "--nonsense"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == 2


def test_out_dir_env_var_sets_the_default(tmp_path, scenario_file,
                                          monkeypatch, capsys):
    target = tmp_path / "env-out"
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(target))
    code = cli.main(["run", "--scenario", str(scenario_file),
                     "--policy", "dns"])
    assert code == 0
    for name in ARTIFACT_FILES:
        assert (target / name).exists()


def test_unwritable_out_dir_is_an_environment_error(tmp_path, scenario_file,
                                                    capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("occupied\n")
    code = cli.main(["run", "--scenario", str(scenario_file),
                     "--policy", "static", "--out", str(blocker / "sub")])
    assert code == 2


def test_module_invocation_matches_in_process(tmp_path, scenario_file):
    out = tmp_path / "sub-out"
    proc = subprocess.run(
        [sys.executable, "-m", "semslice", "run", "--scenario",
         str(scenario_file), "--policy", "semantic", "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["policy"] == "semantic"
    for name in ARTIFACT_FILES:
        assert (out / name).exists()


def test_console_script_emits_the_schema():
    proc = subprocess.run(["semslice", "emit-schema"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["title"]
