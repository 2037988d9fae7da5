import json

import pytest

from totlab.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from totlab.curvelab import read_curve_csv, recall_curve
from totlab.netcore import BipolarVector, train_hebbian
from totlab.resources import read_json_resource


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def success_episode(tmp_path):
    data = read_json_resource("example_episode.json")
    data["errors"] = {}
    data["strategy"] = {"schedule": [{"kind": "persist", "cue": {"m": 0}, "series": 1}]}
    return write_json(tmp_path / "success.json", data)


@pytest.fixture
def hopeless_episode(tmp_path):
    data = read_json_resource("example_episode.json")
    data["strategy"]["schedule"] = [{"kind": "free_recall", "series": 2}]
    return write_json(tmp_path / "hopeless.json", data)


def test_curve_writes_csv_to_stdout(capsys):
    assert main(["curve"]) == EXIT_OK
    out, err = capsys.readouterr()
    rows = out.splitlines()
    assert rows[0] == "m,d,prob_num,prob_den,prob"
    assert rows[1].split(",")[2:4] == ["1", "1"]
    assert rows[10].split(",")[2:4] == ["1", "2"]
    assert "P(0) = 1" in err


def test_curve_file_round_trips(tmp_path, x, capsys):
    matrix = write_json(tmp_path / "w.json", train_hebbian(x).to_json())
    reference = write_json(tmp_path / "x.json", x.to_json())
    out = tmp_path / "curve.csv"
    assert main(["curve", "--matrix", matrix, "--reference", reference, "--out", str(out)]) == EXIT_OK
    with open(out, encoding="utf-8") as f:
        assert read_curve_csv(f) == recall_curve(train_hebbian(x), x)
    assert "P(1/9) = 1" in capsys.readouterr().out


def test_curve_with_monte_carlo_column(capsys):
    assert main(["curve", "--mc", "200", "--seed", "3"]) == EXIT_OK
    assert "monte carlo" in capsys.readouterr().err


def test_curve_with_damage_file(tmp_path, capsys):
    damage = write_json(tmp_path / "damage.json", {"severed_links": [], "dead_inputs": [0, 1, 2, 3]})
    assert main(["curve", "--damage", damage]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[10].split(",")[2:4] == ["1", "2"]


@pytest.mark.parametrize(
    "damage",
    [
        {"severed_links": [[2.7, 5.9]], "dead_inputs": [1.5]},
        {"severed": [1]},
        {"dead_inputs": 3},
        {"dead_inputs": ["a"]},
    ],
)
def test_malformed_damage_indices_are_configuration_errors(tmp_path, damage, capsys):
    path = write_json(tmp_path / "damage.json", damage)
    assert main(["curve", "--damage", path]) == EXIT_CONFIG
    out, err = capsys.readouterr()
    assert out == ""
    assert "error:" in err


def test_missing_file_is_a_configuration_error(tmp_path, capsys):
    assert main(["curve", "--matrix", str(tmp_path / "none.json")]) == EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


def test_malformed_json_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"components": [1, -1,]}', encoding="utf-8")
    assert main(["curve", "--reference", str(path)]) == EXIT_CONFIG
    assert "line 1" in capsys.readouterr().err


def test_unknown_option_is_a_configuration_error(capsys):
    assert main(["curve", "--frobnicate"]) == EXIT_CONFIG
    assert main(["ensemble", "--delta-steep", "steep"]) == EXIT_CONFIG


def test_oversized_exact_curve_is_a_runtime_error(tmp_path, capsys):
    x = BipolarVector((1,) * 17)
    matrix = write_json(tmp_path / "w.json", train_hebbian(x).to_json())
    reference = write_json(tmp_path / "x.json", x.to_json())
    assert main(["curve", "--matrix", matrix, "--reference", reference]) == EXIT_RUNTIME


def test_dead_neuron_ensemble_on_demo(capsys):
    assert main(["ensemble", "--demo", "tot", "--mode", "dead-neurons", "--k", "4"]) == EXIT_OK
    out, err = capsys.readouterr()
    report = json.loads(out)
    assert report["ensemble_size"] == 126
    assert report["tot_probability"] == "2/63"
    assert "free recall P(d=1)" in err
    assert "MATCH" in err or "DIVERGES" in err


def test_link_ensemble_has_no_tot(capsys):
    argv = ["ensemble", "--mode", "links", "--count", "10", "--samples", "1000", "--seed", "0"]
    assert main(argv) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["mode"] == "links_sampled"
    assert report["tot_probability"] == "0"


def test_ensemble_output_is_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["ensemble", "--mode", "links", "--count", "5", "--samples", "40", "--seed", "9"]
    assert main(argv + ["--out", str(first)]) == EXIT_OK
    assert main(argv + ["--out", str(second), "--workers", "2"]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_scenario_chekhov(capsys):
    assert main(["scenario", "chekhov", "--seed", "0"]) == EXIT_OK
    out, err = capsys.readouterr()
    types = [e["type"] for e in json.loads(out)["events"]]
    assert "ThrowUpArms" in types
    assert "IId" in err


def test_scenario_short_tot(capsys):
    assert main(["scenario", "short_tot", "--seed", "4"]) == EXIT_OK
    out, err = capsys.readouterr()
    trace = json.loads(out)
    types = [e["type"] for e in trace["events"]]
    assert trace["outcome"] == "resolved"
    assert "Relocalized" not in types and "ThrowUpArms" not in types
    assert err.startswith("Short TOT on a damaged network\n")


def test_simulate_guaranteed_success(success_episode, capsys):
    assert main(["simulate", "--config", success_episode]) == EXIT_OK
    trace = json.loads(capsys.readouterr().out)
    resolved = [e for e in trace["events"] if e["type"] == "Resolved"]
    assert [e["attempt_index"] for e in resolved] == [1]
    assert trace["outcome"] == "resolved"


def test_giving_up_is_a_valid_outcome(hopeless_episode, capsys):
    assert main(["simulate", "--config", hopeless_episode, "--limit", "5"]) == EXIT_OK
    trace = json.loads(capsys.readouterr().out)
    assert trace["outcome"] == "gave_up"
    assert trace["counters"]["attempts_per_phase"] == [10]
    assert trace["events"][-1]["type"] == "GaveUp"


def test_simulate_uses_the_shipped_example(capsys):
    assert main(["simulate", "--arms-threshold", "1000"]) == EXIT_OK
    types = [e["type"] for e in json.loads(capsys.readouterr().out)["events"]]
    assert "Resolved" in types and "ThrowUpArms" not in types


def test_simulate_rejects_malformed_config(tmp_path, capsys):
    path = tmp_path / "episode.json"
    path.write_text("{\n  'node': {}\n}\n", encoding="utf-8")
    assert main(["simulate", "--config", str(path)]) == EXIT_CONFIG
    assert "line 2" in capsys.readouterr().err
