import json

import pytest

from src.cli import EXIT_FAILED, EXIT_FORMAT, EXIT_OK, cli_main
from src.core.circuit_ir import make_circuit, not_gate, toffoli
from src.core.perm_core import identity
from src.parsers.circuit_parser import load_circuit, save_circuit
from src.parsers.spec_parser import save_spec
from src.utils.generators import gen_hwb

from tests.conftest import read_report


@pytest.fixture
def spec_file(tmp_path, two_transpositions):
    path = tmp_path / "ex.spec"
    save_spec(two_transpositions, str(path))
    return path


def test_synth_then_verify(tmp_path, spec_file, capsys):
    out = tmp_path / "ex.tfc"
    assert cli_main(["synth", "--in", str(spec_file), "--method", "kcycle", "--out", str(out)]) == EXIT_OK
    report = read_report(capsys.readouterr().out)
    assert report["verified"] == "true"
    assert int(report["cost"]) <= 174
    assert report["count.Pair22"] == "1"

    assert cli_main(["verify", str(out), str(spec_file)]) == EXIT_OK
    assert capsys.readouterr().out == "verified=true\n"


def test_synth_writes_report_file(tmp_path, spec_file):
    report_path = tmp_path / "r.txt"
    assert cli_main(["synth", "--in", str(spec_file), "--report", str(report_path), "--no-verify"]) == EXIT_OK
    assert read_report(report_path.read_text())["verified"] == "skipped"


def test_verify_detects_wrong_circuit(tmp_path, spec_file, capsys):
    wrong = tmp_path / "w.tfc"
    save_circuit(make_circuit(7, [not_gate(0, 7)]), str(wrong))
    assert cli_main(["verify", str(wrong), str(spec_file)]) == EXIT_FAILED
    assert capsys.readouterr().out == "verified=false\n"


def test_verify_width_mismatch(tmp_path, spec_file):
    narrow = tmp_path / "n.tfc"
    save_circuit(make_circuit(3), str(narrow))
    assert cli_main(["verify", str(narrow), str(spec_file)]) == EXIT_FORMAT


def test_bad_spec_is_a_format_error(tmp_path, capsys):
    bad = tmp_path / "bad.spec"
    bad.write_text("n 2\n0\n1\n1\n3\n")
    assert cli_main(["synth", "--in", str(bad)]) == EXIT_FORMAT
    assert "not reversible" in capsys.readouterr().err


def test_unknown_command_is_a_format_error():
    assert cli_main(["frobnicate"]) == EXIT_FORMAT


def test_cost(tmp_path, capsys):
    path = tmp_path / "t.tfc"
    save_circuit(make_circuit(3, [not_gate(0, 3), toffoli(0, 1, 2, 3)]), str(path))
    assert cli_main(["cost", str(path)]) == EXIT_OK
    out = read_report(capsys.readouterr().out)
    assert out["cost"] == "6"
    assert out["class.Toffoli"] == "1"


def test_lnn_cost_rejects_toffoli(tmp_path):
    path = tmp_path / "t.tfc"
    save_circuit(make_circuit(3, [toffoli(0, 1, 2, 3)]), str(path))
    assert cli_main(["cost", str(path), "--lnn"]) == EXIT_FORMAT


def test_analyze_identity(tmp_path, capsys):
    path = tmp_path / "id.spec"
    save_spec(identity(7), str(path))
    diff = tmp_path / "d.csv"
    assert cli_main(["analyze", str(path), "--diff-csv", str(diff)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["distance"] == 0
    assert report["nop"] == 1
    assert report["cycles"] == []
    assert diff.read_text().startswith("i,f_i,diff\n")


def test_bench(tmp_path, capsys):
    table = tmp_path / "bench.csv"
    args = ["bench", "--family", "random", "--n", "4", "5", "--count", "2", "--workers", "2", "--csv", str(table)]
    assert cli_main(args) == EXIT_OK
    assert "mean_cost" in capsys.readouterr().out
    assert len(table.read_text().splitlines()) == 5


def test_synth_hwb_circuit_file(tmp_path):
    out = tmp_path / "h.tfc"
    spec = tmp_path / "h.spec"
    save_spec(gen_hwb(5), str(spec))
    assert cli_main(["synth", "--in", str(spec), "--out", str(out), "--report", str(tmp_path / "r")]) == EXIT_OK
    assert load_circuit(str(out)).width == 5


@pytest.mark.parametrize("raw", ["abc", "99"])
def test_bad_simulation_limit_is_a_format_error(spec_file, monkeypatch, capsys, raw):
    monkeypatch.setenv("CYCLESYNTH_SIM_LIMIT", raw)
    assert cli_main(["synth", "--in", str(spec_file)]) == EXIT_FORMAT
    assert "CYCLESYNTH_SIM_LIMIT" in capsys.readouterr().err
