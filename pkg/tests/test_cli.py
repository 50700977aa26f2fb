import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from multiop.cli import main
from multiop.figures import FIGURES, evaluate_point, figure_grid
from multiop.states import from_json_obj, load_operators
from multiop.sweep import SweepConfig, run_sweep
from multiop.uncertainty import Mode, balanced_relation

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


# --- verify ------------------------------------------------------------------

def test_verify_balanced_hermitian_sweep(capsys):
    code, out, _ = run(capsys, "verify", "--relation", "balanced-herm", "--M", 3, "--dim", 4,
                       "--trials", 1000, "--seed", 7)
    report = json.loads(out)
    assert code == 0
    assert report["violations"] == 0 and report["evaluations"] == 1000


def test_verify_two_vector_sweep(capsys):
    code, out, _ = run(capsys, "verify", "--relation", "balanced-cs", "--M", 2, "--trials", 50)
    assert code == 0 and json.loads(out)["violations"] == 0


@pytest.mark.parametrize("relation", ["unbalanced-cs", "unbalanced-herm", "balanced-gen",
                                      "unbalanced-gen", "multivariance", "symmetric"])
def test_verify_other_relations(capsys, relation):
    code, out, _ = run(capsys, "verify", "--relation", relation, "--trials", 30, "--dim", 3)
    assert code == 0 and json.loads(out)["violations"] == 0


def test_verify_mixed_states(capsys):
    code, out, _ = run(capsys, "verify", "--relation", "multivariance", "--mixed", "--trials", 20)
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["verify", "--relation", "balanced-herm", "--trials", "0"],
    ["verify", "--relation", "balanced-herm", "--tol", "0"],
    ["verify", "--relation", "symmetric", "--M", "9"],
    ["verify", "--relation", "nonsense"],
    ["verify"],
    ["figure", "6"],
    ["figure", "1", "--grid", "0x3"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_worst_case_witness_replays(capsys):
    cfg = SweepConfig("balanced-gen", M=3, dim=3, trials=40, seed=5)
    report = run_sweep(cfg)
    inputs = report["worst"]["inputs"]
    state = from_json_obj(inputs["state"])
    ops = [from_json_obj(o) for o in inputs["operators"]]
    again = balanced_relation(state, ops, Mode.GENERAL)
    assert again.slack == report["worst"]["report"]["slack"]


def test_sweeps_are_deterministic():
    cfg = SweepConfig("unbalanced-herm", M=4, dim=3, trials=25, seed=11)
    assert json.dumps(run_sweep(cfg)) == json.dumps(run_sweep(cfg))


# --- figure ------------------------------------------------------------------

def test_figure_one_full_grid(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    code, _, _ = run(capsys, "figure", 1, "--grid", "48x48", "--out", out)
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["theta", "phi", "lhs", "rhs", "tightest"]
    assert len(rows) == 1 + 48 * 48
    assert all(float(r[2]) >= float(r[3]) for r in rows[1:])
    meta = json.loads((tmp_path / "fig1.json").read_text())
    assert meta["seed"] == 20240101 and meta["rows"] == 2304 and meta["failures"] == 0
    assert (tmp_path / "fig1.ops.json").exists()


def test_figure_five_has_no_tightest_series(tmp_path, capsys):
    out = tmp_path / "f5.csv"
    assert run(capsys, "figure", 5, "--grid", 6, "--out", out)[0] == 0
    assert out.read_text().splitlines()[0] == "theta,phi,lhs,rhs"
    assert json.loads((tmp_path / "f5.json").read_text())["p"] == 2


def test_single_point_grid(tmp_path, capsys):
    out = tmp_path / "one.csv"
    assert run(capsys, "figure", 2, "--grid", "1x1", "--out", out)[0] == 0
    assert len(out.read_text().splitlines()) == 2


def test_figure_output_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "figure", 3, "--grid", "8x5", "--out", a)
    run(capsys, "figure", 3, "--grid", "8x5", "--out", b)
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.ops.json").read_bytes() == (tmp_path / "b.ops.json").read_bytes()


@pytest.mark.parametrize("figure", [1, 2, 3, 4, 5])
def test_operator_fixture_replays_exactly(tmp_path, capsys, figure):
    out = tmp_path / "f.csv"
    run(capsys, "figure", figure, "--grid", "4x3", "--out", out)
    ops = load_operators(tmp_path / "f.ops.json")
    spec = FIGURES[figure]
    rows = list(csv.reader(out.open()))[1:]
    for row in rows:
        x, y, lhs, rhs = (float(v) for v in row[:4])
        report, _ = evaluate_point(spec, ops, x, y)
        assert abs(report.lhs - lhs) <= 1e-15 * max(1, lhs)
        assert abs(report.rhs - rhs) <= 1e-15 * max(1, rhs)


def test_output_directory_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MULTIOP_OUT_DIR", str(tmp_path))
    assert run(capsys, "figure", 4, "--grid", 2)[0] == 0
    assert (tmp_path / "fig4.csv").exists()


def test_unwritable_output_exits_3(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(capsys, "figure", 1, "--grid", 2, "--out", blocker / "sub" / "x.csv")
    assert code == 3 and "I/O" in err


def test_figure_grid_row_count():
    out = figure_grid(2, (3, 7))
    assert len(out.rows) == 21 and out.failures == 0


# --- squeeze -----------------------------------------------------------------

def test_squeeze_identical_operators(capsys):
    code, out, _ = run(capsys, "squeeze", "--ops", FIXTURES / "identical_ops.json",
                       "--family", "one-qubit", "--params", "0.3,1.1")
    assert code == 0 and json.loads(out)["label"] == "0/3"


def test_squeeze_vacuum_position_momentum(capsys):
    code, out, _ = run(capsys, "squeeze", "--ops", FIXTURES / "oscillator_xp_ops.json",
                       "--state", FIXTURES / "vacuum_state.json")
    result = json.loads(out)
    assert code == 0 and result["label"] == "0/2"
    assert result["gen_variances"] == pytest.approx([result["threshold"]] * 2, rel=1e-12)


def test_squeeze_witness_is_stable(tmp_path, capsys):
    doc = json.loads((FIXTURES / "squeeze_witness_1of3.json").read_text())
    (tmp_path / "ops.json").write_text(json.dumps({"operators": doc["operators"]}))
    (tmp_path / "state.json").write_text(json.dumps(doc["state"]))
    outs = [run(capsys, "squeeze", "--ops", tmp_path / "ops.json", "--state", tmp_path / "state.json")
            for _ in range(2)]
    assert outs[0] == outs[1]
    assert json.loads(outs[0][1])["label"] == "1/3"


def test_squeeze_schema_error_reports_path(tmp_path, capsys):
    bad = tmp_path / "ops.json"
    bad.write_text(json.dumps({"operators": [{"dim": 2, "kind": "operator", "entries": [[1, 0]]}]}))
    code, _, err = run(capsys, "squeeze", "--ops", bad, "--family", "one-qubit")
    assert code == 2
    assert "$.operators[0].entries" in err


def test_squeeze_missing_file_exits_3(tmp_path, capsys):
    assert run(capsys, "squeeze", "--ops", tmp_path / "nope.json", "--family", "one-qubit")[0] == 3


def test_squeeze_mode_mismatch_exits_4(tmp_path, capsys):
    bad = tmp_path / "ops.json"
    bad.write_text(json.dumps({"operators": [
        {"dim": 2, "kind": "operator", "entries": [[0, 0], [1, 0], [0, 0], [0, 0]]}] * 2}))
    assert run(capsys, "squeeze", "--ops", bad, "--family", "one-qubit")[0] == 4
    assert run(capsys, "squeeze", "--ops", bad, "--family", "one-qubit", "--mode", "general")[0] == 0


# --- oscillator --------------------------------------------------------------

def test_oscillator_vacuum(capsys):
    code, out, _ = run(capsys, "oscillator", "--fock-dim", 40, "--hbar", 1, "--state", "vacuum")
    report = json.loads(out)
    assert code == 0 and report["satisfied"]
    assert report["lhs"] == pytest.approx(0.5, abs=1e-9)
    assert report["rhs"] == pytest.approx(0.438691, abs=1e-6)
    assert report["meta"]["tail"] == 0.0


def test_oscillator_truncation_exits_4(capsys):
    code, _, err = run(capsys, "oscillator", "--fock-dim", 2, "--state", "coherent(2)")
    assert code == 4 and "edge" in err


def test_oscillator_number_state(capsys):
    code, out, _ = run(capsys, "oscillator", "--fock-dim", 60, "--state", "number(3)")
    assert code == 0 and json.loads(out)["satisfied"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "multiop.cli", "oscillator"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["relation"] == "oscillator-triple"


@pytest.mark.parametrize("figure", [1, 2, 3, 4, 5])
def test_shipped_reference_grids_reproduce(tmp_path, capsys, figure):
    ref_dir = FIXTURES / "figures"
    out = tmp_path / f"fig{figure}.csv"
    assert run(capsys, "figure", figure, "--grid", 16, "--out", out)[0] == 0
    ref = list(csv.reader((ref_dir / f"fig{figure}.csv").open()))
    got = list(csv.reader(out.open()))
    assert got[0] == ref[0] and len(got) == len(ref)
    for g, r in zip(got[1:], ref[1:]):
        for a, b in zip(g, r):
            assert abs(float(a) - float(b)) <= 1e-12 * max(1.0, abs(float(b)))
    meta = json.loads((tmp_path / f"fig{figure}.json").read_text())
    assert meta == json.loads((ref_dir / f"fig{figure}.json").read_text()) | {
        "min_relative_slack": meta["min_relative_slack"]}
