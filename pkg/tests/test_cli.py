import json
import subprocess
import sys

import pytest

from assortplan import oracle_p2, parse_instance, solve_constrained
from assortplan.cli import run_cli

INSTANCE = {
    "w0": 1.0,
    "products": [
        {"id": 1, "kind": "organic", "revenue": 6.0},
        {"id": 2, "kind": "sponsored", "revenue": 2.0},
    ],
    "positions": [
        {"slot": 1, "kind": "organic"},
        {"slot": 2, "kind": "reserved"},
    ],
    "weights": [
        {"product": 1, "slot": 1, "w": 2.0},
        {"product": 2, "slot": 2, "w": 1.0},
    ],
    "valid_positions": {"2": [2]},
}

CONFIG = {
    "seed": 3,
    "n_organic": 3,
    "n_sponsored": 1,
    "k": 4,
    "revenue_range": [1.0, 8.0],
    "weight_range": [0.3, 1.5],
    "position_decay": 0.85,
    "w0": 1.0,
}


@pytest.fixture()
def inst_file(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(INSTANCE))
    return path


def run(capsys, *argv):
    code = run_cli([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_solve_exact(inst_file, capsys):
    code, payload = run(capsys, "solve", "--exact", inst_file)
    assert code == 0
    # (6*2 + 2*1) / (1 + 2 + 1)
    assert payload["revenue"] == pytest.approx(3.5, abs=1e-9)
    assert payload["placement"] == [
        {"slot": 1, "product": 1}, {"slot": 2, "product": 2}]
    assert payload["converged"] is True


def test_solve_constrained(inst_file, capsys):
    code, payload = run(capsys, "solve", "--constrained", inst_file)
    assert code == 0
    report = solve_constrained(parse_instance(inst_file))
    assert payload["revenue"] == pytest.approx(report.best.revenue)
    assert payload["best_role"] == report.best.role
    assert len(payload["candidates"]) == 2
    assert payload["bound_factor"] == pytest.approx(report.bound_factor)


def test_oracle_modes(inst_file, capsys):
    code, payload = run(capsys, "oracle", inst_file)
    assert code == 0
    assert payload["problem"] == "p0"
    assert payload["revenue"] == pytest.approx(3.5, abs=1e-9)

    code, payload = run(capsys, "oracle", inst_file, "--problem", "p2")
    assert code == 0
    _, rev, part_s, part_o = oracle_p2(parse_instance(inst_file))
    assert payload["revenue"] == pytest.approx(rev)
    assert payload["part_sponsored"] == pytest.approx(part_s)
    assert payload["part_organic"] == pytest.approx(part_o)


def test_check_feasible_and_not(inst_file, tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"placement": [
        {"slot": 1, "product": 1}, {"slot": 2, "product": 2}]}))
    code, payload = run(capsys, "check", inst_file, good)
    assert code == 0
    assert payload["feasible"] is True
    assert payload["violations"] == []

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"placement": [{"slot": 1, "product": 1}]}))
    code, payload = run(capsys, "check", inst_file, bad)
    assert code == 1
    assert payload["feasible"] is False
    assert any("2" in v for v in payload["violations"])


def test_check_duplicate_slot_is_infeasible(inst_file, tmp_path, capsys):
    dup = tmp_path / "dup.json"
    dup.write_text(json.dumps({"placement": [
        {"slot": 1, "product": 1}, {"slot": 1, "product": 2}]}))
    code, payload = run(capsys, "check", inst_file, dup)
    assert code == 1
    assert payload["feasible"] is False


def test_parse_failures_exit_2(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, payload = run(capsys, "solve", "--exact", broken)
    assert code == 2
    assert payload["error"]["type"] == "ParseError"

    code, payload = run(capsys, "solve", "--exact", tmp_path / "missing.json")
    assert code == 2


def test_validation_failure_exit_2(tmp_path, capsys):
    data = dict(INSTANCE, w0=-1.0)
    path = tmp_path / "neg.json"
    path.write_text(json.dumps(data))
    code, payload = run(capsys, "solve", "--exact", path)
    assert code == 2
    assert payload["error"]["type"] == "ValidationError"


def test_budget_exhaustion_exit_3(inst_file, capsys):
    code, payload = run(capsys, "oracle", inst_file, "--max-products", "1")
    assert code == 3
    assert payload["error"]["type"] == "BudgetExceeded"


def test_infeasible_instance_exit_1(tmp_path, capsys):
    data = dict(INSTANCE)
    data["valid_positions"] = {"2": [2]}
    data["weights"] = list(INSTANCE["weights"])
    data["products"] = INSTANCE["products"] + [
        {"id": 3, "kind": "sponsored", "revenue": 1.0}]
    data["positions"] = INSTANCE["positions"] + [
        {"slot": 3, "kind": "reserved"}]
    # both sponsored products demand slot 2
    data["valid_positions"] = {"2": [2], "3": [2]}
    path = tmp_path / "clash.json"
    path.write_text(json.dumps(data))
    code, payload = run(capsys, "solve", "--exact", path)
    assert code == 1
    assert payload["error"]["type"] == "InfeasibleSponsoredAssignment"


def test_bench_report_shape(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(CONFIG))
    code, payload = run(capsys, "bench", "--config", cfg, "--trials", "4")
    assert code == 0
    assert len(payload["rows"]) == 4
    summary = payload["summary"]
    assert summary["n_trials"] == 4
    assert summary["bound_satisfied"] is True
    assert "timestamp" not in payload


def test_bench_seed_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(CONFIG))
    _, base = run(capsys, "bench", "--config", cfg, "--trials", "2")
    _, other = run(capsys, "bench", "--config", cfg, "--trials", "2",
                   "--seed", "99")
    assert base["config"]["seed"] == 3
    assert other["config"]["seed"] == 99
    assert base["rows"] != other["rows"]


def test_bench_out_dir_writes_files(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(CONFIG))
    out = tmp_path / "out"
    code, _ = run(capsys, "bench", "--config", cfg, "--trials", "3",
                  "--out-dir", out)
    assert code == 0
    table = (out / "trials.csv").read_text().splitlines()
    assert table[0].startswith("trial,")
    assert len(table) == 4
    for name in ("ratio_histogram.png", "revenue_scatter.png"):
        assert (out / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    report = json.loads((out / "report.json").read_text())
    assert len(report["rows"]) == 3


def test_subprocess_streams_and_determinism(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(CONFIG))
    cmd = [sys.executable, "-m", "assortplan", "bench",
           "--config", str(cfg), "--trials", "3"]
    first = subprocess.run(cmd, capture_output=True, check=True)
    second = subprocess.run(cmd, capture_output=True, check=True)
    # identical bytes on stdout; logs only on stderr
    assert first.stdout == second.stdout
    json.loads(first.stdout)
    assert b"INFO" not in first.stdout
