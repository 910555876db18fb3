import csv
import json
import subprocess
import sys

import pytest

from cvsketch.cli import main


def run_cli(*argv):
    return main(list(argv))


def test_verify_passes(capsys):
    assert run_cli("verify") == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.strip().endswith(")")


def test_gen_synthetic_and_ingest_round_trip(tmp_path, capsys):
    out_csv = tmp_path / "vec.csv"
    assert run_cli(
        "gen-synthetic", "--distinct", "20", "--freq-lo", "1", "--freq-hi", "9",
        "--seed", "4", "--output", str(out_csv),
    ) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["f0"] == 20
    rows = list(csv.reader(open(out_csv)))
    assert rows[0] == ["item", "count"]
    assert len(rows) == 21


def test_ingest_bow(tmp_path, capsys):
    src = tmp_path / "bow.txt"
    src.write_text("2\n3\n2\n1 2 3\n2 2 4\n")
    out = tmp_path / "vec.csv"
    assert run_cli("ingest", "--format", "bow", "--path", str(src),
                   "--split", "first", "--output", str(out)) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["universe"] == 3 and info["f1"] == 3


def test_ingest_missing_path_is_data_error(tmp_path, capsys):
    missing = tmp_path / "nope.txt"
    code = run_cli("ingest", "--format", "bow", "--path", str(missing),
                   "--output", str(tmp_path / "x.csv"))
    assert code == 2
    assert str(missing) in capsys.readouterr().err


def test_ingest_malformed_is_data_error(tmp_path, capsys):
    src = tmp_path / "bow.txt"
    src.write_text("2\nbroken\n")
    code = run_cli("ingest", "--format", "bow", "--path", str(src),
                   "--output", str(tmp_path / "x.csv"))
    assert code == 2
    assert "bow.txt:2" in capsys.readouterr().err


def test_estimate_f2_with_sketch_persistence(tmp_path, capsys):
    stream = json.dumps({"kind": "synthetic", "distinct": 30, "freq_lo": 1, "freq_hi": 5, "seed": 2})
    state = tmp_path / "sketch.json"
    assert run_cli("estimate-f2", "--stream", stream, "--seed", "11",
                   "--proxy", "truth", "--save-sketch", str(state)) == 0
    first = json.loads(capsys.readouterr().out)
    assert first["raw"] >= 0
    assert first["corrected"] == pytest.approx(
        first["raw"] + first["c_hat"] * (first["z"] - 0.0)
    )
    # resume from the stored sketch with no new stream
    assert run_cli("estimate-f2", "--load-sketch", str(state), "--f1", "90") == 0
    second = json.loads(capsys.readouterr().out)
    assert second["raw"] == first["raw"]


def test_estimate_ip(capsys):
    f = json.dumps({"kind": "synthetic", "distinct": 25, "freq_lo": 1, "freq_hi": 4, "seed": 1})
    g = json.dumps({"kind": "synthetic", "distinct": 25, "freq_lo": 1, "freq_hi": 4, "seed": 2})
    assert run_cli("estimate-ip", "--stream", f, "--stream2", g, "--seed", "5",
                   "--proxy", "truth") == 0
    out = json.loads(capsys.readouterr().out)
    assert set(out) >= {"raw", "corrected", "c_hat", "z", "ground_truth_ip"}
    assert out["z"] >= 0  # sum of two squared counters


def test_experiment_subcommand(tmp_path, capsys):
    cfg = {
        "task": "f2",
        "stream": {"kind": "synthetic", "distinct": 30, "freq_lo": 1, "freq_hi": 6, "seed": 9},
        "trials": 20,
        "master_seed": 2,
        "mom": {"groups": 4, "per_group": 5, "shuffle_seed": 0},
        "output": str(tmp_path / "exp.csv"),
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    assert run_cli("experiment", "--config", str(cfg_path)) == 0
    info = json.loads(capsys.readouterr().out)
    assert (tmp_path / "exp.csv").exists()
    assert (tmp_path / "exp.summary.json").exists()
    header = open(info["csv"]).readline().strip()
    assert header == "trial,raw,corrected,c_hat,z"


def test_experiment_rerun_is_byte_identical(tmp_path, capsys):
    cfg = {
        "task": "f2",
        "stream": {"kind": "synthetic", "distinct": 25, "freq_lo": 1, "freq_hi": 6, "seed": 1},
        "trials": 12,
        "mom": None,
        "output": str(tmp_path / "a.csv"),
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    assert run_cli("experiment", "--config", str(cfg_path)) == 0
    assert run_cli("experiment", "--config", str(cfg_path),
                   "--output", str(tmp_path / "b.csv"), "--threads", "2") == 0
    capsys.readouterr()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_experiment_config_error(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"task": "wat", "stream": {"kind": "synthetic", "distinct": 2}}))
    assert run_cli("experiment", "--config", str(cfg_path)) == 1
    assert "config error" in capsys.readouterr().err


def test_sweep_ratio_f2(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert run_cli("sweep-ratio", "--task", "f2", "--distinct", "50",
                   "--freq-caps", "1,5,10", "--output", str(out)) == 0
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == 3
    assert all(0.0 <= float(r["ratio"]) <= 1.0 for r in rows)


def test_sweep_ratio_ip_orthogonal_is_flat_one(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert run_cli("sweep-ratio", "--task", "ip", "--distinct", "100",
                   "--thetas", "90", "--norm-ratios", "0.4,1.0",
                   "--output", str(out)) == 0
    rows = list(csv.DictReader(open(out)))
    assert [float(r["ratio"]) for r in rows] == [1.0, 1.0]


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cvsketch", "verify"],
        capture_output=True, text=True, cwd="/root/pkg",
        env={"PATH": "/usr/bin:/bin", "PYTHONPATH": "src"},
    )
    assert proc.returncode == 0, proc.stderr
    assert "OK" in proc.stdout
