import csv
import json
import os
import subprocess

import pytest

PNP = os.environ.get("PNP_BIN", "pnp")

CASE1 = {
    "grid": {"dimension": 1, "a": 0, "b": 1, "n": 40},
    "species": [{"name": "c", "charge": 1, "initial": {"type": "constant", "value": 1}}],
    "boundary": {"sigma_a": -1, "sigma_b": 0},
    "time": {"t_final": 0.05},
    "output": {"snapshot_every": 100},
}


def pnp(*args):
    return subprocess.run([PNP, *map(str, args)], capture_output=True, text=True)


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(cfg if isinstance(cfg, str) else json.dumps(cfg))
    return p


def test_cases_lists_all_eight():
    r = pnp("cases")
    assert r.returncode == 0
    assert len(r.stdout.strip().splitlines()) == 8


def test_run_writes_outputs(tmp_path):
    out = tmp_path / "out"
    r = pnp("run", "--config", write(tmp_path, CASE1), "--out", out)
    assert r.returncode == 0, r.stderr
    assert "t_final_reached" in r.stdout
    rows = list(csv.DictReader(open(out / "trace.csv")))
    assert float(rows[-1]["t"]) == pytest.approx(0.05)
    times = [float(row["t"]) for row in rows]
    assert all(b > a for a, b in zip(times, times[1:]))
    masses = [float(row["mass_c"]) for row in rows]
    assert max(abs(m - 1.0) for m in masses) < 1e-13
    snaps = sorted(p.name for p in out.glob("snapshot_*.csv"))
    assert "snapshot_0.csv" in snaps and "snapshot_100.csv" in snaps


def test_rerun_is_byte_identical(tmp_path):
    cfg = write(tmp_path, CASE1)
    pnp("run", "--config", cfg, "--out", tmp_path / "a")
    pnp("run", "--config", cfg, "--out", tmp_path / "b")
    for name in ("trace.csv", "snapshot_0.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_malformed_config_exit_2(tmp_path):
    r = pnp("run", "--config", write(tmp_path, '{\n "grid": {\n  "n": 4,,\n}'), "--out", tmp_path)
    assert r.returncode == 2
    assert "line 3" in r.stderr


def test_both_time_modes_exit_2(tmp_path):
    cfg = dict(CASE1, time={"t_final": 1, "steady_state": True})
    assert pnp("run", "--config", write(tmp_path, cfg), "--out", tmp_path).returncode == 2


def test_incompatible_config_exit_3(tmp_path):
    cfg = dict(CASE1, boundary={"sigma_a": 0, "sigma_b": 0})
    r = pnp("run", "--config", write(tmp_path, cfg), "--out", tmp_path)
    assert r.returncode == 3
    assert "defect" in r.stderr


def test_strict_oversized_step_exit_4(tmp_path):
    cfg = dict(CASE1, time={"t_final": 0.05, "k": 0.01}, cfl={"policy": "strict"})
    r = pnp("run", "--config", write(tmp_path, cfg), "--out", tmp_path)
    assert r.returncode == 4
    assert "bound" in r.stderr


def test_warn_policy_runs_with_warning(tmp_path):
    cfg = dict(CASE1, time={"t_final": 0.001, "k": 0.001}, cfl={"policy": "warn"})
    r = pnp("run", "--config", write(tmp_path, cfg), "--out", tmp_path)
    assert r.returncode == 0
    assert "warning" in r.stderr


def test_converge_case1(tmp_path):
    r = pnp("converge", "--case", "paper-1d-case1", "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    rows = list(csv.DictReader(open(tmp_path / "convergence.csv")))
    assert list(rows[0].keys()) == ["h", "error_c", "order_c", "error_psi", "order_psi"]
    assert rows[0]["order_c"] == ""
    for row in rows[1:]:
        assert 1.8 <= float(row["order_c"]) <= 2.3


def test_converge_diffusion_only(tmp_path):
    # Two equal and opposite species: the charge source vanishes and psi stays zero.
    step = {"type": "step", "at": 0.5, "left": 1, "right": 2}
    cfg = {
        "grid": {"dimension": 1, "a": 0, "b": 1, "n": 10},
        "species": [{"name": "p", "charge": 1, "initial": step},
                    {"name": "m", "charge": -1, "initial": step}],
        "boundary": {"sigma_a": 0, "sigma_b": 0},
        "time": {"t_final": 0.05},
    }
    r = pnp("converge", "--config", write(tmp_path, cfg), "--h", "0.1,0.05,0.025",
            "--h-ref", "0.003125", "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    rows = list(csv.DictReader(open(tmp_path / "convergence.csv")))
    for row in rows:
        assert float(row["error_psi"]) < 1e-14
    for row in rows[1:]:
        assert float(row["order_c"]) == pytest.approx(2.0, abs=0.3)


def test_converge_unknown_case(tmp_path):
    assert pnp("converge", "--case", "nope", "--out", tmp_path).returncode == 2


def test_bad_arguments():
    assert pnp("frobnicate").returncode == 2
