"""Command-line interface: subcommands, config precedence, exit codes, CSV."""

import subprocess

import numpy as np
import pytest

from sgpd import PrimeField, read_matrix, write_matrix
from sgpd.cli import main

from conftest import triple_loop_product


def run_cli(*argv):
    return main(list(argv))


def test_run_writes_verified_product(tmp_path, capsys):
    out = tmp_path / "c.mat"
    code = run_cli(
        "run", "--t", "3", "--s", "2", "--d", "2", "--pc", "2", "--P", "30",
        "--T", "6", "--S", "4", "--D", "6", "--modulus", "257", "--seed", "11",
        "--out", str(out),
    )
    assert code == 0
    text = capsys.readouterr().out
    assert "case=secure-tall" in text
    assert "recovery_threshold=25" in text
    assert "success=True" in text
    assert "# command=run" in text
    decoded, modulus = read_matrix(out)
    assert modulus == 257 and decoded.shape == (6, 6)


def test_run_from_files_checks_out_exactly(tmp_path):
    field = PrimeField(101)
    rng = np.random.default_rng(5)
    a = field.random_array((4, 6), rng)
    b = field.random_array((6, 2), rng)
    write_matrix(tmp_path / "a.mat", a, 101)
    write_matrix(tmp_path / "b.mat", b, 101)
    out = tmp_path / "c.mat"
    code = run_cli(
        "run", "--t", "2", "--s", "3", "--d", "1", "--pc", "1", "--P", "20",
        "--a", str(tmp_path / "a.mat"), "--b", str(tmp_path / "b.mat"),
        "--out", str(out), "--model", "subset", "--responder-count", "15",
    )
    assert code == 0
    decoded, modulus = read_matrix(out)
    assert modulus == 101
    assert np.array_equal(decoded, triple_loop_product(a, b, 101))


def test_run_modulus_conflict_with_files(tmp_path, capsys):
    field = PrimeField(101)
    rng = np.random.default_rng(6)
    write_matrix(tmp_path / "a.mat", field.random_array((2, 2), rng), 101)
    write_matrix(tmp_path / "b.mat", field.random_array((2, 2), rng), 101)
    code = run_cli(
        "run", "--t", "2", "--s", "1", "--d", "2", "--pc", "0", "--P", "8",
        "--a", str(tmp_path / "a.mat"), "--b", str(tmp_path / "b.mat"),
        "--modulus", "257",
    )
    assert code == 2


def test_run_decode_failure_exits_one(capsys):
    code = run_cli(
        "run", "--t", "3", "--s", "2", "--d", "2", "--pc", "2", "--P", "30",
        "--T", "6", "--S", "4", "--D", "6",
        "--model", "fixed", "--responders", ",".join(map(str, range(1, 25))),
    )
    assert code == 1
    assert "success=False" in capsys.readouterr().out


def test_run_missing_parameters_exit_two(capsys):
    assert run_cli("run", "--t", "2", "--s", "1") == 2
    assert "missing required" in capsys.readouterr().err


def test_run_composite_modulus_exits_two(capsys):
    code = run_cli(
        "run", "--t", "2", "--s", "1", "--d", "1", "--P", "4",
        "--T", "2", "--S", "1", "--D", "1", "--modulus", "100",
    )
    assert code == 2


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "audit.cfg"
    cfg.write_text(
        "t=2\ns=1\nd=1\npc=1\nworkers=4\nT=2\nS=1\nD=1\nmodulus=5\n# comment\n"
    )
    assert run_cli("audit", "--config", str(cfg)) == 0
    text = capsys.readouterr().out
    assert "# modulus=5" in text and "verdict=SECURE" in text
    # flags beat the file: shrink the pool and change the field
    assert run_cli("audit", "--config", str(cfg), "--modulus", "3", "--P", "2") == 0
    text = capsys.readouterr().out
    assert "# modulus=3" in text and "# workers=2" in text


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("t=2\nbogus=1\n")
    assert run_cli("audit", "--config", str(cfg)) == 2
    assert "unknown config key" in capsys.readouterr().err


def test_config_rejects_malformed_line(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("t 2\n")
    assert run_cli("audit", "--config", str(cfg)) == 2


def test_audit_exit_codes(capsys):
    base = [
        "audit", "--t", "2", "--s", "1", "--d", "1", "--pc", "1", "--P", "4",
        "--T", "2", "--S", "1", "--D", "1", "--modulus", "5",
    ]
    assert run_cli(*base) == 0
    capsys.readouterr()
    assert run_cli(*base, "--negative-control") == 1
    assert "verdict=INSECURE" in capsys.readouterr().out
    assert run_cli(*base, "--budget", "10") == 3
    assert "budget" in capsys.readouterr().err


def test_sweep_golden_values(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run_cli(
        "sweep", "--m", "4", "--n", "4", "--P", "50", "--pc-list", "0,1",
        "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert "# command=sweep" in header and "# m=4" in header
    rows = [ln for ln in lines if ln and not ln.startswith("#")]
    assert rows[0] == "pc,t,s,d,case,P_R,C_L_over_TD,naive_P_R,feasible,frontier"
    assert rows[1:] == [
        "0,1,4,1,non-secure,7,7,,true,true",
        "0,2,2,2,non-secure,9,9/4,,true,true",
        "0,4,1,4,non-secure,16,1,16,true,true",
        "1,1,4,1,secure-wide,9,9,,true,true",
        "1,2,2,2,secure-wide,17,17/4,,true,true",
        "1,4,1,4,secure-tall,25,25/16,25,true,true",
    ]


def test_sweep_naive_column_never_smaller(tmp_path):
    out = tmp_path / "sweep12.csv"
    assert run_cli(
        "sweep", "--m", "12", "--n", "12", "--P", "3000",
        "--pc-list", "0,1,2,3,4", "--out", str(out),
    ) == 0
    strict = 0
    for line in out.read_text().splitlines():
        if line.startswith("#") or line.startswith("pc,") or not line:
            continue
        parts = line.split(",")
        t, s = int(parts[1]), int(parts[2])
        if s >= t:
            assert parts[7] == ""  # baseline defined only for s < t
            continue
        p_r, naive = int(parts[5]), int(parts[7])
        assert naive >= p_r, line
        strict += naive > p_r
    assert strict > 0


def test_sweep_frontier_flags(tmp_path):
    out = tmp_path / "sweep36.csv"
    assert run_cli("sweep", "--m", "36", "--n", "36", "--P", "3000",
                   "--pc-list", "11", "--out", str(out)) == 0
    rows = [
        ln.split(",") for ln in out.read_text().splitlines()
        if ln and not ln.startswith(("#", "pc,"))
    ]
    marked = [(int(r[5]), r[6]) for r in rows if r[9] == "true"]
    # frontier rows must be mutually non-dominating in (P_R, C_L)
    from fractions import Fraction

    pts = [(p, Fraction(c)) for p, c in marked]
    for i, (p1, c1) in enumerate(pts):
        for j, (p2, c2) in enumerate(pts):
            if i != j:
                assert not (p2 <= p1 and c2 <= c1 and (p2 < p1 or c2 < c1))


def test_sweep_rejects_bad_dimensions(capsys):
    assert run_cli("sweep", "--m", "0", "--n", "4", "--P", "10") == 2


def test_console_script_help_runs():
    proc = subprocess.run(["sgpd", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "run" in proc.stdout and "sweep" in proc.stdout and "audit" in proc.stdout
