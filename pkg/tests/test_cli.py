import csv
import subprocess
import sys

import numpy as np
import pytest

from dqlsq.cli import main
from dqlsq.dual_quat import read_dqmat
from dqlsq.exceptions import FormatError
from dqlsq.harness import write_ppm
from dqlsq.quat_core import write_qmat
from dqlsq.quat_linalg import singular_values

from conftest import rand_q


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_synth_then_solve(tmp_path, capsys):
    prob = tmp_path / "prob"
    assert main(["synth", "--case", "iii", "--m", "30", "--n", "20", "--p", "3", "--seed", "4",
                 "--out", str(prob)]) == 0
    for name in ("A.dqmat", "B.dqmat", "X_true.dqmat"):
        assert (prob / name).exists()
    assert read_dqmat(prob / "A.dqmat").shape == (30, 20)

    for algo in ("alg1", "baseline", "alg2"):
        out = tmp_path / algo
        assert main(["solve", "--problem", str(prob), "--case", "iii", "--algo", algo, "--out", str(out)]) == 0
        row = dict(zip(*read_rows(out / "summary.csv")))
        assert row["algorithm"] == algo and row["case"] == "iii"
    rows = {algo: dict(zip(*read_rows(tmp_path / algo / "summary.csv"))) for algo in ("alg1", "baseline")}
    assert float(rows["alg1"]["objin"]) <= 1e-5 < 1e-1 <= float(rows["baseline"]["objin"])
    assert "objst=" in capsys.readouterr().out


def test_solve_generates_when_no_problem(tmp_path):
    out = tmp_path / "o"
    assert main(["solve", "--case", "ii", "--m", "30", "--n", "20", "--p", "2", "--seed", "1",
                 "--out", str(out)]) == 0
    assert (out / "trace.csv").exists()
    with pytest.raises(SystemExit):
        main(["solve", "--case", "ii", "--m", "30", "--out", str(out)])


def test_solve_with_config_and_preset(tmp_path):
    cfg = tmp_path / "solver.cfg"
    cfg.write_text("preset = theorem\nmax_iter = 3\n")
    out = tmp_path / "o"
    main(["solve", "--case", "ii", "--m", "30", "--n", "20", "--p", "2", "--algo", "alg2",
          "--config", str(cfg), "--out", str(out)])
    row = dict(zip(*read_rows(out / "summary.csv")))
    assert row["iter"] == "3" and row["params_ok"] == "true"
    main(["solve", "--case", "ii", "--m", "30", "--n", "20", "--p", "2", "--algo", "alg2",
          "--config", str(cfg), "--preset", "paper", "--out", str(out)])
    row = dict(zip(*read_rows(out / "summary.csv")))
    assert row["iter"] == "3" and row["params_ok"] == "false"


def test_image_encrypt_and_recover(tmp_path):
    rng = np.random.default_rng(3)
    write_ppm(tmp_path / "st.ppm", rng.integers(0, 256, (8, 5, 3), dtype=np.uint8))
    write_ppm(tmp_path / "in.ppm", rng.integers(0, 256, (8, 5, 3), dtype=np.uint8))
    enc = tmp_path / "enc"
    assert main(["image-encrypt", "--st", str(tmp_path / "st.ppm"), "--in", str(tmp_path / "in.ppm"),
                 "--case", "ii", "--m", "12", "--seed", "1", "--out", str(enc)]) == 0
    assert (enc / "bst.ppm").exists() and (enc / "bin.ppm").exists()
    rec = tmp_path / "rec"
    assert main(["image-recover", "--problem", str(enc), "--out", str(rec)]) == 0
    assert (rec / "xst.ppm").read_bytes() == (tmp_path / "st.ppm").read_bytes()
    assert (rec / "xin.ppm").read_bytes() == (tmp_path / "in.ppm").read_bytes()


def test_svd_dump(tmp_path, capsys):
    rng = np.random.default_rng(0)
    A = rand_q(rng, 4, 3)
    write_qmat(tmp_path / "a.qmat", A)
    assert main(["svd-dump", str(tmp_path / "a.qmat"), "--out", str(tmp_path / "sv.csv")]) == 0
    rows = read_rows(tmp_path / "sv.csv")
    assert rows[0] == ["part", "index", "sigma"]
    np.testing.assert_allclose([float(r[2]) for r in rows[1:]], singular_values(A), rtol=1e-15)

    main(["synth", "--case", "ii", "--m", "6", "--n", "3", "--p", "2", "--out", str(tmp_path)])
    capsys.readouterr()
    main(["svd-dump", str(tmp_path / "B.dqmat")])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "part,index,sigma"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["st", "st", "in", "in"]

    (tmp_path / "junk.txt").write_text("hello")
    with pytest.raises(FormatError):
        main(["svd-dump", str(tmp_path / "junk.txt")])


def test_check_params(capsys):
    assert main(["check-params"]) == 0
    out = capsys.readouterr().out
    assert "2-gamma-2*gamma*rho = -1 > 0: FAIL" in out
    assert "convergence hypotheses hold: no" in out
    main(["check-params", "--preset", "theorem", "--n", "3"])
    assert "convergence hypotheses hold: yes" in capsys.readouterr().out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dqlsq.cli", "check-params", "--preset", "theorem"],
                         capture_output=True, text=True, check=True)
    assert "hypotheses hold: yes" in res.stdout
