import os
import subprocess

import pytest

CSS = os.environ.get("CSS_BIN")

pytestmark = pytest.mark.skipif(CSS is None, reason="CSS_BIN not set")


def run(*args, **kwargs):
    return subprocess.run([CSS, *args], capture_output=True, text=True, **kwargs)


def test_gen_eval_roundtrip(tmp_path):
    spec = tmp_path / "spec.txt"
    spec.write_text("n1 = 20\nn2 = 20\nrank = 3\nsigma = 0\nseed = 5\n")
    matrix = tmp_path / "m.txt"
    gen = run("gen", str(spec), "--out", str(matrix))
    assert gen.returncode == 0, gen.stderr
    assert matrix.exists()

    ev = run("eval", "--matrix", str(matrix), "--columns", "0,1,2,3", "--k", "3")
    assert ev.returncode == 0, ev.stderr
    assert "selection_error" in ev.stdout
    assert "relative_ratio" in ev.stdout


def test_run_sweep_is_deterministic(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text(
        """
trials = 3
seed = 11
alphas = 0.5 1.0

[dataset]
kind = synthetic
n1 = 24
n2 = 24
rank = 4
sigma = 0.1
seed = 9

[algorithm norm]
s = 6
k = 4

[algorithm iter_norm]
k = 4
"""
    )

    def sweep(out_name, jobs):
        out = tmp_path / out_name
        proc = run("run", str(config), "--out", str(out), "--jobs", str(jobs))
        assert proc.returncode == 0, proc.stderr
        lines = out.read_text().splitlines()
        return [l for l in lines if not l.startswith("# timing")]

    first = sweep("a.csv", 1)
    second = sweep("b.csv", 2)
    assert first == second

    header = first[0]
    assert header == ("algorithm,alpha,s,k,seed,selection_error,reconstruction_error,"
                      "oracle_error,entries_observed,status")
    data = [l for l in first[1:] if not l.startswith("#")]
    summary_at = first.index("# summary")
    assert summary_at - 1 == 2 * 2 * 3  # algorithms x alphas x trials

    for line in first[1:summary_at]:
        fields = line.split(",")
        assert len(fields) == 10
        assert fields[-1] in ("ok", "failed")
    assert len(data) >= 12


def test_run_with_uniform_arm(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text(
        "trials = 2\nseed = 3\nalphas = 1\n"
        "[dataset]\nkind = synthetic\nn1 = 12\nn2 = 12\nrank = 2\nseed = 4\n"
        "[algorithm norm]\ns = 4\nk = 2\n"
    )
    out = tmp_path / "u.csv"
    proc = run("run", str(config), "--out", str(out), "--with-uniform")
    assert proc.returncode == 0, proc.stderr
    body = out.read_text()
    assert "uniform," in body


def test_invalid_config_exits_2(tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("alphas = 2.0\n[algorithm norm]\ns = 3\nk = 1\n")
    proc = run("run", str(config))
    assert proc.returncode == 2
    assert "config error" in proc.stderr

    missing = run("run", str(tmp_path / "nope.cfg"))
    assert missing.returncode == 2
