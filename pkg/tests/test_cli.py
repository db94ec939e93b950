import json
import subprocess
import sys

import pytest

from cpboot.cli import build_parser, main
from cpboot.model import DataSet

SUBCOMMANDS = ("simulate", "fit", "ci", "limit-sample", "variance-table", "coverage", "figure1")

MODEL = {
    "alpha0": -1.0, "beta0": 1.0, "zeta0": 0.0,
    "covariate": {"type": "normal", "mu": 0.0, "sigma": 1.0},
    "error": {"type": "normal", "mu": 0.0, "sigma": 1.0},
}


@pytest.fixture
def files(tmp_path):
    model = tmp_path / "model.json"
    model.write_text(json.dumps(MODEL))
    stump = tmp_path / "stump.csv"
    stump.write_text("z,y\n-1,0\n0,0\n1,5\n2,5\n")
    return tmp_path, model, stump


def run(*args):
    return main([str(a) for a in args])


def test_fit_stump(files, capsys):
    _, _, stump = files
    assert run("fit", "--data", stump, "--a", -1, "--b", 2) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"alpha": 0.0, "beta": 5.0, "zeta": 0.0, "objective": 0.0}


def test_simulate_and_rerun_identical(files):
    tmp, model, _ = files
    a, b = tmp / "a.csv", tmp / "b.csv"
    assert run("simulate", "--config", model, "--n", 50, "--seed", 4, "--out", a) == 0
    assert run("simulate", "--config", model, "--n", 50, "--seed", 4, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(DataSet.from_csv(a.read_text())) == 50


def test_ci_moon_reports_m(files, capsys):
    tmp, model, _ = files
    data = tmp / "d.csv"
    run("simulate", "--config", model, "--n", 50, "--out", data)
    assert run("ci", "--data", data, "--a", -1.9, "--b", 1.9, "--scheme", "moon:0.8", "--B", 100, "--seed", 2) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["m"] == 23 and out["B"] == 100 and out["scheme"] == "moon:4/5"
    assert out["target"] == "zeta" and out["lo"] <= out["hi"] and out["level"] == 0.95


def test_ci_default_B_and_clip(files, capsys):
    tmp, model, _ = files
    data = tmp / "d.csv"
    run("simulate", "--config", model, "--n", 30, "--out", data)
    assert run("ci", "--data", data, "--a", -0.5, "--b", 0.5, "--scheme", "ecdf", "--clip") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["B"] == 120
    assert -0.5 <= out["lo"] <= out["hi"] <= 0.5


def test_limit_sample(files):
    tmp, model, _ = files
    out = tmp / "phi.csv"
    assert run("limit-sample", "--spec", model, "--count", 20, "--which", "etilde", "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "phi1,phi2,phi3" and len(lines) == 21


def test_variance_table(files, capsys):
    tmp, model, _ = files
    assert run("variance-table", "--spec", model, "--count", 1000) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "random_variable,asymptotic_variance"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["n(zeta_hat-zeta0)", "n(zeta_star-zeta0)"]


def test_coverage_and_figure1(files):
    tmp, model, _ = files
    cfg = tmp / "exp.json"
    cfg.write_text(json.dumps({"model": MODEL, "n_values": [40], "schemes": ["smoothed", "fdr"],
                               "reps": 3, "boot_B": 30, "master_seed": 1}))
    out = tmp / "cov.csv"
    assert run("coverage", "--config", cfg, "--out", out) == 0
    assert out.read_text().splitlines()[1].startswith("smoothed,40,")

    fig = tmp / "fig.json"
    fig.write_text(json.dumps({"model": MODEL, "n": 40, "reps": 20, "B": 20, "master_seed": 2}))
    assert run("figure1", "--config", fig, "--out", tmp / "fig") == 0
    names = sorted(p.name for p in (tmp / "fig").iterdir())
    assert names == sorted(f"{t}.csv" for t in ("asymptotic", "actual", "smoothed", "ecdf", "fdr", "m_out_of_n"))


class TestErrors:
    def test_usage_error_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["fit", "--data", "x.csv"])
        assert exc.value.code == 2

    def test_bad_scheme_exit_2(self, files):
        _, _, stump = files
        with pytest.raises(SystemExit) as exc:
            main(["ci", "--data", str(stump), "--a", "0", "--b", "1", "--scheme", "wild"])
        assert exc.value.code == 2

    def test_runtime_error_exit_1(self, files, capsys):
        tmp, _, _ = files
        assert run("fit", "--data", tmp / "missing.csv", "--a", 0, "--b", 1) == 1
        err = capsys.readouterr().err
        assert err.startswith("cpboot fit: error:") and err.count("\n") == 1

    def test_no_partial_output(self, files):
        tmp, _, _ = files
        bad = tmp / "bad.json"
        bad.write_text(json.dumps({"covariate": {"type": "normal", "mu": 0, "sigma": 1},
                                   "error": {"type": "normal", "mu": 3, "sigma": 1}}))
        out = tmp / "never.csv"
        assert run("simulate", "--config", bad, "--n", 10, "--out", out) == 1
        assert not out.exists()
        assert not [p for p in tmp.iterdir() if p.name.startswith(".never")]


@pytest.mark.parametrize("sub", SUBCOMMANDS)
def test_help_lists_flags(sub, capsys):
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([sub, "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    assert "--" in text and ("default" in text or sub == "fit")


def test_module_entry_point(files):
    _, _, stump = files
    proc = subprocess.run([sys.executable, "-m", "cpboot", "fit", "--data", str(stump), "--a", "-1", "--b", "2"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["zeta"] == 0.0
