import csv
import io
import json
import math

import pytest

from hempss import cli

ACC = {"r": 0.8, "gamma_mod": 0.1, "chi_mod": 0.1, "delta1": math.pi, "delta2": 0.0}
SYM = {"r": 0.8, "gamma_mod": 0.1, "chi_mod": 0.1, "delta1": math.pi / 2, "delta2": math.pi / 2}


@pytest.fixture
def run(tmp_path):
    def _run(command, cfg, out=True, extra=()):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg) if not isinstance(cfg, str) else cfg)
        argv = [command, "--config", str(path), *extra]
        if out:
            argv += ["--out", str(tmp_path / "out")]
        return cli.main(argv)

    _run.out = tmp_path / "out"
    return _run


def read_csv(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


def test_validate_exit_codes(run, capsys):
    assert run("validate", {"params": ACC}) == 0
    assert "PASS" in capsys.readouterr().out
    assert json.loads((run.out / "validation.json").read_text())["passed"]
    assert run("validate", {"params": dict(ACC, delta1=0.0)}) == 1


def test_usage_errors(run):
    assert run("validate", {}) == 2
    assert run("validate", "not json") == 2
    assert run("validate", {"params": {"r": 0.1, "bogus": 1}}) == 2
    assert run("sweep-gamma", {"params": SYM}) == 2
    assert run("design-pumps", {"omega1": 1.0}) == 2
    assert cli.main(["validate", "--config", "/nonexistent.json"]) == 2
    with pytest.raises(SystemExit):
        cli.main(["validate", "--config", "x", "--threads", "0"])


def test_coeffs(run):
    assert run("coeffs", {"params": ACC}) == 0
    doc = json.loads((run.out / "coeffs.json").read_text())
    assert doc["generic"]["C0"] == pytest.approx(0.005)
    assert doc["cross_kerr_factor"] == 4.0
    assert "specialized" not in doc
    assert run("coeffs", {"params": dict(ACC, delta1=0.0)}) == 1


def test_pnd_and_moments(run):
    cfg = {"params": {"r": 0.8}, "beta": 0.0, "n_max": 20}
    assert run("pnd", cfg) == 0
    rows = read_csv(run.out / "pnd.csv")
    assert (rows[0]["n1"], rows[0]["n2"]) == ("0", "0")
    assert float(rows[0]["P"]) == pytest.approx(0.55905516773, abs=1e-6)
    assert len(rows[0]["P"].replace("0.", "", 1).lstrip("0")) <= 12
    assert run("moments", cfg) == 0
    m = read_csv(run.out / "moments.csv")[0]
    assert float(m["mean_n1"]) == pytest.approx(math.sinh(0.8) ** 2, abs=1e-6)
    assert run("g2", cfg) == 0
    g = read_csv(run.out / "g2.csv")[0]
    assert float(g["g2"]) == pytest.approx(2 + 1 / math.sinh(0.8) ** 2, abs=1e-4)
    assert "r" in g and "beta1_re" in g


def test_truncated_moments_fail(run):
    assert run("moments", {"params": ACC, "beta": 3.0, "n_max": 4}) == 1


def test_sweeps(run):
    assert run("sweep-gamma", {"params": SYM, "beta": 3, "gamma_values": [0.0, 0.1]}) == 0
    rows = read_csv(run.out / "moments.csv")
    assert len(rows) == 2 and float(rows[0]["mean_n1"]) < float(rows[1]["mean_n1"])
    cfg = {"params": {"r": 0.8}, "beta": 0.5, "theta1_grid": [0.0], "theta2_grid": [0.0, 1.0]}
    assert run("sweep-theta", cfg, extra=("--threads", "2")) == 0
    assert len(read_csv(run.out / "moments.csv")) == 2


def test_sweep_all_points_failing(run):
    assert run("sweep-gamma", {"params": {"r": 0.8}, "beta": 0.5, "gamma_values": [0.1]}) == 1


def test_state_eval(run):
    cfg = {"params": {"r": 0.0}, "points": [[0.0, 0.0], [0.5, 0.5]]}
    assert run("state-eval", cfg) == 0
    rows = read_csv(run.out / "wavefunction.csv")
    assert list(rows[0]) == ["z1", "z2", "re_psi", "im_psi"]
    assert float(rows[1]["re_psi"]) == pytest.approx(math.exp(-0.5), abs=1e-9)
    cfg.update(representation="coordinate", points=[[0.3, -0.7]])
    assert run("state-eval", cfg) == 0
    rows = read_csv(run.out / "wavefunction.csv")
    assert float(rows[0]["re_psi"]) == pytest.approx(2 / math.sqrt(math.pi) * math.exp(-0.29), abs=1e-8)
    assert run("state-eval", dict(cfg, representation="polar")) == 2
    assert run("state-eval", {"params": {"r": 0.0}, "representation": "cubic", "points": [[0, 0]]}) == 1


def test_oracle_check(run):
    cfg = {"params": ACC, "beta": 1.0, "cutoff": 40, "n_compare": 12}
    assert run("oracle-check", cfg) == 0
    rep = json.loads((run.out / "oracle_check.json").read_text())
    assert rep["passed"] and rep["max_abs_pnd_difference"] < 1e-6
    assert rep["unitary_fidelity"] > 1 - 1e-6


def test_planner_commands(run):
    assert run("design-pumps", {"omega1": 1.0, "omega2": math.sqrt(2), "design": "hempss"}) == 0
    doc = json.loads((run.out / "pumps.json").read_text())
    assert len(doc["pumps"]) == 8
    assert run("enumerate-terms", {"omega1": 1.0, "omega2": math.sqrt(2), "design": "hempss",
                                   "include_kerr": False}) == 0
    terms = json.loads((run.out / "terms.json").read_text())
    assert sorted((t["j"], t["s"], t["l"], t["m"]) for t in terms) == sorted(
        [(3, 0, 0, 0), (0, 3, 0, 0), (2, 0, 0, 1), (0, 2, 1, 0)])
    assert run("enumerate-terms", {"omega1": 1.0, "omega2": 2.0, "pumps": []}) == 1
    assert run("design-pumps", {"omega1": 1.0, "omega2": 1.4, "design": "other"}) == 2


def test_stdout_and_determinism(run, capsys):
    cfg = {"omega1": 1.0, "omega2": math.sqrt(2)}
    assert run("enumerate-terms", cfg, out=False) == 0
    first = capsys.readouterr().out
    assert run("enumerate-terms", cfg, out=False) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)
