import json
import subprocess
import sys

import pytest

from renyishift.cli import main, parse_args


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_args_examples():
    args = parse_args(["divergence", "--family", "exp:1", "--s", "0.4", "--eps", "0.01"])
    assert args.verb == "divergence" and args.s == 0.4 and args.eps == 0.01
    args = parse_args(["limit", "--family", "beta:0.5,0.5", "--s", "0.5"])
    assert args.verb == "limit"
    args = parse_args(["converge", "--family", "uniform", "--s", "0.5"])
    assert (args.factor, args.steps, args.eps0, args.tol) == (2.0, 14, 0.05, None)
    assert parse_args(["uniformity", "--family", "uniform"]).s_grid == 19


@pytest.mark.parametrize("argv, flag", [
    (["divergence", "--family", "exp:1", "--s", "1.5", "--eps", "0.1"], "--s"),
    (["divergence", "--family", "nope:1", "--eps", "0.1"], "--family"),
    (["converge", "--family", "uniform", "--s", "0.5", "--steps", "2"], "--steps"),
    (["divergence", "--family", "uniform", "--eps", "abc"], "--eps"),
    (["converge", "--family", "uniform", "--s", "0.5", "--format", "xml"], "--format"),
    (["frobnicate"], "verb"),
])
def test_bad_arguments_exit_2(capsys, argv, flag):
    with pytest.raises(SystemExit) as info:
        parse_args(argv)
    assert info.value.code == 2
    assert flag in capsys.readouterr().err or flag == "verb"


def test_divergence_prints_value(capsys):
    code, out, _ = run(capsys, "divergence", "--family", "exp:2", "--s", "0.3", "--eps", "0.01")
    assert code == 0 and out.strip() == "0.006"


def test_divergence_measures(capsys):
    code, out, _ = run(capsys, "divergence", "--family", "exp:2", "--eps", "0.01",
                       "--measure", "kl")
    assert code == 0 and float(out) == pytest.approx(0.02)
    code, out, _ = run(capsys, "divergence", "--family", "uniform", "--eps", "0.1",
                       "--measure", "hellinger")
    assert code == 0 and float(out) == pytest.approx(0.2)
    code, out, err = run(capsys, "divergence", "--family", "uniform", "--eps", "0.1",
                         "--measure", "kl")
    assert code == 2 and "infinite" in err


def test_domain_error_exit_2(capsys):
    code, _, err = run(capsys, "divergence", "--family", "uniform", "--eps", "1.5")
    assert code == 2 and "mutually singular" in err


def test_numeric_error_exit_3(capsys, monkeypatch):
    from renyishift import harness
    from renyishift.quadrature import QuadratureConfig
    monkeypatch.setattr(harness, "STUDY_CONFIG",
                        QuadratureConfig(abs_tol=1e-300, rel_tol=1e-300, max_levels=4))
    code, _, err = run(capsys, "converge", "--family", "beta:0.5,0.5", "--s", "0.5",
                       "--tol", "1e-300", "--steps", "4")
    assert code == 3
    assert "last two levels" in err


def test_limit_output(capsys):
    code, out, _ = run(capsys, "limit", "--family", "uniform", "--s", "0.7")
    assert code == 0 and out.strip() == "1.0 PowerKappa(1)"
    code, out, _ = run(capsys, "limit", "--family", "beta:2,2", "--s", "0.5", "--json")
    obj = json.loads(out)
    assert obj["value"] == pytest.approx(1.5)
    assert obj["regime"] == {"kind": "EpsSqLog", "kappa": 2.0}


def test_bounds_output(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "gamma:2.5,1")
    assert code == 0
    assert out.splitlines() == ["alpha1 1.0", "alpha2 1.0"]
    code, out, _ = run(capsys, "bounds", "--family", "exp:2", "--json")
    obj = json.loads(out)
    assert obj["alpha1"]["value"] == pytest.approx(4.0, abs=1e-8)
    assert obj["alpha1"]["boundary"] == "s->1"
    assert obj["alpha2"]["mode"] == "fixed"


@pytest.mark.parametrize("spec, s", [("exp:1", 0.4), ("uniform", 0.5), ("beta:0.5,0.5", 0.25)])
def test_converge_reproduces_limit(capsys, tmp_path, spec, s):
    _, out, _ = run(capsys, "limit", "--family", spec, "--s", str(s), "--json")
    limit = json.loads(out)["value"]
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "converge", "--family", spec, "--s", str(s), "--out", str(path),
                       "--format", "json")
    assert code == 0 and "converged=True" in out
    report = json.loads(path.read_text())
    assert report["closed_form"] == limit
    assert report["extrapolated"] == pytest.approx(limit, rel=0.01)


def test_converge_json_schema(capsys):
    code, out, _ = run(capsys, "converge", "--family", "gamma:2.5,1", "--s", "0.5", "--json",
                       "--steps", "6")
    obj = json.loads(out)
    assert code == 0
    assert set(obj) >= {"family", "s", "regime", "rows", "extrapolated", "closed_form",
                        "converged"}
    assert set(obj["rows"][0]) == {"eps", "I_s", "g_eps", "ratio", "closed_form", "rel_err"}


def test_lemma_and_uniformity(capsys, tmp_path):
    code, out, _ = run(capsys, "lemma", "--family", "beta:3,3", "--side", "right", "--c", "0.5",
                       "--s", "0.5")
    assert code == 0 and "closed_form -2.5" in out
    path = tmp_path / "u.csv"
    code, out, _ = run(capsys, "uniformity", "--family", "uniform", "--s-grid", "5",
                       "--out", str(path))
    assert code == 0 and out.strip().endswith("monotone=True")
    assert path.read_text().splitlines()[0] == "eps,sup_abs_dev"


def test_families_listing(capsys):
    code, out, _ = run(capsys, "families")
    assert code == 0 and "beta:0.5,0.5" in out and "EpsSqLog" in out
    code, out, _ = run(capsys, "families", "--json")
    assert {"name", "params", "kappa", "amplitude", "regime"} <= set(json.loads(out)[0])


def test_family_file(capsys, tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"name": "exp", "params": [2.0]}))
    code, out, _ = run(capsys, "divergence", "--family", str(path), "--s", "0.3", "--eps", "0.01")
    assert code == 0 and out.strip() == "0.006"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "renyishift", "limit", "--family", "exp:1",
                           "--s", "0.25"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0.25 PowerKappa(1)"
    proc = subprocess.run([sys.executable, "-m", "renyishift", "limit", "--family", "exp:1",
                           "--s", "2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2
