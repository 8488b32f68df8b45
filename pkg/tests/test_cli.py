import json
import subprocess
import sys

import pytest

from hmfweights import acceptance, cli, qexp


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pw1_example(capsys):
    code, out, _ = run(capsys, "pw1", "--p", "5", "--rep", "red:psi=0,chi=2,ext=invchi", "--w", "3", "--m", "0")
    assert code == 0 and out == '{"lift":true}\n'


def test_decompose_example(capsys):
    code, out, _ = run(capsys, "decompose", "--p", "3", "--ram-quad", "--hi", "2,4", "--lo", "0,0")
    assert code == 0 and out == '{"comparable":true,"r":[3,5]}\n'


def test_decompose_fractional(capsys):
    _, out, _ = run(capsys, "decompose", "--p", "3", "--hi", "1,2", "--lo", "1,1")
    assert json.loads(out) == {"comparable": True, "r": ["1/2", "1/2"]}


def test_cones_and_lambda(capsys):
    _, out, _ = run(capsys, "cones", "--p", "3", "--weight", "1,2", "--positive")
    assert json.loads(out)["in_min_cone"] is True
    _, out, _ = run(capsys, "lambda", "--p", "3", "--m", "0,0", "--n", "-1,3")
    assert json.loads(out)["equal"] is True


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"primes": [{"id": "p1", "p": 3, "f": 2, "e": 1}]}))
    _, out, _ = run(capsys, "decompose", "--config", str(cfg), "--hi", "-1,3", "--lo", "0,0")
    assert json.loads(out)["r"] == [1, 0]


def test_theta_cycle_csv(capsys):
    code, out, _ = run(capsys, "theta-cycle", "--p", "5", "--rep", "red:psi=0,chi=2,ext=invchi")
    assert code == 0 and out.startswith("m_class,w_set\n0,")


def test_weight2(capsys):
    _, out, _ = run(capsys, "weight2", "--p", "5", "--rep", "irr:xi=2", "--a", "0", "--b", "0")
    assert json.loads(out) == {"membership": "Yes"}


def test_kisin_subcommands(capsys):
    _, out, _ = run(capsys, "kisin", "ext-dim", "--p", "3", "--q", "3", "--s", "1", "--t", "1", "--a", "1", "--b", "1")
    assert json.loads(out) == {"classes": 9, "dim": 2}
    _, out, _ = run(capsys, "kisin", "ext-dim", "--q", "3", "--s", "2", "--t", "1", "--a", "1", "--b", "1", "--list")
    assert len(json.loads(out)["representatives"]) == 3
    _, out, _ = run(capsys, "kisin", "check-morphism", "--case", "w=p", "--q", "5", "--a", "2", "--b", "3", "--c", "4")
    assert json.loads(out) == {"commutes": True}
    _, out, _ = run(capsys, "kisin", "check-morphism", "--case", "w=p+1", "--q", "5", "--a", "2", "--b", "3",
                    "--c", "4", "--perturbed")
    assert json.loads(out) == {"commutes": False}


def test_qexp_apply_theta(capsys, tmp_path):
    S = qexp.default_setup(3, 3)
    f = qexp.make_form(S, (1, 2), (0, 0), 12, {("c0", (2, 1)): 1, ("c0", (3, 1)): 1})
    path = tmp_path / "f.json"
    path.write_text(qexp.dumps(f))
    code, out, _ = run(capsys, "qexp", "apply", "--op", "theta", "--form", str(path))
    assert code == 0
    coeffs = {(c["t"], tuple(c["mu"])): c["val"] for c in json.loads(out)["coeffs"]}
    assert coeffs[("c0", (2, 1))] == 2 and coeffs[("c0", (3, 1))] == 0


def test_qexp_eigenbuild(capsys, tmp_path):
    spec = {"field": {"D": 3, "p": 3}, "weight": {"k": [1, 2], "m": [-1, -1]}, "window": {"trace_bound": 20},
            "eigenvalues": {"v13a": 1, "v13b": 2, "v37": 0}, "s_eigenvalues": {"v13a": 1, "v13b": 1, "v37": 2}}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "qexp", "eigenbuild", "--spec", str(path))
    form = qexp.form_from_json(json.loads(out)["form"])
    assert code == 0 and form.get("c0", (1, 0)) == 1


@pytest.mark.parametrize(
    "argv, code, name",
    [
        ([], 2, "UnknownSubcommand"),
        (["frobnicate"], 2, "UnknownSubcommand"),
        (["decompose", "--hi", "1,2", "--lo", "0,0"], 2, "ConfigInvalid"),
        (["decompose", "--p", "3", "--hi", "1,2,3", "--lo", "0,0"], 1, "DimensionMismatch"),
        (["pw1", "--p", "5", "--rep", "irr:xi=2", "--w", "9", "--m", "0"], 1, "OutOfRangeW"),
        (["kisin", "ext-dim", "--p", "5", "--q", "9", "--s", "1", "--t", "1", "--a", "1", "--b", "1"], 2,
         "ConfigInvalid"),
    ],
)
def test_exit_codes(capsys, argv, code, name):
    got, out, err = run(capsys, *argv)
    assert got == code and out == ""
    assert json.loads(err.strip().splitlines()[-1])["error"] == name


def test_missing_file(capsys):
    code, _, err = run(capsys, "qexp", "apply", "--op", "vp", "--form", "/nonexistent.json")
    assert code == 2 and "cannot read" in err


def test_selftest_contract(capsys, monkeypatch):
    fake = [acceptance.CriterionResult(1, "a", True, 0.1, 1.0, "ok"),
            acceptance.CriterionResult(2, "b", True, 0.1, 1.0, "ok")]
    monkeypatch.setattr(acceptance, "run_all", lambda seed=0: fake)
    code, out, err = run(capsys, "selftest", "--seed", "7")
    assert code == 0 and json.loads(out) == {"failed": [], "passed": 2, "total": 2}
    assert err.count("PASS") == 2
    fake[1] = acceptance.CriterionResult(2, "b", False, 0.1, 1.0, "bad")
    code, out, _ = run(capsys, "selftest")
    assert code == 1 and json.loads(out)["failed"] == [2]


def test_output_is_deterministic():
    argv = [sys.executable, "-m", "hmfweights.cli", "kisin", "ext-dim", "--q", "9", "--s", "2", "--t", "1",
            "--a", "1", "--b", "1", "--list"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a.endswith(b"\n")
