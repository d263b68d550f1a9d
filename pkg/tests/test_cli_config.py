import json

import pytest

from padicfact.cli import main
from padicfact.config import RunConfig, load_config


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_kl(capsys):
    code, doc, _ = run(capsys, "kl", "--p", "5", "--chi", "omega^2", "--s", "-1")
    assert code == 0
    assert doc["value"] == "1/3"
    assert doc["meta"]["config"]["p"] == 5 and doc["meta"]["seed"] == 0


def test_kl_odd_character_is_math_error(capsys):
    code, doc, _ = run(capsys, "kl", "--p", "5", "--chi", "omega^1", "--s", "0")
    assert code == 1 and doc["error"] == "OddCharacter"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["kl", "--p", "5"])
    assert exc.value.code == 2
    capsys.readouterr()
    code, doc, _ = run(capsys, "signs", "--region", "bal")
    assert code == 2 and doc["error"] == "UsageError"


def test_signs(capsys):
    code, doc, _ = run(capsys, "signs", "--region", "bal", "--finite-prod", "+1")
    assert code == 0 and doc["epsilon"] == -1 and doc["vanishing"] == ["bal"]
    code, doc, _ = run(capsys, "signs", "--weights", "2", "1", "1", "--finite-prod", "-1")
    assert doc["region"] == "f" and doc["c"] == 1 and doc["epsilon"] == -1
    code, doc, _ = run(capsys, "signs", "--weights", "2", "2", "--eps-f", "-1")
    assert (doc["eps_triple"], doc["eps_adjoint"]) == (-1, 1)
    code, doc, _ = run(capsys, "signs", "--defect", "3", "4")
    assert doc == {**doc, "defect": 1, "weakly_panchishkin": False}


def test_euler_adjoint(capsys):
    payload = json.dumps({"f": {"p": 7, "k": 2, "alpha": "2", "beta": "3"}})
    code, doc, _ = run(capsys, "euler", "--kind", "adjoint", "--input", payload)
    assert code == 0 and doc["value"] == "-11/28"


def test_euler_input_from_file(capsys, tmp_path):
    f = tmp_path / "in.json"
    f.write_text(json.dumps({"f": {"p": 5, "k": 2, "alpha": "1", "beta": "0"},
                             "g": {"p": 5, "k": 2, "alpha": "1", "beta": "0"}, "j": 2}))
    code, doc, _ = run(capsys, "euler", "--kind", "deg4", "--input", "@" + str(f))
    assert code == 1 and doc["error"] == "ZeroDenominator"


def test_euler_identity(capsys):
    code, doc, _ = run(capsys, "euler", "--kind", "identity-8", "--samples", "10", "--seed", "4")
    assert code == 0 and doc["selected_reading"] == "unsquared_triple_vs_deg4"
    assert doc["meta"]["seed"] == 4


def test_quadfield(capsys):
    code, doc, _ = run(capsys, "quadfield", "--D", "-4", "--p", "5", "--N", "6")
    assert doc["h"] == 1 and doc["omega"] == 4 and doc["B1"] == "-1/2"
    assert doc["split_at_p"] and doc["u"] == [4, 1]
    code, doc, _ = run(capsys, "quadfield", "--D", "-4", "--p", "7")
    assert doc["split_at_p"] is False and doc["u"] is None
    code, doc, _ = run(capsys, "quadfield", "--D", "-16")
    assert code == 1 and doc["error"] == "NotFundamental"


def test_leading_term(capsys):
    payload = json.dumps({"ring": {"p": 2, "a": 1, "b": 2}, "matrix": [[[0, 1], [0, 1]]]})
    code, doc, _ = run(capsys, "leading-term", "--input", payload)
    assert code == 0 and doc["fitt_stark"] == "equal" and doc["fitt0"] == ["x"]


def test_coleman_and_gross(capsys):
    code, doc, _ = run(capsys, "coleman", "--c", "3", "--k", "2")
    assert doc["value"] == "2/3"
    code, doc, _ = run(capsys, "gross-rhs", "--p", "5", "--chi", "omega^2", "--D", "-4", "--N", "5", "--s", "-1")
    assert code == 0 and "series" in doc and doc["meta"]["calibration"] is not None


def test_stickelberger(capsys):
    code, doc, _ = run(capsys, "stickelberger", "--p", "5", "--chi", "omega^2", "--s", "-1")
    assert code == 0
    assert doc["meta"]["calibration"] is not None


def test_verify_suite(capsys):
    code, doc, _ = run(capsys, "verify", "--suite", "signs")
    assert code == 0 and doc["passed"]
    code, doc, _ = run(capsys, "verify", "--suite", "nope")
    assert code == 2


def test_byte_identical_runs(capsys):
    argv = ["euler", "--kind", "identity-ad", "--samples", "15", "--seed", "9"]
    _, _, a = run(capsys, *argv)
    _, _, b = run(capsys, *argv)
    assert a == b
    argv = ["verify", "--suite", "padic"]
    _, _, a = run(capsys, *argv)
    _, _, b = run(capsys, *argv)
    assert a == b


def test_output_file(capsys, tmp_path):
    out = tmp_path / "o.json"
    run(capsys, "coleman", "--c", "3", "--k", "1", "--output", str(out))
    assert json.loads(out.read_text())["value"] == "1"


def test_config_file_and_env(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "run.toml"
    cfg.write_text("[run]\np = 7\nN = 6\nseed = 3\n")
    assert load_config(cfg) == RunConfig(p=7, N=6, seed=3)
    monkeypatch.setenv("PADICFACT_CONFIG", str(cfg))
    code, doc, _ = run(capsys, "kl", "--chi", "omega^2", "--s", "-1")
    assert doc["meta"]["config"]["p"] == 7 and doc["meta"]["config"]["N"] == 6
    # flags override the file
    code, doc, _ = run(capsys, "kl", "--chi", "omega^2", "--s", "-1", "--p", "5")
    assert doc["meta"]["config"]["p"] == 5 and doc["value"] == "1/3"


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        RunConfig(N=1)
    with pytest.raises(ValueError):
        RunConfig(N=10, M=5)
    bad = tmp_path / "bad.toml"
    bad.write_text("colour = 'red'\n")
    with pytest.raises(ValueError):
        load_config(bad)
    assert RunConfig().override(p=None, N=12).N == 12
