import contextlib
import io
import json
import subprocess
import sys

import pytest

from kmtheta.cli import EXIT_INCIDENCE, EXIT_INPUT, EXIT_OK, RunConfig, parse_coset, run
from kmtheta.errors import InputError
from kmtheta.errfn import arctan_limit
from kmtheta.fixtures import canonical_fixture


def call(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = run(list(argv))
    text = buf.getvalue()
    return code, (json.loads(text) if text else None), text


def write_config(tmp_path, d, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return str(p)


def test_validate_default():
    code, rep, _ = call("validate")
    assert code == EXIT_OK and rep["outputs"]["passed"]
    assert rep["exit_code"] == 0
    assert set(rep) >= {"command", "inputs", "outputs", "version", "seed"}


def test_validate_incidence_failure(tmp_path):
    d = RunConfig.default().to_dict()
    d["C"]["c1p"] = d["C"]["c1"]
    code, rep, _ = call("--config", write_config(tmp_path, d), "validate")
    assert code == EXIT_INCIDENCE and not rep["outputs"]["passed"]
    assert rep["outputs"]["failures"]


def test_missing_field_is_input_error(tmp_path):
    d = RunConfig.default().to_dict()
    del d["gram"]
    code, rep, _ = call("--config", write_config(tmp_path, d), "validate")
    assert code == EXIT_INPUT and rep is None


@pytest.mark.parametrize("argv", [("efun", "e1"), ("efun", "nope", "1"), ("--jobs", "0", "validate"), ()])
def test_bad_arguments(argv):
    assert call(*argv)[0] == EXIT_INPUT


def test_unreadable_config(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert call("--config", str(p), "validate")[0] == EXIT_INPUT
    assert call("--config", str(tmp_path / "absent.json"), "validate")[0] == EXIT_INPUT


def test_efun_values():
    code, rep, _ = call("efun", "e1", "0")
    assert code == 0 and rep["outputs"]["value"] == 0
    code, rep, _ = call("efun", "e2", "0", "0")
    assert code == 0 and rep["outputs"]["value"] == 0
    code, rep, _ = call("efun", "e2_boosted", "0", "0", "0", "0")
    F = canonical_fixture()
    out = rep["outputs"]
    assert code == 0
    assert out["arctan_limit"] == pytest.approx(arctan_limit(F.config.C1, F.config.C2, F.V), abs=1e-15)
    assert out["value"] == pytest.approx(out["arctan_limit"], abs=1e-10)
    assert call("efun", "e2_boosted", "0", "0", "0", "0", "--pair", "c1", "zz")[0] == EXIT_INPUT


def test_theta_hol_zero_coefficient():
    code, rep, _ = call("theta")
    assert code == 0
    zero = next(s for s in rep["outputs"]["series"] if s["coset"] == "(0,0,0,0)")
    assert all(k != "0/1" for k, _ in zero["terms"])
    assert len(rep["outputs"]["series"]) == 4


def test_theta_complete_subset(tmp_path):
    d = RunConfig.default().to_dict()
    d["cosets"] = ["(0,0,1/2,1/2)"]
    code, rep, _ = call("--config", write_config(tmp_path, d), "theta", "--mode", "complete")
    assert code == 0
    (s,) = rep["outputs"]["series"]
    assert s["tail_bound"] <= d["tol"]["series"]


def test_byte_identical_reruns_and_jobs(tmp_path):
    a = call("theta")[2]
    b = call("theta")[2]
    c = call("--jobs", "2", "theta")[2]
    assert a == b
    assert json.loads(a)["outputs"] == json.loads(c)["outputs"]


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    code, rep, text = call("--out", str(out), "efun", "m1", "0.5")
    assert code == 0 and text == ""
    assert json.loads(out.read_text())["outputs"]["function"] == "m1"


def test_config_round_trip():
    d = RunConfig.default().to_dict()
    assert RunConfig.from_dict(d).to_dict() == d
    assert RunConfig.from_dict(json.loads(json.dumps(d))).to_dict() == d
    with pytest.raises(InputError):
        RunConfig.from_dict({**d, "extra": 1})
    with pytest.raises(InputError):
        RunConfig.from_dict({**d, "tau": {"re": 0, "im": -1}})


def test_parse_coset():
    assert parse_coset("(0,1/2)", 2).mu == parse_coset(["0", 0.5], 2).mu
    with pytest.raises(InputError):
        parse_coset("(0,1/2)", 3)
    with pytest.raises(InputError):
        parse_coset("(a,b)", 2)


def test_verify_theorem_a():
    code, rep, _ = call("--timings", "verify", "theorem-a")
    assert code == 0 and rep["outputs"]["passed"]
    assert "residuals" in rep and "timings" in rep


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "kmtheta", "efun", "e1", "1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["outputs"]["value"] == pytest.approx(0.9878111178, abs=1e-10)
