import json
import os
import subprocess
import sys

import pytest

from leopoldt.cli import main


def run(*args, env=None):
    return subprocess.run([sys.executable, "-m", "leopoldt", *args], capture_output=True, text=True, env=env)


def call(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_f_examples(capsys):
    code, out, _ = call(capsys, "compute-f", "--p", "5", "--d", "1", "--chi", "d=1,index=0", "--j", "1",
                        "--level", "2")
    data = json.loads(out)
    assert code == 0 and len(data["coeffs"]) == 25 and data["relation"] == "t_regularized"
    code, out, _ = call(capsys, "compute-f", "--p", "3", "--d", "5", "--chi", "d=5,index=2", "--j", "0")
    assert code == 0 and json.loads(out)["relation"] == "direct"


@pytest.mark.parametrize("args", [
    ["compute-f", "--p", "4", "--d", "1", "--chi", "d=1,index=0", "--j", "1"],
    ["compute-f", "--p", "5", "--d", "5", "--chi", "d=5,index=1", "--j", "0"],
    ["compute-f", "--p", "5", "--d", "1", "--chi", "d=1,index=0", "--j", "2"],
    ["compute-f", "--p", "5", "--d", "3", "--chi", "d=4,index=1", "--j", "0"],
    ["compute-f", "--p", "3", "--d", "5", "--chi", "d=5,index=2", "--j", "0", "--field-f", "1"],
])
def test_compute_f_invalid(capsys, args):
    code, out, err = call(capsys, *args)
    assert code == 2 and out == "" and err.startswith("error:") and err.count("\n") == 1


def test_lambda_small(capsys, tmp_path):
    code, out, _ = call(capsys, "lambda", "--pmax", "7")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "p,lambda_minus,num_positive,fw_expectation"
    assert lines[1:] == ["3,0,0,0", "5,0,0,1/4", "7,0,0,1/3"]
    code, out, _ = call(capsys, "lambda", "--pmax", "2")
    assert code == 0 and out == "p,lambda_minus,num_positive,fw_expectation\n"
    target = tmp_path / "lam.csv"
    code, out, _ = call(capsys, "lambda", "--pmax", "5", "--out", str(target))
    assert code == 0 and out == "" and target.read_text().splitlines()[-1] == "5,0,0,1/4"


def test_lambda_incomplete(capsys):
    # cap 1 leaves no level to search, so every row is NA
    code, out, _ = call(capsys, "lambda", "--pmax", "5", "--cap", "1")
    assert code == 1 and out.splitlines()[-1] == "5,NA,NA,1/4"


def test_lambda_parallel_matches_serial():
    a = run("lambda", "--pmax", "13")
    b = run("lambda", "--pmax", "13", "--jobs", "3")
    assert a.returncode == b.returncode == 0 and a.stdout == b.stdout


def test_verify_examples(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "operators", "--p", "3", "--seed", "7")
    data = json.loads(out)
    assert code == 0 and data["failures"] == [] and data["cases"] > 0
    code, out, _ = call(capsys, "verify", "--suite", "matrix", "--p", "3", "--d", "5")
    data = json.loads(out)
    assert code == 0
    assert {r["params"]["rank_C"] for r in data["records"] if "rank_C" in r["params"]} == {4}
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nosuch"])
    assert exc.value.code == 2


def test_independence_examples(capsys):
    code, out, _ = call(capsys, "independence", "--p", "5", "--d", "1", "--level", "2")
    data = json.loads(out)
    assert code == 0 and data["rank"] == 3 and data["verdict"] == "consistent-with-independence"
    code, out, _ = call(capsys, "independence", "--p", "3", "--d", "5", "--chis", "1,2,3", "--level", "2")
    assert code == 0 and json.loads(out)["rank"] == 4
    code, out, err = call(capsys, "independence", "--p", "3", "--d", "5", "--chis", "1,1", "--level", "2")
    assert code == 2 and out == "" and "hypothesis violated" in err
    code, out, _ = call(capsys, "independence", "--p", "3", "--d", "5", "--level", "2")
    assert code == 0 and json.loads(out)["params"]["chars"] == [1, 2, 3]


def test_bad_list_argument():
    with pytest.raises(SystemExit) as exc:
        main(["independence", "--p", "3", "--d", "5", "--chis", "1,x"])
    assert exc.value.code == 2


@pytest.mark.parametrize("args", [
    ["compute-f", "--p", "3", "--d", "5", "--chi", "d=5,index=1", "--j", "0", "--level", "2"],
    ["verify", "--suite", "sinnott", "--p", "5", "--seed", "3"],
    ["independence", "--p", "5", "--d", "3", "--chis", "1"],
    ["lambda", "--pmax", "11"],
])
def test_byte_identical_output(args):
    first, second = run(*args), run(*args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout and first.stdout


def test_logging_goes_to_stderr():
    env = dict(os.environ, LEOPOLDT_LOG="debug")
    res = run("compute-f", "--p", "5", "--d", "1", "--chi", "d=1,index=0", "--j", "1", env=env)
    assert res.returncode == 0
    json.loads(res.stdout)
    assert "DEBUG" in res.stderr
