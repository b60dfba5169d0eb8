import io
import json
import os
import subprocess
import sys

import pytest

from toricsym.cli import main
from toricsym.fan import projective_space


def run(*argv, env=None):
    buf = io.StringIO()
    old = dict(os.environ)
    if env:
        os.environ.update(env)
    try:
        status = main(list(argv), stdout=buf)
    finally:
        os.environ.clear()
        os.environ.update(old)
    return status, buf.getvalue()


@pytest.fixture
def p2_file(tmp_path):
    path = tmp_path / "p2.json"
    path.write_text(json.dumps(projective_space(2).to_dict()))
    return str(path)


def test_validate(p2_file):
    status, out = run("validate", "--fan", p2_file)
    data = json.loads(out)
    assert status == 0 and data["passed"] and data["schema_version"]


def test_validate_failure(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2]]}))
    status, out = run("validate", "--fan", str(path))
    assert status == 1 and not json.loads(out)["passed"]
    status, out = run("dims", "--fan", str(path))
    assert status == 3 and json.loads(out)["error"]["type"] == "precondition"


def test_dims_both():
    status, out = run("dims", "--example", "BlP2", "--p-max", "3", "--presentation", "both")
    data = json.loads(out)
    assert status == 0 and data["agree"]
    assert data["dims"]["R"]["dims"][1] == 6


def test_agree_and_cox():
    status, out = run("agree", "--example", "P1xP1")
    assert status == 0 and json.loads(out)["dims"]["R"][1] == 6
    status, out = run("cox", "--example", "BlP2", "--presentation", "R", "--format", "text")
    assert status == 0 and "S1*T1 + S2*T2 + S3*S4*T3" in out


def test_hypertoric_command():
    status, out = run("hypertoric", "--example", "BlP3", "--theta", "1,-2", "--weights", "1,1,1,1,0;-1,-1,-1,0,1")
    data = json.loads(out)
    assert status == 0 and data["unimodular"] and data["n_components"] == 2
    status, out = run("hypertoric", "--example", "BlP3", "--theta", "1,-1", "--weights", "1,1,1,1,0;-1,-1,-1,0,1")
    data = json.loads(out)
    assert data["unimodular"] and not data["generic"]
    status, out = run("hypertoric", "--example", "BlP3", "--theta", "1", "--weights", "1,1,1,1,0;-1,-1,-1,0,1")
    assert status == 2
    status, out = run("hypertoric", "--example", "BlP3", "--theta", "1,1", "--weights", "1,1,1,1,1;0,0,0,1,1")
    assert status == 2


def test_generators_cache_is_byte_identical(tmp_path):
    cache = tmp_path / "cache"
    args = ("generators", "--example", "BlP2", "--degree-bound", "2")
    _, cold = run(*args, "--cache-dir", str(cache))
    assert len(list(cache.iterdir())) == 1
    _, warm = run(*args, "--cache-dir", str(cache))
    _, none = run(*args)
    _, env = run(*args, env={"TORICSYM_CACHE_DIR": str(cache)})
    assert cold == warm == none == env


def test_corrupt_cache_is_recomputed(tmp_path):
    cache = tmp_path / "c"
    args = ("generators", "--example", "P2", "--cache-dir", str(cache))
    _, first = run(*args)
    (entry,) = cache.iterdir()
    entry.write_text("{not json")
    _, second = run(*args)
    assert first == second


def test_truncation_warning():
    status, out = run("generators", "--example", "BlP2", "--degree-bound", "1")
    data = json.loads(out)
    assert status == 0 and "warning" in data


@pytest.mark.parametrize(
    "argv,code",
    [
        (["dims"], 2),
        (["dims", "--fan", "/no/such/file.json"], 2),
        (["dims", "--example", "P9"], 2),
        (["dims", "--example", "P1", "--p-max", "-1"], 2),
        (["dims", "--example", "P1", "--p-max", "x"], 2),
        (["frobnicate"], 2),
        (["generators", "--example", "P1", "--degree-bound", "0"], 2),
    ],
)
def test_error_paths_are_structured(argv, code):
    status, out = run(*argv)
    assert status == code
    assert "error" in json.loads(out)


def test_malformed_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{")
    status, out = run("validate", "--fan", str(path))
    assert status == 2 and json.loads(out)["error"]["type"] == "input"


def test_examples_listing():
    status, out = run("examples")
    assert "BlP4" in json.loads(out)["examples"]
    status, out = run("examples", "F2")
    assert json.loads(out)["fan"]["rays"][2] == [-1, 2]


def test_repeated_runs_identical():
    a = run("dims", "--example", "F1")[1]
    b = run("dims", "--example", "F1")[1]
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "toricsym", "dims", "--example", "P1", "--p-max", "4", "--presentation", "R"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["dims"]["R"]["dims"] == [1, 3, 5, 7, 9]
