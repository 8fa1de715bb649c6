import json
from importlib import resources

import jsonschema
import pytest

from invbilin.cli import run

SCHEMA = json.loads(resources.files("invbilin").joinpath("report.schema.json").read_text())


def _run(tmp_path, *argv, code=0):
    out = tmp_path / "r.json"
    assert run(list(argv) + ["--out", str(out)]) == code
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    return report


def test_solve_n1(tmp_path):
    rep = _run(tmp_path, "solve", "--weights", "0,0", "--degree", "3")
    (res,) = rep["result"]["results"]
    assert res["kernel_dim"] == 1
    assert "seconds" not in rep


def test_solve_n2_negative_nu(tmp_path):
    rep = _run(tmp_path, "solve", "--n", "2", "--w1", "0,-1", "--w2", "0,-1", "--degree", "3",
               "--nu", "-2,-3")
    assert [r["kernel_dim"] for r in rep["result"]["results"]] == [1]


def test_scan_and_jobs_give_identical_bytes(tmp_path):
    args = ["scan", "--degree", "2", "--grid", "-1:1:1/2"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(args + ["--jobs", "1", "--out", str(a)]) == 0
    assert run(args + ["--jobs", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    jsonschema.validate(json.loads(a.read_text()), SCHEMA)


def test_scan_pairs_n2(tmp_path):
    rep = _run(tmp_path, "scan", "--n", "2", "--degree", "1", "--pair", "2,0|2,0",
               "--pair", "0,0|0,0")
    assert len(rep["result"]["points"]) == 2


def test_locus(tmp_path):
    rep = _run(tmp_path, "locus", "--degree", "3")
    assert sorted(map(tuple, rep["result"]["points"])) == \
        [("0", "0"), ("0", "2"), ("2", "0"), ("2/3", "2/3")]


def test_verify_pass_and_fail(tmp_path):
    rep = _run(tmp_path, "verify", "--op", "P6", "--n", "1", "--param", "mu=1/2",
               "--param", "nu=-1/3")
    assert rep["result"]["verdict"] == "pass"
    rep = _run(tmp_path, "verify", "--op", "P6_broken", "--n", "1", code=1)
    assert rep["result"]["verdict"] == "fail" and rep["result"]["witness"]


def test_fit(tmp_path):
    rep = _run(tmp_path, "fit", "--a", "-2/3", "--b", "-2/3", "--degree", "3")
    assert rep["result"]["dimension"] == 1
    # both printed sign variants are the same operator
    assert len(rep["result"]["matches_printed"]) == 2


def test_catalog(tmp_path):
    rep = _run(tmp_path, "catalog", "--n", "1,2")
    assert rep["result"]["operators"]


def test_timing_is_opt_in(tmp_path):
    rep = _run(tmp_path, "locus", "--degree", "1", "--timing")
    assert "seconds" in rep


def test_tsv(tmp_path, capsys):
    assert run(["scan", "--degree", "1", "--grid", "0,1", "--format", "tsv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all("\t" in ln for ln in lines)


@pytest.mark.parametrize("argv", [
    ["solve", "--weights", "1/0,1", "--degree", "1"],
    ["solve", "--weights", "a,b", "--degree", "1"],
    ["scan", "--degree", "1", "--grid", "0:1:0"],
    ["verify", "--op", "P9", "--n", "2"],
    ["verify", "--op", "T2", "--n", "2"],
    ["locus", "--degree", "9"],
])
def test_config_errors_exit_2_without_output(tmp_path, argv):
    out = tmp_path / "r.json"
    assert run(argv + ["--out", str(out)]) == 2
    assert not out.exists()


def test_truncation_error_exits_3(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = run(["solve", "--n", "2", "--w1", "1/2,0", "--w2", "0,0", "--degree", "2",
                "--nu", "-3/2,0", "--truncation", "1", "--out", str(out)])
    assert code == 3 and not out.exists()
    assert "needed truncation: 2" in capsys.readouterr().err


def test_large_grid_guard(tmp_path):
    out = tmp_path / "r.json"
    assert run(["scan", "--n", "2", "--degree", "1", "--grid", "-9:9:1/2",
                "--out", str(out)]) == 2
