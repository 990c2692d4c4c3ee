import io
import json
import math

import pytest

from homological.cli import Exit, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def write(path, doc):
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def halves(tmp_path):
    return write(tmp_path / "halves.json", {"type": "step", "breakpoints": ["0", "1/2", "1"],
                                            "values": [["1", "2"], ["-1", "-2"]]})


def test_solve_two_intervals(halves):
    code, out, err = run("solve", halves)
    assert code == Exit.OK and not err
    doc = json.loads(out)
    assert doc["residual"] == "0" and doc["kind"] == "step"


def test_not_mean_zero(tmp_path):
    p = write(tmp_path / "bad.json", {"type": "discrete", "values": [["1", "2"], ["-1", "-1"]]})
    code, out, err = run("solve", p)
    assert code == Exit.NOT_MEAN_ZERO and not out
    assert "(0, 1/2)" in err


def test_parse_errors(tmp_path):
    assert run("solve", tmp_path / "missing.json")[0] == Exit.PARSE_ERROR
    p = tmp_path / "junk.json"
    p.write_text("not json")
    assert run("solve", p)[0] == Exit.PARSE_ERROR
    q = write(tmp_path / "uneq.json", {"type": "step", "breakpoints": ["0", "1/3", "1"],
                                       "values": [["2"], ["-1"]]})
    assert run("solve", q)[0] == Exit.PARSE_ERROR
    assert run("solve", "--bogus")[0] == Exit.PARSE_ERROR


def test_kwapien_demo(tmp_path):
    sol = tmp_path / "k.json"
    code, _, _ = run("solve", "--demo", "kwapien", "--out", sol)
    assert code == Exit.OK
    doc = json.loads(sol.read_text())
    assert float(doc["achieved_bound"]["approx"]) <= 78.92 * float(doc["max_entry_norm"]["approx"])
    assert len(doc["perms"]) == 4 and doc["matrix"]["rows"][0][0].__len__() == 2
    assert run("verify", sol)[0] == Exit.OK


@pytest.mark.parametrize("kind, extra", [
    ("discrete", ["--size", "7", "--dim", "3"]),
    ("step", ["--size", "5"]),
    ("cantor", ["--q", "3", "--depth", "2"]),
    ("matrix", ["--size", "4", "--cols", "5"]),
])
@pytest.mark.parametrize("norm", ["l1", "l2", "linf"])
def test_solve_verify_roundtrip(tmp_path, kind, extra, norm):
    inst, sol = tmp_path / "i.json", tmp_path / "s.json"
    assert run("generate", kind, "--seed", 17, "--norm", norm, "--out", inst, *extra)[0] == 0
    assert run("solve", inst, "--norm", norm, "--out", sol)[0] == 0
    code, out, err = run("verify", sol)
    assert code == Exit.OK, err
    assert json.loads(out)["ok"]


def test_tampered_g(tmp_path, halves):
    sol = tmp_path / "s.json"
    run("solve", halves, "--out", sol)
    doc = json.loads(sol.read_text())
    doc["g"]["values"][0] = ["1/5", "0"]
    sol.write_text(json.dumps(doc))
    code, out, err = run("verify", sol)
    assert code == Exit.VERIFY_FAILED
    assert json.loads(out)["residual"]["exact"] != "0"
    assert "residual" in err


def test_browder_profile_monotone(tmp_path):
    inst, sol = tmp_path / "i.json", tmp_path / "s.json"
    run("generate", "discrete", "--size", 6, "--seed", 3, "--out", inst)
    run("solve", inst, "--out", sol)
    code, out, _ = run("verify", sol, "--kmax", 30)
    prof = [float(p["approx"]) for p in json.loads(out)["browder_profile"]]
    assert code == 0 and len(prof) == 31 and prof == sorted(prof)


def test_oracle_pair(tmp_path):
    p = write(tmp_path / "v.json", {"type": "vectors", "vectors": [["3", "4"], ["-3", "-4"]]})
    code, out, _ = run("oracle", p)
    assert code == 0 and json.loads(out)["optimum"]["exact"] == "5"


def test_oracle_triple(tmp_path):
    s = "866025/1000000"
    p = write(tmp_path / "v.json", {"type": "vectors", "vectors": [
        ["1", "0"], ["-1/2", s], ["-1/2", "-" + s]]})
    optimum = json.loads(run("oracle", p)[1])["optimum"]
    assert abs(float(optimum["approx"]) - 1) < 1e-3


def test_oracle_sets(tmp_path):
    p = write(tmp_path / "s.json", {"type": "sets", "sets": [[["1"], ["-1"]]] * 4})
    code, out, _ = run("oracle", p, "--norm", "l1")
    assert code == 0 and json.loads(out)["optimum"]["exact"] == "1"


def test_oracle_search():
    code, out, _ = run("oracle", "--search", "--seed", 0)
    doc = json.loads(out)
    assert code == 0 and doc["within_envelope"]
    running = [float(x) for x in doc["running_max"]]
    assert running == sorted(running) and running[-1] >= 1.05
    assert running[-1] <= math.sqrt(5) / 2 + 1e-9


def test_counterexample_table():
    code, out, _ = run("counterexample", "--nmin", 1, "--nmax", 4)
    rows = json.loads(out)["rows"]
    assert rows[0]["d"] == 2 and rows[0]["min_half_sum_norm_sq"] == "1/2"
    assert rows[1]["min_half_sum_norm_sq"] == "1" and rows[1]["lower_bound_sq"] == "1/2"
    col = [float(r["lower_bound"]) for r in rows]
    assert col == sorted(col)
    code, text, _ = run("counterexample", "--nmax", 2, "--table")
    assert text.splitlines()[0].startswith("n\td")


def test_diophantine():
    code, out, _ = run("diophantine", "--x", "0.41421356", "--v", "1", "--eps", "1/10")
    doc = json.loads(out)
    assert code == 0 and doc["q"] == 12 and doc["p"] == [5]
    assert run("diophantine", "--x", "1/2", "--v", "1", "--eps", "1/100", "--qmax", 3)[0] == 3
    assert run("diophantine", "--x", "1/2", "--v", "1", "--eps", "oops")[0] == 3


@pytest.mark.parametrize("argv", [
    ["generate", "matrix", "--seed", "99", "--dim", "3"],
    ["oracle", "--random", "6", "--seed", "5"],
    ["oracle", "--search", "--seed", "2", "--trials", "3"],
    ["counterexample", "--nmax", "5", "--seed", "8"],
    ["solve", "--demo", "kwapien"],
])
def test_deterministic(argv):
    first, second = run(*argv), run(*argv)
    assert first[0] == 0 and first == second
