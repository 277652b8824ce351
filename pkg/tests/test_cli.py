import io as _io
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from tropcurve import cli
from tropcurve.expression import Gen

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(*argv):
    buf = _io.StringIO()
    code = cli.run([str(a) for a in argv], buf)
    return code, buf.getvalue()


def last_json(text):
    return json.loads(text.strip().splitlines()[-1])


class TestSpecExamples:
    def test_ls(self):
        code, out = run("ls", "--graph", FIX / "theta.json", "--subgraph", FIX / "u.json")
        assert code == 0 and out.strip() == '"1"'

    def test_gens_count(self):
        code, out = run("gens", "--graph", FIX / "seg4.json", "--count")
        assert code == 0 and out.strip() == "4"

    def test_express_point_verify(self):
        code, out = run("express-point", "--graph", FIX / "seg4.json", "--point", "e:1",
                        "--l", "4", "--verify")
        assert code == 0
        rep = last_json(out)
        assert rep["verdict"] == "pass" and rep["breakpoints_checked"] > 0


class TestCommands:
    def test_validate(self):
        code, out = run("validate", "--graph", FIX / "theta.json")
        assert code == 0 and last_json(out)["genus"] == 2

    def test_canon(self):
        code, out = run("canon", "--graph", FIX / "seg4_infseg.json")
        assert code == 0 and len(last_json(out)["edges"]) == 1

    def test_dist(self):
        assert run("dist", "--graph", FIX / "theta.json", "--p", "u", "--q", "v") == (0, '"1"\n')
        code, out = run("dist", "--graph", FIX / "seg4.json", "--subgraph", FIX / "seg4_mid.json",
                        "--q", "u")
        assert code == 0 and out.strip() == '"1"'

    def test_eval_expr(self):
        code, out = run("eval", "--graph", FIX / "seg4.json", "--expr", "(max f@e (const -1))",
                        "--point", "e:0")
        assert code == 0 and out.strip() == '"-1"'

    def test_eval_function(self):
        code, out = run("eval", "--graph", FIX / "seg4.json", "--function", FIX / "seg4_cf1.json",
                        "--point", "e:1")
        assert code == 0 and out.strip() == '"0"'

    def test_cf(self):
        code, out = run("cf", "--graph", FIX / "seg4.json", "--point", "e:2", "--l", "2")
        assert code == 0
        assert last_json(out)["edges"]["e"]["breakpoints"] == [["0", "-2"], ["2", "0"], ["4", "-2"]]

    def test_gens(self):
        code, out = run("gens", "--graph", FIX / "seg4.json")
        assert last_json(out)["symbols"] == ["f@e", "g@e", "h@e", "vinf@u", "vinf@v"]

    @pytest.mark.parametrize("argv", [
        ["express-subgraph", "--graph", "seg4.json", "--subgraph", "seg4_two_points.json",
         "--l", "1/2", "--verify"],
        ["express-fn", "--graph", "seg4.json", "--function", "seg4_cf1.json", "--verify"],
        ["decompose", "--graph", "seg4.json", "--function", "seg4_cf1.json", "--verify"],
        ["verify-identities", "--graph", "seg4.json", "--subgraph", "seg4_mid.json", "--l", "1"],
        ["verify-identities", "--graph", "theta.json", "--subgraph", "u.json", "--l", "1/2"],
    ])
    def test_verified(self, argv):
        argv = [str(FIX / a) if a.endswith(".json") else a for a in argv]
        code, out = run(*argv)
        assert code == 0 and last_json(out)["verdict"] == "pass"

    def test_annotate(self):
        code, out = run("express-point", "--graph", FIX / "seg4.json", "--point", "e:1",
                        "--l", "4", "--annotate")
        assert code == 0 and "; " in out

    def test_tree_pair(self):
        code, out = run("tree-pair", "--graph", FIX / "star4.json")
        d = last_json(out)
        assert code == 0 and len(d["pairs"]) == 2 and len(d["functions"]) == 2

    def test_morphism(self):
        m = ["--source", FIX / "fold_source.json", "--target", FIX / "fold_target.json",
             "--morphism", FIX / "fold.json"]
        code, out = run("morphism-check", *m, "--midpoints")
        assert code == 0 and last_json(out)["degree"] == 2
        code, out = run("pullback", *m, "--function", FIX / "fold_ramp.json")
        assert code == 0
        assert last_json(out)["edges"]["e1"]["breakpoints"][-1] == ["1", "1"]
        code, out = run("witness", *m, "--point", "d:1/2", "--candidate", FIX / "fold_zero.json")
        d = last_json(out)
        assert code == 0 and (d["a"], d["b"], d["verified"]) == ("1", "2", True)


class TestExitCodes:
    def test_missing_file(self):
        code, out = run("validate", "--graph", FIX / "nope.json")
        assert code == 2 and "error" in last_json(out)

    def test_syntax_error_position(self):
        code, out = run("eval", "--graph", FIX / "seg4.json", "--expr", "(max f@e", "--point", "u")
        d = last_json(out)
        assert code == 2 and d["error"] == "ExprSyntaxError" and "position" in d

    def test_missing_flag(self):
        code, out = run("ls", "--graph", FIX / "theta.json")
        assert code == 2

    def test_not_a_tree(self):
        code, out = run("tree-pair", "--graph", FIX / "theta.json")
        assert code == 2 and last_json(out)["error"] == "NotATree"

    def test_bad_morphism(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"vertex_map": {"p0": "q0", "p1": "q0", "p2": "q0"},
                                   "edge_map": {"e1": "d", "e2": "d"}}))
        code, out = run("morphism-check", "--source", FIX / "fold_source.json",
                        "--target", FIX / "fold_target.json", "--morphism", bad)
        assert code == 2 and last_json(out)["error"] == "ConditionViolated"

    def test_mismatch(self, monkeypatch):
        # a wrong builder must be caught by the round trip, with a counterexample
        monkeypatch.setattr(cli, "express_point_cf", lambda c, x, l: Gen("g@e"))
        code, out = run("express-point", "--graph", FIX / "seg4.json", "--point", "e:2",
                        "--l", "2", "--verify")
        rep = last_json(out)
        assert code == 1 and rep["verdict"] == "fail"
        assert rep["details"][0]["mismatch"] and rep["details"][0]["lhs"] != rep["details"][0]["rhs"]


class TestSuite:
    def test_fixture_suite(self):
        code, out = run("--suite", FIX / "suite")
        d = last_json(out)
        assert code == 0 and d["verdict"] == "pass"
        assert [t["task"] for t in d["tasks"]] == sorted(t["task"] for t in d["tasks"])

    def test_failing_task(self, tmp_path):
        for f in ("seg4.json", "u.json"):
            shutil.copy(FIX / f, tmp_path / f)
        (tmp_path / "t.json").write_text(json.dumps(
            {"argv": ["gens", "--graph", "seg4.json", "--count"], "expect_exit": 1}))
        code, out = run("--suite", tmp_path)
        assert code == 1 and last_json(out)["verdict"] == "fail"

    def test_reproducible(self):
        a = run("express-point", "--graph", FIX / "seg4.json", "--point", "e:1", "--l", "4", "--verify")
        b = run("express-point", "--graph", FIX / "seg4.json", "--point", "e:1", "--l", "4", "--verify")
        assert a == b


def test_console_script():
    exe = shutil.which("tropcurve")
    cmd = [exe] if exe else [sys.executable, "-m", "tropcurve"]
    r = subprocess.run(cmd + ["gens", "--graph", str(FIX / "seg4.json"), "--count"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "4"
