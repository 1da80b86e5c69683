import json
import math
import subprocess
import sys

import numpy as np
import pytest

from levyhunt import ExponentHandle
from levyhunt.cli import load_spec, main, parse_spec


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


DRIFT = {"dim": 1, "a": [1.0], "Q": [[0.0]], "levy_measure": {"components": []}}
TWO_SIDED = {"dim": 1, "a": [0.0], "Q": [[0.0]], "levy_measure": {"components": [
    {"type": "stable_power", "alpha": 1.0, "c_plus": 1.0, "c_minus": 0.5, "cutoff": "inf"},
    {"type": "atoms", "atoms": [{"x": [2.0], "w": 0.25}]}]}}


class TestExponent:
    def test_brownian(self, capsys):
        code, out, _ = run(capsys, "exponent", "preset:brownian", "--z", "2")
        row = json.loads(out)["rows"][0]
        assert code == 0 and row["re"] == 2.0 and row["im"] == 0.0

    def test_drift(self, capsys, tmp_path):
        code, out, _ = run(capsys, "exponent", write(tmp_path, "d.json", DRIFT), "--z", "3")
        row = json.loads(out)["rows"][0]
        assert row["A"] == 1.0 and row["B"] == pytest.approx(math.sqrt(10), rel=1e-15)

    def test_malformed_json(self, capsys, tmp_path):
        code, _, err = run(capsys, "exponent", write(tmp_path, "bad.json", '{"dim": 1,\n "a": [0'),
                           "--z", "1")
        assert code == 2 and "line 2" in err and "column" in err

    def test_unknown_key(self, capsys, tmp_path):
        doc = dict(DRIFT, colour="red")
        code, _, err = run(capsys, "exponent", write(tmp_path, "k.json", doc), "--z", "1")
        assert code == 2 and "colour" in err

    def test_tsv_grid(self, capsys):
        code, out, _ = run(capsys, "exponent", "preset:brownian", "--grid", "1", "100", "3",
                           "--format", "tsv")
        lines = out.strip().split("\n")
        assert lines[0] == "z\tre\tim\tA\tB" and len(lines) == 4
        z, re_, *_ = lines[2].split("\t")
        assert float(re_) == pytest.approx(float(z) ** 2 / 2)

    def test_unknown_preset(self, capsys):
        code, _, err = run(capsys, "exponent", "preset:nope", "--z", "1")
        assert code == 2 and "nope" in err


class TestCheck:
    def test_example_29(self, capsys):
        code, out, _ = run(capsys, "check", "preset:example-2.9", "--condition", "thm26")
        assert code == 0 and json.loads(out)["verdict"] == "holds"

    def test_nd(self, capsys):
        _, out, _ = run(capsys, "check", "preset:brownian", "--condition", "nd")
        assert json.loads(out)["verdict"] == "holds"

    def test_stable_half_thm26(self, capsys):
        _, out, _ = run(capsys, "check", "preset:symmetric-stable-0.5", "--condition", "thm26")
        assert json.loads(out)["verdict"] == "fails"

    def test_unknown_condition(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["check", "preset:brownian", "--condition", "sp"])
        assert exc.value.code == 2

    def test_thm25_needs_params(self, capsys):
        code, _, _ = run(capsys, "check", "preset:brownian", "--condition", "thm25")
        assert code == 2

    @pytest.mark.parametrize("cond,extra", [("sym", []), ("kf", []), ("rao", ["--family", "log"]),
                                            ("cba", []), ("s", []), ("repsi-log", []),
                                            ("loglog", []), ("hw", []), ("nu-alpha", ["--alpha", "1"]),
                                            ("bg", []), ("pro123", ["--family", "log"])])
    def test_every_condition_runs(self, capsys, cond, extra):
        code, out, _ = run(capsys, "check", "preset:symmetric-stable-1.5", "--condition", cond, *extra)
        doc = json.loads(out)
        assert code == 0 and doc["verdict"] in ("holds", "fails", "unknown")
        assert doc["config"]["zmax"] == 1e6

    def test_type_ab(self, capsys):
        code, out, _ = run(capsys, "check", "preset:type-ab-0.7-0.8", "--condition", "type-ab")
        assert code == 0 and json.loads(out)["verdict"] == "holds"

    def test_text(self, capsys):
        code, out, _ = run(capsys, "check", "preset:brownian", "--condition", "nd", "--text")
        assert code == 0 and "holds" in out.lower()


class TestClassify:
    def test_c2(self, capsys):
        _, out, _ = run(capsys, "classify", "preset:c2-failure")
        doc = json.loads(out)
        assert doc["verdict"] == "fails" and doc["case"]["case"] == "C2"
        assert doc["chain"][0]["rule"] == "bretagnolle-case-c2"

    def test_stable_15(self, capsys):
        _, out, _ = run(capsys, "classify", "preset:symmetric-stable-1.5")
        doc = json.loads(out)
        assert doc["verdict"] == "holds"
        assert [e["rule"] for e in doc["chain"]] == ["bretagnolle-case-b", "kesten-integral"]

    def test_stable_subordinator(self, capsys):
        _, out, _ = run(capsys, "classify", "preset:stable-subordinator-0.5")
        assert json.loads(out)["verdict"] == "unknown"

    def test_report_keys(self, capsys):
        _, out, _ = run(capsys, "classify", "preset:brownian")
        doc = json.loads(out)
        assert list(doc)[:5] == ["verdict", "case", "hitting_set", "chain", "warnings"]
        assert set(doc["chain"][0]) == {"rule", "anchor", "evidence", "source"}

    def test_deterministic(self, capsys):
        outs = [run(capsys, "classify", "preset:example-2.9")[1] for _ in range(2)]
        assert outs[0] == outs[1]

    def test_text_mode(self, capsys):
        code, out, _ = run(capsys, "classify", "preset:c2-failure", "--text")
        assert code == 0 and "fails" in out.lower()


class TestSum:
    def test_r1(self, capsys):
        _, out, _ = run(capsys, "sum", "preset:brownian", "preset:compound-poisson")
        doc = json.loads(out)
        assert doc["verdict"] == "holds" and doc["chain"][-1]["rule"] == "compound-poisson-sum"

    def test_r2(self, capsys, tmp_path):
        s1 = {"dim": 1, "a": [0.2], "Q": [[1.0]], "levy_measure": {"components": [
            {"type": "atoms", "atoms": [{"x": [0.5], "w": 1.0}]}]}}
        s2 = {"dim": 1, "a": [-0.4], "Q": [[0.5]], "levy_measure": {"components": [
            {"type": "atoms", "atoms": [{"x": [-2.0], "w": 3.0}]}]}}
        _, out, _ = run(capsys, "sum", write(tmp_path, "1.json", s1), write(tmp_path, "2.json", s2))
        assert json.loads(out)["chain"][-1]["rule"] == "solution-condition-sum"

    def test_r3(self, capsys):
        _, out, _ = run(capsys, "sum", "preset:type-ab-0.7-0.8", "preset:type-ab-0.2-0.3",
                        "--assert-h1")
        doc = json.loads(out)
        assert doc["verdict"] == "holds"
        assert doc["chain"][0]["source"] == "asserted"
        assert doc["chain"][-1]["rule"] == "im-domination-sum"


class TestDecompose:
    def test_pro35(self, capsys, tmp_path):
        doc = {"dim": 1, "a": [0.0], "Q": [[0.0]], "levy_measure": {"components": [
            {"type": "atoms", "atoms": [{"x": [0.5], "w": 2.0}]},
            {"type": "stable_power", "alpha": 1.5, "c_plus": 1.0, "c_minus": 1.0, "cutoff": 1.0}]}}
        code, out, _ = run(capsys, "decompose", write(tmp_path, "p.json", doc), "--method", "pro35")
        rep = json.loads(out)
        assert code == 0 and rep["x1"]["a"] == [1.0]
        assert rep["additivity_max_rel_error"] < 1e-9

    def test_thm25_roundtrip(self, capsys, tmp_path):
        prefix = str(tmp_path / "out")
        code, out, _ = run(capsys, "decompose", write(tmp_path, "t.json", TWO_SIDED),
                           "--method", "thm25", "--k", "0.5", "--delta", "0.5", "--out", prefix)
        rep = json.loads(out)
        assert code == 0 and rep["additivity_max_rel_error"] < 1e-9
        for path in rep["outputs"]:
            original = open(path).read()
            _, again, _ = run(capsys, "spec", path)
            assert again == original
        t, _ = load_spec(str(tmp_path / "t.json"))
        t1, _ = load_spec(rep["outputs"][0])
        t2, _ = load_spec(rep["outputs"][1])
        z = np.logspace(-2, 4, 64)
        diff = ExponentHandle(t).psi_grid(z) - ExponentHandle(t1).psi_grid(z) - ExponentHandle(t2).psi_grid(z)
        assert np.max(np.abs(diff) / np.maximum(1, np.abs(ExponentHandle(t).psi_grid(z)))) < 1e-9

    def test_thm25_unverifiable(self, capsys, tmp_path):
        code, _, err = run(capsys, "decompose", write(tmp_path, "t.json", TWO_SIDED),
                           "--method", "thm25", "--k", "0.4", "--delta", "0.5")
        assert code == 4 and "hypothesis" in err


class TestSpec:
    def test_parse_assertions(self):
        doc = dict(DRIFT, **{"assert": {"h_holds": True}})
        t, asserted = parse_spec(doc)
        assert asserted == {"h_holds": True} and t.a[0] == 1.0

    def test_unknown_assertion(self, capsys, tmp_path):
        doc = dict(DRIFT, **{"assert": {"psychic": True}})
        code, _, _ = run(capsys, "classify", write(tmp_path, "a.json", doc))
        assert code == 2

    def test_invalid_triplet(self, capsys, tmp_path):
        doc = {"dim": 2, "a": [0, 0], "Q": [[1, 2], [2, 1]], "levy_measure": {"components": []}}
        code, _, err = run(capsys, "classify", write(tmp_path, "q.json", doc))
        assert code == 2 and "eigenvalue" in err

    def test_canonical_idempotent(self, capsys, tmp_path):
        _, once, _ = run(capsys, "spec", write(tmp_path, "s.json", TWO_SIDED))
        _, twice, _ = run(capsys, "spec", write(tmp_path, "s2.json", once))
        assert once == twice

    @pytest.mark.parametrize("comp", [
        {"type": "log_singular", "c": 1.0, "delta": 0.5},
        {"type": "type_alpha_beta", "rho": [{"coef": 1.0, "index": 0.5}],
         "alpha": 0.4, "beta": 0.6, "c": 2.0},
        {"type": "reflected", "inner": {"type": "stable_power", "alpha": 0.5, "c_plus": 1.0,
                                        "c_minus": 0.0, "cutoff": 1.0}},
        {"type": "scaled_restriction", "k": 0.5, "lo": 0.0, "hi": 0.5,
         "inner": {"type": "stable_power", "alpha": 1.5, "c_plus": 1.0, "c_minus": 1.0,
                   "cutoff": "inf"}},
    ])
    def test_component_roundtrip(self, capsys, tmp_path, comp):
        doc = {"dim": 1, "a": [0.0], "Q": [[0.0]], "levy_measure": {"components": [comp]}}
        _, once, _ = run(capsys, "spec", write(tmp_path, "c.json", doc))
        _, twice, _ = run(capsys, "spec", write(tmp_path, "c2.json", once))
        assert once == twice

    def test_stdin(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "levyhunt", "exponent", "-", "--z", "2"],
                              input=json.dumps(DRIFT), capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["rows"][0]["im"] == 2.0


def test_catalog_command(capsys):
    _, out, _ = run(capsys, "catalog")
    assert "c2-failure" in json.loads(out)["presets"]


def test_console_script():
    proc = subprocess.run(["levyhunt", "classify", "preset:brownian"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"] == "holds"
