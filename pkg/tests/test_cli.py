"""Command line runs: exit codes, closed-loop verification and reproducibility."""

import json
from pathlib import Path

import pytest

from ainftransfer.cli import main

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"

Z8_PROBLEM = {
    "kind": "problem",
    "ring": "Z/8",
    "algebra": {
        "complex": {"gens": [["1", 0]], "relations": [{"1": 4}]},
        "unit": "1",
        "products": [["1", "1", {"1": 1}]],
    },
    "params": {"level": 3, "depth": 3},
}


def run(*argv):
    return main([str(a) for a in argv])


def write(path, doc):
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture(scope="module")
def e2_runs(tmp_path_factory):
    d = tmp_path_factory.mktemp("e2")
    for s in (1, 2):
        assert run("transfer-algebra", PROBLEMS / "e2.json", "--seed", s, "--level", 4, "-o", d / f"s{s}.json") == 0
    return d


class TestExitCodes:
    def test_ok_and_verify(self, tmp_path, capsys):
        out = tmp_path / "e1.json"
        assert run("transfer-algebra", PROBLEMS / "e1.json", "-o", out) == 0
        assert run("verify", out) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["ok"] and report["checks"]

    def test_corrupted_tower_names_the_tensor(self, tmp_path, capsys):
        out = tmp_path / "e1.json"
        run("transfer-algebra", PROBLEMS / "e1.json", "-o", out)
        doc = json.loads(out.read_text())
        entries = doc["algebra"]["tower"]["entries"]
        # break nu^2[e|1] = -[e]
        for ent in entries:
            if ent[2] == ["e", "1"]:
                ent[4] = 1
        write(out, doc)
        capsys.readouterr()
        assert run("verify", out) == 1
        err = capsys.readouterr().err
        assert "FAILED" in err and "e" in err

    def test_parse_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run("verify", bad) == 3
        assert run("transfer-algebra", write(tmp_path / "empty.json", {"kind": "problem", "ring": "Z"})) == 3

    def test_unknown_ring(self, tmp_path):
        doc = json.loads((PROBLEMS / "e1.json").read_text())
        doc["ring"] = "Z/0x"
        assert run("transfer-algebra", write(tmp_path / "r.json", doc)) == 3

    def test_hypothesis_failure(self, tmp_path):
        doc = json.loads((PROBLEMS / "e2.json").read_text())
        # x * 1 = 2x breaks the unit law
        prods = doc["algebra"]["products"]
        for p in prods:
            if p[0] == "x" and p[1] == "1":
                p[2] = {"x": 2}
        assert run("transfer-algebra", write(tmp_path / "h.json", doc)) == 2

    def test_window_error(self, tmp_path, capsys):
        p = write(tmp_path / "z8.json", Z8_PROBLEM)
        assert run("transfer-algebra", p, "--window", "0:4") == 4
        assert "depth >= 6" in capsys.readouterr().err


class TestTruncatedRuns:
    @pytest.mark.parametrize("depth", [3, 5, 7])
    def test_z8_depths(self, tmp_path, depth):
        p = write(tmp_path / "z8.json", Z8_PROBLEM)
        out = tmp_path / "out.json"
        assert run("transfer-algebra", p, "--depth", depth, "-o", out) == 0
        doc = json.loads(out.read_text())
        assert doc["algebra"]["window"] == depth - 2
        assert run("verify", out) == 0

    def test_module_on_truncated_resolution_refused(self, tmp_path):
        doc = json.loads((PROBLEMS / "e3.json").read_text())
        doc["ring"] = "Z/8"
        assert run("transfer-module", write(tmp_path / "m.json", doc)) == 4


class TestReproducibility:
    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert run("transfer-algebra", PROBLEMS / "e2.json", "--seed", 3, "--level", 3, "-o", out) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_deterministic_mode_ignores_seed(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run("transfer-algebra", PROBLEMS / "e2.json", "--mode", "deterministic", "--level", 3, "-o", a)
        run("transfer-algebra", PROBLEMS / "e2.json", "--level", 3, "-o", b)
        assert json.loads(a.read_text())["algebra"] == json.loads(b.read_text())["algebra"]


class TestLoops:
    def test_algebra_lift_homotopy_and_loop(self, e2_runs, tmp_path):
        s1, s2 = e2_runs / "s1.json", e2_runs / "s2.json"
        d, d2, h, loop = (tmp_path / f"{n}.json" for n in ("d", "d2", "h", "loop"))
        assert run("lift-morphism", s1, s2, "-o", d) == 0
        assert run("lift-morphism", s1, s2, "--seed", 9, "-o", d2) == 0
        assert run("homotopy", d, d2, "-o", h) == 0
        assert run("homotopy", s1, s2, "-o", loop) == 0
        for f in (d, h, loop):
            assert run("verify", f) == 0
        h0 = json.loads(loop.read_text())["h0"]
        assert all(v["ok"] and "degree argument" in v["witness"] for v in h0.values())

    def test_module_loop(self, tmp_path):
        a, b, md, loop = (tmp_path / f"{n}.json" for n in ("a", "b", "md", "loop"))
        assert run("transfer-module", PROBLEMS / "e3.json", "--level", 3, "-o", a) == 0
        assert run("transfer-module", PROBLEMS / "e3.json", "--level", 3, "--seed", 4, "-o", b) == 0
        assert run("lift-morphism", a, b, "-o", md) == 0
        assert run("homotopy", a, b, "-o", loop) == 0
        for f in (a, md, loop):
            assert run("verify", f) == 0

    def test_resolve(self, capsys):
        assert run("resolve", PROBLEMS / "e1.json") == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["certificate"]["complete"] and doc["certificate"]["semiprojective"]

    def test_mismatched_pair(self, e2_runs, tmp_path):
        m = tmp_path / "m.json"
        run("transfer-module", PROBLEMS / "e3.json", "--level", 2, "-o", m)
        assert run("lift-morphism", e2_runs / "s1.json", m) == 3


def test_module_entry_point(tmp_path):
    import subprocess
    import sys

    p = write(tmp_path / "z8.json", Z8_PROBLEM)
    done = subprocess.run(
        [sys.executable, "-m", "ainftransfer.cli", "transfer-algebra", str(p), "--window", "0:4"],
        capture_output=True, text=True,
    )
    assert done.returncode == 4 and "window error" in done.stderr
