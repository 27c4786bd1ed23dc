import json
import subprocess
import sys
from pathlib import Path

import pytest

from diamondtrs import corpus
from diamondtrs.cli import run_command
from diamondtrs.formats import parse_trs


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("inputs")
    paths = {}
    for name in corpus.NAMES:
        p = root / f"{name}.tm"
        p.write_text(corpus.machine_text(name))
        paths[name] = str(p)
    r1 = root / "r1.trs"
    r1.write_text("(VAR)\n(RULES\n  b -> a\n  b -> c\n)\n")
    paths["r1"] = str(r1)
    bad = root / "bad.trs"
    bad.write_text("(VAR x)\n(RULES\n  f(x) -> f(x,x)\n)\n")
    paths["bad"] = str(bad)
    paths["root"] = root
    return paths


def test_check_halt1(files):
    code, out, _ = run_command(["check", "--machine", files["halt1"], "--shape", "local-confluence"])
    assert code == 0
    assert "verdict: holds (exact)" in out


def test_check_loop2(files):
    code, out, _ = run_command(["check", "--machine", files["loop2"], "--shape", "successor"])
    assert code == 1
    assert "verdict: counterexample (exact)" in out and "peak: init" in out


def test_check_loop1(files):
    code, out, _ = run_command(["check", "--machine", files["loop1"], "--shape", "diamond", "--budget", "steps=200"])
    assert code == 2 and "verdict: unknown" in out


def test_check_json(files):
    code, out, _ = run_command(["check", "--machine", files["loop2"], "--shape", "*,*", "--cross-check", "--json"])
    report = json.loads(out)
    assert code == 1 and report["verdict"] == "counterexample (exact)"
    d = report["details"]
    assert d["peak"] == "init" and len(d["branches"]) == 2
    assert d["evidence"]["nontermination"]["complete"] is True
    trace = d["evidence"]["branch_traces"][0]
    assert trace[0] == {"term": "init"} and trace[-1]["term"] == d["branches"][0]
    assert d["evidence"]["cross_check"]["peak"] == "init"


def test_check_trs(files):
    code, out, _ = run_command(["check", files["r1"], "--shape", "local-confluence", "--seed", "b"])
    assert code == 1 and "branches:" in out
    code, out, _ = run_command(["check", files["r1"], "--shape", "*,*", "--peak", "a", "--peak", "c"])
    assert code == 0 and "holds (bounded)" in out


def test_simulate(files):
    code, out, _ = run_command(["simulate", files["count3"], "--steps", "10", "--trace"])
    assert code == 0 and "verdict: halted" in out and "steps: 3" in out
    assert run_command(["simulate", files["loop2"], "--steps", "10"])[0] == 1
    assert run_command(["simulate", files["loop1"], "--steps", "10"])[0] == 2


def test_compile(files, tmp_path):
    code, out, _ = run_command(["compile", files["halt1"]])
    assert code == 0 and len(parse_trs(out).rules) == 7
    target = tmp_path / "halt1.trs"
    code, rep, _ = run_command(["compile", files["halt1"], "-o", str(target)])
    assert code == 0 and target.read_text() == out and "rules: 7" in rep


def test_encode(files):
    code, out, _ = run_command(["encode", files["count3"], "--config", "b 2 0:m 1:m", "--json"])
    assert code == 0
    assert json.loads(out)["details"]["term"] == "st_b(cons(blank,cons(m,cons(m,nil))),nil)"
    code, out, _ = run_command(["encode", files["count3"], "--decode", "st_b(cons(blank,cons(m,nil)),nil)"])
    assert code == 0 and "verdict: decoded" in out
    assert run_command(["encode", files["count3"], "--decode", "term"])[0] == 2
    assert run_command(["encode", files["count3"], "--config", "zz 0"])[0] == 3


def test_rewrite(files, tmp_path):
    trs = tmp_path / "h.trs"
    trs.write_text(run_command(["compile", files["halt1"]])[1])
    code, out, _ = run_command(["rewrite", str(trs), "--term", "init", "--steps", "10", "--json"])
    steps = json.loads(out)["details"]["trace"]
    assert code == 0 and steps[-1]["term"] == "term"
    assert [s.get("rule") for s in steps[1:]] == [6, 0, 1, 4, 2, 5]


def test_graph(files):
    code, dot, _ = run_command(["graph", "--machine", files["halt1"]])
    assert code == 0 and dot.startswith("digraph")
    code, dot2, _ = run_command(["graph", files["r1"], "--seed", "b"])
    assert code == 0 and dot2.count("->") == 2


@pytest.mark.parametrize("argv, code", [
    (["frobnicate"], 3),
    (["check", "--shape", "diamond"], 3),
    (["check", "--machine", "/nonexistent.tm", "--shape", "diamond"], 4),
    (["check", "--machine", "X", "--shape", "bogus"], 3),
    (["check", "--machine", "X", "--shape", "diamond", "--budget", "steps=0"], 3),
    (["rewrite", "BAD", "--term", "a"], 4),
    (["rewrite", "R1", "--term", "zz"], 3),
    (["graph", "R1"], 3),
])
def test_error_codes(files, argv, code):
    argv = [files["bad"] if a == "BAD" else files["r1"] if a == "R1" else files["halt1"] if a == "X" else a
            for a in argv]
    got, out, err = run_command(argv)
    assert got == code and out == "" and err


def test_format_error_names_file_and_line(files):
    _, _, err = run_command(["rewrite", files["bad"], "--term", "a"])
    assert f"{files['bad']}:3:" in err


def test_invalid_machine_file(files, tmp_path):
    p = tmp_path / "broken.tm"
    p.write_text("states: s e\nblank: B\nstart: s\nfinal: e\n")
    code, _, err = run_command(["simulate", str(p)])
    assert code == 4 and "delta undefined at (s,B)" in err


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "diamondtrs", "check", "--machine", files["halt1"],
                           "--shape", "diamond"], capture_output=True, text=True)
    assert proc.returncode == 0 and "holds (exact)" in proc.stdout
