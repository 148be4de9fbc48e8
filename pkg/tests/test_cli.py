import io
import json
import subprocess
import sys

import jsonschema
import pytest

from epselim.cli import TRACE_SCHEMA, RunConfig, main
from epselim.fuzz import FuzzConfig, check_formula, shrink
from epselim.generate import corpus
from epselim.strategy import Fuse
from epselim.syntax import Quant
from epselim.textio import parse_formula, print_formula


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_normalize_single_step():
    code, out, _ = run("normalize", "-e", "exists x. P(x)")
    assert code == 0 and out == "P(eps x. P(x))\n"


def test_normalize_trace_lines():
    code, out, _ = run("normalize", "-e", "exists x. exists y. R(x,y)", "--strategy", "innermost", "--trace")
    lines = out.splitlines()
    assert code == 0
    assert lines[1] == "step 1: step1 at [0] quantifier exists y -> exists x. R(x, eps y. R(x, y))"
    assert lines[2].startswith("step 2: step1 at [] quantifier exists x -> ")
    assert lines[-1] == "steps: 2"


def test_normalize_unchanged():
    code, out, _ = run("normalize", "-e", "P(c)", "--trace")
    assert code == 0 and "P(c)" in out and out.endswith("steps: 0\n")


def test_json_document_validates():
    code, out, _ = run("normalize", "-e", "forall x. exists y. R(x, y)", "--format", "json",
                       "--strategy", "outermost")
    doc = json.loads(out)
    jsonschema.validate(doc, TRACE_SCHEMA)
    assert doc["stats"]["steps"] == len(doc["steps"]) == 4
    assert doc["steps"][0] == {
        "pos": [], "kind": "step1", "q": "forall", "binder": "x",
        "after": "exists y. R(eps x. ~exists y. R(x, y), y)",
    }


def test_json_for_parallel_steps_lists_all_redexes():
    code, out, _ = run("normalize", "-e", "exists x. P(x) & exists y. Q()", "--format", "json",
                       "--strategy", "parallel")
    doc = json.loads(out)
    jsonschema.validate(doc, TRACE_SCHEMA)
    assert len(doc["steps"]) == 1 and len(doc["steps"][0]["redexes"]) == 2


def test_json_validates_across_the_corpus(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("\n".join(print_formula(f) for f in corpus(150, 5)) + "\n")
    for strategy in ("innermost", "outermost", "parallel"):
        code, out, _ = run("normalize", "-f", str(path), "--format", "json", "--strategy", strategy)
        assert code == 0
        for doc in json.loads(out):
            jsonschema.validate(doc, TRACE_SCHEMA)


def test_exit_codes():
    assert run("normalize", "-e", "P(")[0] == 1
    assert run("normalize", "-e", "exists x. P(x)", "--strategy", "random")[0] == 1
    assert run("normalize")[0] == 1
    assert run("frobnicate")[0] == 1
    code, _, err = run("normalize", "-e", "exists x. exists y. exists z. R(x, y) & R(y, z)",
                       "--strategy", "outermost", "--fuse", "3")
    assert code == 2 and "step 3:" in err
    assert run("normalize", "-e", "exists x. P(x)", "--strategy", "random", "--seed", "5")[0] == 0


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("normalize")
    with pytest.raises(ValueError):
        RunConfig("normalize", expr="A", path="f.txt")
    with pytest.raises(ValueError):
        RunConfig("normalize", "random", expr="A")
    with pytest.raises(ValueError):
        RunConfig("normalize", "random", seed=2 ** 64, expr="A")


def test_check_confluence_small_runs():
    assert run("check-confluence", "--count", "0")[0] == 0
    code, out, _ = run("check-confluence", "--count", "40", "--seed", "3", "--per-formula")
    assert code == 0 and "total 40 formulas, 0 with violations" in out
    assert run("check-confluence", "--count", "40", "--seed", "3", "--per-formula")[1] == out


def test_ars_check(tmp_path):
    good = tmp_path / "good.ars"
    good.write_text("4\n1 0 1\n1 0 2\n1 1 3\n1 2 3\n")
    code, out, _ = run("ars-check", str(good))
    assert code == 0 and "conclusion (reverse ->4 well-founded): holds" in out
    single = tmp_path / "single.ars"
    single.write_text("1\n")
    assert run("ars-check", str(single), "--nf", "0")[0] == 1
    bad = tmp_path / "bad.ars"
    bad.write_text("3\n1 0 1\n1 0 2\n1 1 1\n")
    assert run("ars-check", str(bad), "--nf", "2")[0] == 4
    assert run("ars-check", str(tmp_path / "missing.ars"))[0] == 1


def test_graph_export_feeds_ars_check(tmp_path):
    code, out, _ = run("graph", "-e", "exists x. exists y. R(x, y)", "--annotate")
    assert code == 0 and out.startswith("# 0: exists x. exists y. R(x, y)")
    path = tmp_path / "g.ars"
    path.write_text(out)
    assert run("ars-check", str(path))[0] == 0


def test_stats_table():
    code, out, _ = run("stats", "--max-n", "3", "--literal-up-to", "3", "--format", "json")
    rows = {(r["n"], r["strategy"]): r["steps"] for r in json.loads(out)}
    assert rows[(2, "outermost")] == 4 and rows[(3, "outermost")] == 29


def test_output_is_byte_identical_across_processes():
    argv = [sys.executable, "-m", "epselim.cli", "normalize", "-e",
            "forall x. exists y. R(x, y)", "--strategy", "random", "--seed", "11", "--trace"]
    a = subprocess.run(argv, capture_output=True)
    b = subprocess.run(argv, capture_output=True)
    assert a.returncode == b.returncode == 0 and a.stdout == b.stdout


def test_shrinking_finds_a_small_failing_formula():
    # a deliberately strict property: "no formula has two nested quantifiers"
    def fails(g):
        return any(isinstance(n, Quant) and n.body.n_quant for n in _nodes(g))
    f = parse_formula("(A & exists x. (P(x) | forall y. R(x, y))) -> Q()")
    small = shrink(f, fails)
    assert fails(small) and small.size < f.size
    assert small == parse_formula("exists x. forall y. R(x, y)")


def _nodes(g):
    yield g
    for k in g.children():
        yield from _nodes(k)


def test_check_formula_reports_clean_formula():
    rep = check_formula(parse_formula("exists x. exists y. R(x, y)"), FuzzConfig(fuse=Fuse()))
    assert rep.ok and rep.steps["innermost"] == 2 and rep.steps["outermost"] == 4
    assert (rep.shortest, rep.longest) == (2, 4)
