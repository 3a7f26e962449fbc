from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from branchwork import Kr, Word
from branchwork.cli import RunConfig, UsageError, main, parse_spec, parse_vertex, parse_word


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_parse_spec_forms():
    assert parse_spec('{"family":"Kr","r":5}') == Kr(5)
    assert parse_spec("Kr r=5") == Kr(5)
    assert parse_spec("G f0=3").to_json() == {"family": "G", "f0": 3, "base": 0}
    for bad in ("Kr", "X r=1", "{bad json", "Kr r=0"):
        with pytest.raises((UsageError, ValueError)):
            parse_spec(bad)


def test_parse_word_and_vertex():
    k = Kr(3)
    w = parse_word("e0 D E1 m3 D", k, 0)
    assert isinstance(w, Word) and w.n_directed == 2
    assert parse_word(json.dumps(w.to_json()), k, 0) == w
    assert parse_word("1", k, 0) == Word(k, 0)
    v = parse_vertex("e0 E1", k, 0)
    assert len(v) == 2
    with pytest.raises(UsageError):
        parse_vertex("D", k, 0)
    with pytest.raises(UsageError):
        parse_word("q7", k, 0)
    with pytest.raises(UsageError):
        parse_word("e9", k, 0)


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(Kr(3), threads=0)
    with pytest.raises(UsageError):
        RunConfig(Kr(3), budget_support=-1)


def test_section_and_act():
    code, out = run("section", "--spec", "Kr r=3", "--word", "D", "--vertex", "E1")
    assert code == 0
    obj = json.loads(out)
    assert obj["format"] == 1
    assert obj["section"] == {"level": 1, "letters": [{"rooted": {"polarity": "sparse", "support": ["1"]}}]}
    code, out = run("section", "--spec", "Kr r=3", "--word", "D", "--vertex", "1", "--portrait-depth", "1")
    assert "portrait" in json.loads(out)
    code, out = run("act", "--spec", "Kr r=3", "--word", "D", "--vertex", "E0 1")
    assert json.loads(out)["image"]["letters"][1] == {"polarity": "sparse", "support": ["0"]}


def test_order_exit_codes():
    code, out = run("order", "--spec", "Kr r=3", "--word", "D e0 D e1 D e2")
    assert code == 0 and json.loads(out)["order"] == 16
    code, out = run("order", "--spec", "Kr r=1", "--word", "D e0")
    assert code == 3
    obj = json.loads(out)
    assert obj["exceeded_budget"] is True and obj["order"] is None


def test_usage_errors():
    assert run("order", "--word", "D")[0] == 2  # no spec
    assert run("order", "--spec", "Kr r=3", "--word", "x")[0] == 2
    assert run("ball", "--spec", "Kr r=3", "--radius", "1", "--threads", "0")[0] == 2
    assert run("bogus")[0] == 2


def test_budget_exit_code():
    code, out = run("ball", "--spec", "Kr r=3", "--radius", "3", "--budget-ball", "20")
    assert code == 3
    assert json.loads(out)["error"] == "budget"
    # a tight budget on one run must not stick to the cached ball
    code, out = run("ball", "--spec", "Kr r=3", "--radius", "1")
    assert code == 0 and json.loads(out)["size"] == 16


def test_ball_round_trip():
    code, out = run("ball", "--spec", "Kr r=3", "--radius", "1")
    obj = json.loads(out)
    assert obj["size"] == 16
    k = Kr(3)
    words = [Word.from_json(k, e["word"]) for e in obj["elements"]]
    assert len(set(words)) == 16
    code, csv_out = run("ball", "--spec", "Kr r=3", "--radius", "1", "--format", "csv")
    lines = csv_out.splitlines()
    assert lines[0] == "index,length,word_json" and len(lines) == 17


def test_period_growth_and_min_length():
    code, out = run("period-growth", "--spec", "Kr r=3", "--n", "2", "--format", "csv")
    assert code == 0
    assert [l.split(",")[2] for l in out.splitlines()[1:]] == ["1", "2", "8"]
    code, out = run("period-growth", "--spec", "Kr r=3", "--n", "2", "--method", "classes")
    assert [r["pi"] for r in json.loads(out)["rows"]] == [1, 2, 8]
    code, out = run("min-length", "--spec", "Kr r=5", "--word", "e0 D e0", "--radius", "2")
    assert json.loads(out) == {"format": 1, "found": True, "min_length": 1}


def test_period_growth_zero_row():
    code, out = run("period-growth", "--spec", "Kr r=5", "--gens", "S", "--n", "0", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1].startswith("0,1,1,")


def test_order_of_generator():
    w = json.dumps({"level": 0, "letters": [{"directed": True}]})
    code, out = run("order", "--spec", '{"family":"Kr","r":3}', "--word", w)
    assert code == 0 and json.loads(out)["order"] == 2


def test_chi():
    code, out = run("chi", "--spec", "Kr r=3", "--law", "[x,y]", "--radius", "2")
    assert code == 0 and json.loads(out)["chi"] == 2
    assert run("chi", "--spec", "Kr r=3", "--law", "[x", "--radius", "2")[0] == 2


def test_verify():
    code, out = run("verify", "check_tetration")
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] is True and "elapsed" not in obj
    code, out = run("verify", "check_two_layer_reduction", "--r", "3", "--radius", "3", "--timing")
    assert code == 0 and "elapsed" in json.loads(out)
    code, out = run("verify", "check_transitivity", "--spec", "Kr r=4", "--max-layer", "2")
    assert json.loads(out)["params"]["spec"] == {"family": "Kr", "r": 4}


def test_env_fallback(monkeypatch):
    monkeypatch.setenv("BRANCHWORK_SPEC", "Kr r=3")
    code, out = run("order", "--word", "D e0")
    assert code == 0 and json.loads(out)["order"] == 4
    # flags win over the environment
    code, out = run("order", "--spec", "Kr r=1", "--word", "D e0")
    assert code == 3


def test_output_is_deterministic():
    args = ("period-growth", "--spec", "Kr r=3", "--n", "3")
    assert run(*args) == run(*args) == run(*args, "--threads", "2")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "branchwork", "order", "--spec", "Kr r=3", "--word", "D e0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"exponent": 2, "format": 1, "order": 4}
