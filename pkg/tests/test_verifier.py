from __future__ import annotations

import json

import pytest

from branchwork import Growing, Kr, directed
from branchwork.order import ball_enumerate, min_length
from branchwork.verifier import (
    CheckReport,
    _layer2,
    check_2667,
    check_commutator_sections,
    check_growing_reduction,
    check_tetration,
    check_transitivity,
    check_two_layer_reduction,
    chi_complexity,
    parse_abstract_word,
    replay,
    run_check,
    two_layer_profile,
)


def _running_max(values):
    out, cur = [], 0
    for v in values:
        cur = max(cur, v)
        out.append(cur)
    return out


@pytest.mark.parametrize("r,radius", [(3, 3), (3, 4), (5, 2)])
def test_two_layer_profile_matches_brute_force(r, radius):
    # brute force: every element of the exact ball, every layer-2 vertex
    best = {}
    for w, l in ball_enumerate(Kr(r), 0, "S", radius):
        m = 0
        for _, s in _layer2(w):
            n = min_length(s, "S", 3)
            assert n is not None
            m = max(m, n)
        best[l] = max(best.get(l, 0), m)
    brute = _running_max(best.get(l, 0) for l in range(radius + 1))
    prof = two_layer_profile(r, radius, cap=3)
    assert _running_max([0] + [prof[k] for k in range(1, radius + 1)]) == brute


def test_two_layer_reduction_small():
    for r, radius in ((3, 4), (4, 4), (5, 3)):
        rep = check_two_layer_reduction(r, radius)
        assert rep.passed, rep.counterexample
        assert rep.mode == "exact-classes"
        assert rep.instances > 0


def test_replay_handcrafted_counterexample():
    spec = Kr(3)
    cx = {
        "spec": spec.to_json(),
        "g": directed(spec).to_json(),
        "vertex": {"start_level": 0, "letters": [{"polarity": "sparse", "support": []}] * 2},
        "power": 1,
        "bound": 0,
        "kind": "S",
        "measure": "exact",
    }
    # b|_{11} = b has length 1 > 0
    assert replay(cx) is True
    assert replay(dict(cx, bound=1)) is False
    assert replay(dict(cx, measure="upper")) is True


def test_growing_reduction_small():
    rep = check_growing_reduction(3, 2)
    assert rep.passed, rep.counterexample
    assert rep.instances > 0


def test_growing_reduction_radius_4():
    rep = check_growing_reduction(3, 4)
    assert rep.passed, rep.counterexample
    assert rep.details["elements"] == 2372


def test_2667_and_tetration():
    rep = check_2667(3, 4)
    assert rep.passed
    assert rep.details["product"] == 2667
    assert rep.details["max_deep_syllable_length"] <= 1
    rep = check_tetration(3)
    assert rep.passed


def test_commutator_sections_small_rank():
    rep = check_commutator_sections(4)
    assert rep.passed, rep.counterexample


def test_transitivity():
    for r in (3, 4, 5):
        rep = check_transitivity(Kr(r), 3, max_vertices=1 << 15)
        assert rep.passed
    rep = check_transitivity(Kr(6), 2)
    assert rep.passed
    rep = check_transitivity(Growing(3), 3)
    assert rep.passed
    assert rep.details["layers"]["3"] == {"orbit": 512, "layer": 512}


def test_transitivity_k1():
    # K_1 is infinite dihedral and still level-transitive on the binary tree
    rep = check_transitivity(Kr(1), 4)
    assert rep.passed
    assert rep.details["layers"]["4"]["layer"] == 16


def test_parse_abstract_word():
    assert parse_abstract_word("[x,y]") == (((0, -1), (1, -1), (0, 1), (1, 1)), 2)
    assert parse_abstract_word("x^2") == (((0, 1), (0, 1)), 1)
    assert parse_abstract_word("(xy)^-1") == (((1, -1), (0, -1)), 2)
    assert parse_abstract_word("x X") == ((), 1)
    assert parse_abstract_word("[x,y,z]")[1] == 3
    for bad in ("[x]", "x^", "(x", "x ]"):
        with pytest.raises(ValueError):
            parse_abstract_word(bad)


def test_chi_complexity():
    k5 = Kr(5)
    total, wit = chi_complexity(k5, 0, "[x,y]", 3)
    assert total == 2 and len(wit) == 2
    total, wit = chi_complexity(k5, 0, "x^2", 3)
    assert total == 2
    assert chi_complexity(k5, 0, "x X", 3) is None


def test_report_json_is_deterministic():
    rep = CheckReport("demo", {"r": 3}, instances=4)
    rep.elapsed = 1.25
    assert rep.to_json()["elapsed"] == 1.25
    text = rep.dumps(with_time=False)
    assert "elapsed" not in text
    assert json.loads(text)["format"] == 1
    rep.fail({"a": 1})
    rep.fail({"a": 2})
    assert rep.counterexample == {"a": 1} and not rep.passed


def test_run_check_registry():
    assert run_check("check_tetration").passed
    with pytest.raises(KeyError):
        run_check("no_such_check")
