from __future__ import annotations

import pytest

from branchwork import (
    DIRECTED,
    F2Vector,
    GroupSpec,
    Growing,
    Kr,
    Word,
    directed,
    enumeration_index,
    enumeration_vector,
    first_layer_translation,
    is_trivial,
    make_generators,
    section,
)
from branchwork.engine import first_layer_sections
from branchwork.f2 import BudgetExceeded, bar_basis, basis, canonical, from_mask
from branchwork.groups import directed_section_rule


def test_ranks():
    assert [Kr(5).rank(l) for l in range(4)] == [5, 5, 5, 5]
    g = Growing(3)
    assert [g.rank(l) for l in range(7)] == [3, 3, 3, 7, 7, 7, 127]
    assert g.rank(9) == 2**127 - 1
    assert Growing(127).rank(0) == 127
    assert [g.rule(l) for l in range(6)] == ["bar", "bar", "enum", "bar", "bar", "enum"]
    assert Kr(4).rule(2) == "bar"


def test_spec_validation_and_json():
    with pytest.raises(ValueError):
        Kr(0)
    with pytest.raises(ValueError):
        Growing(2)
    for spec in (Kr(5), Growing(3), Growing(127, base=1)):
        assert GroupSpec.from_json(spec.to_json()) == spec
    assert Kr(5).to_json() == {"family": "Kr", "r": 5}
    assert Growing(3).to_json() == {"family": "G", "f0": 3, "base": 0}


def test_directed_rule_examples():
    k3 = Kr(3)
    assert directed_section_rule(k3, 0, canonical(bar_basis(0), 3)) == basis(0)
    assert directed_section_rule(k3, 0, F2Vector(False, ())) is DIRECTED
    assert directed_section_rule(k3, 0, basis(0)) is None
    g = Growing(3)
    assert directed_section_rule(g, 2, F2Vector(False, (0, 1))) == basis(3)
    assert directed_section_rule(g, 5, F2Vector(False, ())) is DIRECTED


def test_directed_rule_at_huge_rank():
    g = Growing(3)
    lvl = 9  # rank 2^127 - 1, bar rule
    assert g.rank(lvl) == 2**127 - 1
    i = 2**100
    assert directed_section_rule(g, lvl, bar_basis(i)) == basis(i)
    assert directed_section_rule(g, lvl, basis(i)) is None
    # enum rule at level 8: the next rank is 2^127 - 1, so no wrap-around
    assert directed_section_rule(g, 8, from_mask(5, 127)) == basis(5)


def test_enumeration():
    assert enumeration_index(F2Vector(False, ())) == 0
    assert enumeration_index(F2Vector(False, (0,))) == 1
    assert enumeration_index(F2Vector(False, (1,))) == 2
    assert enumeration_index(F2Vector(False, (0, 1))) == 3
    assert enumeration_index(F2Vector(True, ()), 3) == 7
    with pytest.raises(ValueError):
        enumeration_index(F2Vector(True, ()))
    for rank in (1, 3, 5):
        for i in range(1 << rank):
            assert enumeration_index(enumeration_vector(i, rank), rank) == i


def test_generating_sets():
    e = make_generators(Kr(3), 0, "E")
    assert len(e.members) == 4
    s = make_generators(Kr(3), 0, "S")
    assert len(s.members) == 16
    assert len(make_generators(Growing(3), 0, "S").members) == 16
    with pytest.raises(BudgetExceeded):
        make_generators(Growing(3), 6, "S")
    for spec in (Kr(3), Kr(5), Growing(3)):
        for kind in ("E", "S"):
            for g in make_generators(spec, 0, kind).members:
                assert is_trivial(g * g) is True


def test_self_similarity_of_kr():
    # every first-layer section of a generator is a single E-letter or trivial
    for r in (2, 3, 4, 5):
        spec = Kr(r)
        for g in make_generators(spec, 0, "E").members:
            for x in range(1 << r):
                s = section(g, from_mask(x, r))
                assert len(s.letters) <= 1
                if s.letters and s.letters[0] is not DIRECTED:
                    assert len(s.letters[0].support) == 1 and not s.letters[0].cosparse


def test_directed_sections_cover_next_basis():
    g = Growing(3)
    for lvl in range(6):
        d = directed(g, lvl)
        nr = g.rank(lvl + 1)
        got = set()
        for x, s in first_layer_sections(d).items():
            assert len(s.letters) == 1
            l = s.letters[0]
            got.add("D" if l is DIRECTED else l)
        want = {"D"} | {canonical(basis(i), nr) for i in range(nr)}
        if g.rule(lvl) == "enum":
            assert got == want
        else:
            # bar levels hand out e_i only for i below the current rank
            assert got == {"D"} | {canonical(basis(i), nr) for i in range(g.rank(lvl))}


def test_two_layer_resemblance():
    # at levels with key = 0 mod 3, d agrees with b_rank on the first layer
    g = Growing(3)
    for lvl in (0, 3):
        r = g.rank(lvl)
        k = Kr(r)
        d, b = directed(g, lvl), directed(k, 0)
        assert first_layer_translation(d).is_zero
        for x in range(1 << r):
            v = from_mask(x, r)
            sd, sb = section(d, v), section(b, v)
            assert [l is DIRECTED for l in sd.letters] == [l is DIRECTED for l in sb.letters]
            if x:
                assert sd.letters == sb.letters
