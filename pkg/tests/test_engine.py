from __future__ import annotations

import random

import numpy as np
import pytest

from branchwork import (
    DIRECTED,
    F2Vector,
    Growing,
    Kr,
    VertexPath,
    Word,
    act,
    active_vertices,
    commutator,
    conjugate,
    directed,
    equal,
    first_layer_translation,
    identity,
    inverse,
    is_trivial,
    normalize,
    portrait,
    rooted,
    section,
    syllable_length_upper,
)
from branchwork.dense import DenseTree
from branchwork.f2 import ONES, ZERO, bar_basis, basis, canonical, from_mask, to_mask

from helpers import dense_letters, dense_sections, engine_perm, random_word, vertex

K3 = Kr(3)
K5 = Kr(5)


def test_normalize_examples():
    assert normalize(K3, 0, [basis(0), basis(0)]) == identity(K3)
    assert normalize(K3, 0, [DIRECTED, ZERO, DIRECTED]) == identity(K3)
    w = normalize(K3, 0, [basis(0), basis(1), DIRECTED, DIRECTED, basis(0)])
    assert w.letters == (basis(1),)
    raw = [basis(0), basis(1), DIRECTED, DIRECTED, basis(0)]
    tree = DenseTree(K3, 0, 4)
    assert np.array_equal(tree.word_perm(["D" if l is DIRECTED else to_mask(l, 3) for l in raw]),
                          tree.word_perm(dense_letters(w)))
    with pytest.raises(ValueError):
        normalize(K3, 0, [basis(3)])


def test_act_examples():
    b = directed(K3)
    for x in range(8):
        assert act(b, vertex(K3, 0, [x])) == vertex(K3, 0, [x])
    a = from_mask(5, 3)
    assert act(rooted(K3, 0, a), vertex(K3, 0, [2])).letters == (from_mask(7, 3),)
    v = VertexPath(K3, 0, (ONES, basis(0)))
    assert act(b, v) == v
    v = VertexPath(K3, 0, (bar_basis(0), ZERO))
    assert act(b, v) == VertexPath(K3, 0, (bar_basis(0), basis(0)))


def test_section_examples():
    b = directed(K3)
    assert section(b, ZERO) == directed(K3, 1)
    assert section(b, canonical(bar_basis(1), 3)) == rooted(K3, 1, basis(1))
    assert section(b, basis(0)) == identity(K3, 1)


def test_inverse():
    assert inverse(identity(K3)) == identity(K3)
    w = Word(K3, 0, [basis(1), DIRECTED])
    assert inverse(w).letters == (DIRECTED, basis(1))
    rng = random.Random(3)
    for _ in range(100):
        w = random_word(rng, K5, 0, 6)
        assert is_trivial(w * inverse(w)) is True
        assert inverse(inverse(w)) == w


def test_active_vertices():
    b = directed(K3)
    assert set(active_vertices(b)) == {ZERO} | {canonical(bar_basis(i), 3) for i in range(3)}
    assert len(active_vertices(identity(K3))) == 0
    w = directed(K5) * conjugate(directed(K5), rooted(K5, 0, basis(0)))
    act_set = set(active_vertices(w))
    brute = {from_mask(x, 5) for x in range(32) if section(w, from_mask(x, 5)).letters}
    assert act_set == brute


def test_is_trivial_examples():
    assert is_trivial(Word(K3, 0, [DIRECTED, DIRECTED])) is True
    e0, e1 = rooted(K3, 0, basis(0)), rooted(K3, 0, basis(1))
    assert is_trivial(commutator(e0, e1)) is True
    c = commutator(directed(K3), e0)
    assert is_trivial(c) is False
    tree = DenseTree(K3, 0, 4)
    assert not np.array_equal(tree.word_perm(dense_letters(c)), np.arange(tree.size))


def test_portrait():
    p = portrait(identity(K3), 5)
    assert p.translation.is_zero and not p.children
    p = portrait(directed(K3), 1)
    assert p.translation.is_zero
    kids = p.child_map
    assert set(kids) == {ZERO} | {canonical(bar_basis(i), 3) for i in range(3)}
    assert kids[ZERO].translation.is_zero
    for i in range(3):
        assert kids[canonical(bar_basis(i), 3)].translation == basis(i)
    # conjugating by e_0 shifts the first-layer labels by e_0
    b5 = directed(K5)
    pc = portrait(conjugate(b5, rooted(K5, 0, basis(0))), 2).child_map
    pb = portrait(b5, 2).child_map
    assert {canonical(x + basis(0), 5): q for x, q in pb.items()} == pc


def test_syllable_length_upper():
    assert syllable_length_upper(identity(K5)) == 0
    assert syllable_length_upper(rooted(K5, 0, basis(2))) == 1
    w = Word(K5, 0, [basis(0), DIRECTED, basis(0), DIRECTED, basis(1)])
    assert syllable_length_upper(w) == 3


def test_word_json_round_trip():
    w = Word(Growing(3), 1, [basis(0), DIRECTED, ONES])
    assert Word.from_json(w.spec, w.to_json()) == w
    v = VertexPath(K5, 0, (basis(1), bar_basis(2)))
    assert VertexPath.from_json(K5, v.to_json()) == v


def test_section_homomorphism_and_right_action():
    rng = random.Random(11)
    for r in (3, 4, 5):
        spec = Kr(r)
        for _ in range(40):
            w1 = random_word(rng, spec, 0, 4)
            w2 = random_word(rng, spec, 0, 4)
            for xm in range(1 << r):
                x = vertex(spec, 0, [xm])
                lhs = section(w1 * w2, x)
                rhs = section(w1, x) * section(w2, act(w1, x))
                assert equal(lhs, rhs) is True
            v = vertex(spec, 0, [rng.randrange(1 << r) for _ in range(3)])
            assert act(w1 * w2, v) == act(w2, act(w1, v))


def test_section_of_inverse():
    rng = random.Random(5)
    spec = K5
    for _ in range(60):
        w = random_word(rng, spec, 0, 6)
        u = vertex(spec, 0, [rng.randrange(32), rng.randrange(32)])
        lhs = section(inverse(w), u)
        rhs = inverse(section(w, act(inverse(w), u)))
        assert equal(lhs, rhs) is True


def test_trivial_words_have_trivial_sections():
    rng = random.Random(7)
    for _ in range(50):
        w = random_word(rng, K5, 0, 4)
        t = commutator(w * w, w)  # commutes, hence trivial
        assert is_trivial(t) is True
        for x in range(32):
            assert is_trivial(section(t, from_mask(x, 5))) is True


def test_is_trivial_never_unknown_short_words():
    rng = random.Random(13)
    for r in (3, 4, 5):
        for _ in range(200):
            w = random_word(rng, Kr(r), 0, 16)
            assert is_trivial(w, max_depth=64) is not None


def test_huge_rank_sections():
    g = Growing(127)
    r = g.rank(0)
    i = 77
    d = directed(g, 0)
    s = section(d, bar_basis(i))
    assert s.letters == (basis(i),)
    assert act(d, VertexPath(g, 0, (bar_basis(i), ZERO))).letters[1] == basis(i)
    assert r == 127
    assert len(active_vertices(d)) == 128
    huge = Growing(3)
    lvl = 9  # rank 2^127 - 1
    dh = directed(huge, lvl)
    act_set = active_vertices(dh)
    assert act_set.families  # the bar family is kept symbolic
    assert section(dh, bar_basis(2**126)).letters == (basis(2**126),)


@pytest.mark.parametrize("spec", [Kr(3), Growing(3)], ids=["K3", "G3"])
def test_dense_oracle_agreement(spec):
    depth = 4
    tree = DenseTree(spec, 0, depth)
    sub = DenseTree(spec, 1, depth - 1)
    first = 1 << spec.rank(0)
    rng = random.Random(99)
    words = [directed(spec)] + [rooted(spec, 0, basis(i)) for i in range(spec.rank(0))]
    words += [random_word(rng, spec, 0, 6) for _ in range(100)]
    ident = np.arange(tree.size)
    for w in words:
        perm = tree.word_perm(dense_letters(w))
        assert np.array_equal(engine_perm(w, depth), perm)
        for _ in range(8):
            leaf = tuple(rng.randrange(n) for n in tree.radix)
            img = act(w, vertex(spec, 0, leaf))
            assert tuple(to_mask(x, spec.rank(i)) for i, x in enumerate(img.letters)) == tree.image(perm, leaf)
        for x, (y, sp) in enumerate(dense_sections(perm, first)):
            assert y == to_mask(canonical(from_mask(x, spec.rank(0)) + first_layer_translation(w), spec.rank(0)), spec.rank(0))
            s = section(w, from_mask(x, spec.rank(0)))
            assert np.array_equal(sub.word_perm(dense_letters(s)), sp)
        t = is_trivial(w)
        if t is True:
            assert np.array_equal(perm, ident)
        if not np.array_equal(perm, ident):
            assert t is False
