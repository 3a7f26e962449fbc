"""Shared test utilities: random words and the bridge to the dense oracle."""

from __future__ import annotations

import math
import random

import numpy as np

from branchwork.engine import DIRECTED, Word, first_layer_sections, first_layer_translation
from branchwork.f2 import from_mask, to_mask


def random_letters(rng: random.Random, rank: int, length: int) -> list:
    """Alternating rooted/directed letters, so nothing reduces away."""
    out = []
    want_directed = rng.random() < 0.5
    for _ in range(length):
        if want_directed:
            out.append(DIRECTED)
        else:
            out.append(from_mask(rng.randrange(1, 1 << rank), rank))
        want_directed = not want_directed
    return out


def random_word(rng: random.Random, spec, level: int, max_len: int) -> Word:
    r = spec.rank(level)
    return Word(spec, level, random_letters(rng, r, rng.randint(0, max_len)))


def dense_letters(w: Word) -> list:
    r = w.spec.rank(w.level)
    return ["D" if l is DIRECTED else to_mask(l, r) for l in w.letters]


def engine_perm(w: Word, depth: int) -> np.ndarray:
    """Leaf permutation of ``w`` on the depth-truncated tree, assembled from
    the engine's first-layer translation and sections (same leaf numbering
    as :class:`branchwork.dense.DenseTree`)."""
    spec = w.spec
    radix = [1 << spec.rank(w.level + i) for i in range(depth)]
    if depth == 0:
        return np.zeros(1, dtype=np.int64)
    sub = math.prod(radix[1:])
    r = spec.rank(w.level)
    t = to_mask(first_layer_translation(w), r)
    secs = {to_mask(x, r): s for x, s in first_layer_sections(w).items()}
    ident = np.arange(sub, dtype=np.int64)
    out = np.empty(radix[0] * sub, dtype=np.int64)
    for x in range(radix[0]):
        s = secs.get(x)
        child = engine_perm(s, depth - 1) if s is not None else ident
        out[x * sub : (x + 1) * sub] = (x ^ t) * sub + child
    return out


def dense_sections(perm: np.ndarray, first: int) -> list:
    """Split a leaf permutation into ``(image of x, section perm)`` per
    first-layer vertex ``x``."""
    sub = len(perm) // first
    out = []
    for x in range(first):
        block = perm[x * sub : (x + 1) * sub]
        heads = block // sub
        assert (heads == heads[0]).all()
        out.append((int(heads[0]), block % sub))
    return out


def vertex(spec, level: int, masks) -> "VertexPath":
    from branchwork.engine import VertexPath

    return VertexPath(spec, level, tuple(from_mask(m, spec.rank(level + i)) for i, m in enumerate(masks)))
