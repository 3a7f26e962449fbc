"""Truncated-tree oracle: generators as explicit permutations of the leaves
of a finite-depth tree.

Written against plain integer bitmasks and the defining section rules
only; it shares no code with the word engine so it can be used to check it.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

__all__ = ["DenseTree", "perm_order"]


def _f(f0: int, k: int) -> int:
    v = f0
    for _ in range(k):
        v = 2 ** v - 1
    return v


class DenseTree:
    """Depth-``depth`` truncation of the subtree below ``level``.

    Leaves are tuples ``(x_1, ..., x_depth)`` of bitmasks and are numbered
    in mixed radix with ``x_1`` most significant.
    """

    def __init__(self, spec, level: int, depth: int, max_leaves: int = 1 << 17):
        self.family = spec.family
        self.r = spec.r
        self.f0 = spec.f0
        self.base = spec.base
        self.level = level
        self.depth = depth
        self.ranks = [self.rank(level + i) for i in range(depth)]
        self.radix = [1 << r for r in self.ranks]
        self.size = math.prod(self.radix)
        if self.size > max_leaves:
            raise ValueError(f"{self.size} leaves exceed the oracle limit")
        self.leaves = list(itertools.product(*(range(n) for n in self.radix)))
        self._perm_cache: dict = {}

    def rank(self, level: int) -> int:
        if self.family == "Kr":
            return self.r
        return _f(self.f0, (self.base + level) // 3)

    def _kind(self, level: int) -> str:
        if self.family == "Kr" or (self.base + level) % 3 != 2:
            return "bar"
        return "enum"

    def directed_section(self, level: int, x: int):
        """``"D"``, a rooted bitmask at ``level + 1``, or ``None``."""
        r = self.rank(level)
        if x == 0:
            return "D"
        if self._kind(level) == "bar":
            if r == 1:
                return 1
            flipped = x ^ ((1 << r) - 1)
            if flipped and flipped & (flipped - 1) == 0:
                return flipped
            return None
        m = self.rank(level + 1)
        return 1 << (x % m)

    def _act_directed(self, level: int, xs: tuple) -> tuple:
        if not xs:
            return xs
        s = self.directed_section(level, xs[0])
        if s is None:
            return xs
        if s == "D":
            return (xs[0],) + self._act_directed(level + 1, xs[1:])
        if len(xs) == 1:
            return xs
        return (xs[0], xs[1] ^ s) + xs[2:]

    def index(self, leaf: tuple) -> int:
        i = 0
        for x, n in zip(leaf, self.radix):
            i = i * n + x
        return i

    def generator_perm(self, letter) -> np.ndarray:
        """``letter`` is ``"D"`` or a rooted bitmask at the top level."""
        key = letter
        p = self._perm_cache.get(key)
        if p is None:
            if letter == "D":
                img = [self.index(self._act_directed(self.level, leaf)) for leaf in self.leaves]
            else:
                img = [self.index((leaf[0] ^ letter,) + leaf[1:]) for leaf in self.leaves]
            p = np.asarray(img, dtype=np.int64)
            self._perm_cache[key] = p
        return p

    def word_perm(self, letters) -> np.ndarray:
        """Permutation of a letter sequence, applied left to right."""
        p = np.arange(self.size, dtype=np.int64)
        for l in letters:
            p = self.generator_perm(l)[p]
        return p

    def image(self, perm: np.ndarray, leaf: tuple) -> tuple:
        j = int(perm[self.index(leaf)])
        out = []
        for n in reversed(self.radix):
            out.append(j % n)
            j //= n
        return tuple(reversed(out))

    def section_perm(self, perm: np.ndarray, prefix: tuple) -> np.ndarray:
        """Action of the section at ``prefix`` on the leaves below it."""
        k = len(prefix)
        sub = DenseTree.__new__(DenseTree)
        sub.radix = self.radix[k:]
        sub.size = math.prod(sub.radix)
        out = np.empty(sub.size, dtype=np.int64)
        for j, tail in enumerate(itertools.product(*(range(n) for n in sub.radix))):
            img = self.image(perm, prefix + tail)
            t = 0
            for x, n in zip(img[k:], sub.radix):
                t = t * n + x
            out[j] = t
        return out


def perm_order(perm: np.ndarray) -> int:
    """Order of a permutation (lcm of its cycle lengths)."""
    n = len(perm)
    seen = np.zeros(n, dtype=bool)
    result = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = int(perm[j])
            length += 1
        result = math.lcm(result, length)
    return result
