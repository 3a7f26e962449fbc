"""Vectors of the elementary abelian 2-group ``A_rank``.

A vector is stored by the indices of its set bits (``SPARSE``) or by the
indices of its clear bits (``COSPARSE``).  Indices are Python ints, so the
rank may be astronomically large; only the support has to stay small.
"""

from __future__ import annotations

from typing import Iterable

__all__ = [
    "BudgetExceeded",
    "F2Vector",
    "ZERO",
    "ONES",
    "basis",
    "bar_basis",
    "f2_add",
    "translate_bar",
    "canonical",
    "from_mask",
    "to_mask",
    "support_budget",
    "set_support_budget",
]

_SUPPORT_BUDGET = 4096


class BudgetExceeded(RuntimeError):
    """A configured size budget (support, recursion, ball, ...) was hit."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind} budget exceeded: {message}")
        self.kind = kind


def support_budget() -> int:
    return _SUPPORT_BUDGET


def set_support_budget(n: int) -> int:
    """Set the global support budget; returns the previous value."""
    global _SUPPORT_BUDGET
    if n <= 0:
        raise ValueError("support budget must be positive")
    old, _SUPPORT_BUDGET = _SUPPORT_BUDGET, int(n)
    return old


class F2Vector:
    """Immutable element of ``A_rank`` in sparse or co-sparse form.

    ``F2Vector(False, (0, 2))`` is ``e_0 e_2``; ``F2Vector(True, (1,))`` is
    the all-ones vector with bit 1 cleared, i.e. the translate of ``e_1``.
    Equality is syntactic.  Use :func:`canonical` to make it semantic at a
    known rank.
    """

    __slots__ = ("cosparse", "support", "_hash")

    def __init__(self, cosparse: bool, support: Iterable[int] = ()):
        sup = tuple(support)
        for a, b in zip(sup, sup[1:]):
            if not a < b:
                raise ValueError(f"support must be strictly increasing: {sup!r}")
        if sup and sup[0] < 0:
            raise ValueError("support indices must be non-negative")
        if len(sup) > _SUPPORT_BUDGET:
            raise BudgetExceeded("support", f"{len(sup)} > {_SUPPORT_BUDGET}")
        object.__setattr__(self, "cosparse", bool(cosparse))
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "_hash", hash((self.cosparse, sup)))

    @classmethod
    def _raw(cls, cosparse: bool, support: tuple) -> F2Vector:
        # trusted constructor: support already sorted and unique
        if len(support) > _SUPPORT_BUDGET:
            raise BudgetExceeded("support", f"{len(support)} > {_SUPPORT_BUDGET}")
        self = object.__new__(cls)
        object.__setattr__(self, "cosparse", cosparse)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "_hash", hash((cosparse, support)))
        return self

    def __setattr__(self, name, value):
        raise AttributeError("F2Vector is immutable")

    def __reduce__(self):
        return (F2Vector, (self.cosparse, self.support))

    def __eq__(self, other):
        if not isinstance(other, F2Vector):
            return NotImplemented
        return self.cosparse == other.cosparse and self.support == other.support

    def __hash__(self):
        return self._hash

    def __lt__(self, other: F2Vector) -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (self.cosparse, len(self.support), self.support)

    def __add__(self, other: F2Vector) -> F2Vector:
        return f2_add(self, other)

    def __bool__(self) -> bool:
        # truthy iff not syntactically the identity
        return self.cosparse or bool(self.support)

    @property
    def is_zero(self) -> bool:
        return not self.cosparse and not self.support

    def weight(self, rank: int) -> int:
        """Number of set bits at the given rank."""
        return rank - len(self.support) if self.cosparse else len(self.support)

    def __repr__(self):
        name = "COSPARSE" if self.cosparse else "SPARSE"
        return f"{name}{{{','.join(map(str, self.support))}}}"

    def to_json(self) -> dict:
        return {
            "polarity": "cosparse" if self.cosparse else "sparse",
            "support": [str(i) for i in self.support],
        }

    @classmethod
    def from_json(cls, obj: dict) -> F2Vector:
        pol = obj["polarity"]
        if pol not in ("sparse", "cosparse"):
            raise ValueError(f"bad polarity {pol!r}")
        return cls(pol == "cosparse", (int(s) for s in obj["support"]))


ZERO = F2Vector._raw(False, ())
ONES = F2Vector._raw(True, ())


def basis(i: int) -> F2Vector:
    """``e_i``."""
    return F2Vector._raw(False, (int(i),))


def bar_basis(i: int) -> F2Vector:
    """``ē_i``, all ones except bit ``i``."""
    return F2Vector._raw(True, (int(i),))


def _symdiff(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    if len(a) == 1 and len(b) == 1:
        x, y = a[0], b[0]
        if x == y:
            return ()
        return (x, y) if x < y else (y, x)
    return tuple(sorted(set(a).symmetric_difference(b)))


def f2_add(a: F2Vector, b: F2Vector) -> F2Vector:
    """Sum in ``A_rank``: polarities xor, supports take the symmetric difference."""
    return F2Vector._raw(a.cosparse != b.cosparse, _symdiff(a.support, b.support))


def translate_bar(a: F2Vector) -> F2Vector:
    """``a + 1``, with ``1`` the all-ones vector.  An involution."""
    return F2Vector._raw(not a.cosparse, a.support)


def canonical(v: F2Vector, rank: int) -> F2Vector:
    """Representation with the smaller support at ``rank`` (ties go sparse).

    Raises ``ValueError`` if an index is out of range.
    """
    sup = v.support
    if sup and sup[-1] >= rank:
        raise ValueError(f"index {sup[-1]} out of range for rank {rank}")
    n = len(sup)
    other = rank - n
    if v.cosparse:
        if other > n:
            return v
    elif n <= other:
        return v
    # flipping is only reachable when rank <= 2 * support, so rank is small
    present = set(sup)
    comp = tuple(i for i in range(rank) if i not in present)
    return F2Vector._raw(not v.cosparse, comp)


def from_mask(mask: int, rank: int) -> F2Vector:
    """Canonical vector from a dense bitmask (bit ``i`` is ``e_i``)."""
    if mask < 0 or mask >> rank:
        raise ValueError("mask out of range")
    sup = []
    i = 0
    m = mask
    while m:
        if m & 1:
            sup.append(i)
        m >>= 1
        i += 1
    return canonical(F2Vector._raw(False, tuple(sup)), rank)


def to_mask(v: F2Vector, rank: int) -> int:
    """Dense bitmask of ``v`` at ``rank``."""
    m = 0
    for i in v.support:
        if i >= rank:
            raise ValueError(f"index {i} out of range for rank {rank}")
        m |= 1 << i
    if v.cosparse:
        m ^= (1 << rank) - 1
    return m
