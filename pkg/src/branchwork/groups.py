"""The two group families: constant valency ``K_r`` and growing valency ``G``.

Both are generated by the rooted group ``A_rank`` of the current level
together with one directed involution ``D`` whose first-layer sections are

* ``bar`` levels (all of ``K_r``; growing levels ``= 0, 1 mod 3``)::

      1 -> D (next level),   ē_i -> e_i,   anything else -> id

* ``enum`` levels (growing levels ``= 2 mod 3``)::

      1 -> D (next level),   a_i -> e_(i mod (2^rank - 1))   for i >= 1

  where ``a_i`` is the binary enumeration of ``A_rank`` and the next level
  has rank ``2^rank - 1``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .engine import DIRECTED, Word
from .f2 import (
    BudgetExceeded,
    F2Vector,
    bar_basis,
    basis,
    canonical,
    from_mask,
    support_budget,
)
from .tower import TowerInt, TowerRange, f_value

__all__ = [
    "GroupSpec",
    "GeneratingSet",
    "Kr",
    "Growing",
    "directed_section_rule",
    "enumeration_index",
    "enumeration_vector",
    "make_generators",
    "EXPLICIT_BAR_RANK",
    "EXPLICIT_ENUM_RANK",
]

# above these ranks first-layer vertex sets are handled symbolically
EXPLICIT_BAR_RANK = 4096
EXPLICIT_ENUM_RANK = 12


@dataclass(frozen=True)
class GroupSpec:
    family: str
    r: int = 0
    f0: int = 0
    base: int = 0

    def __post_init__(self):
        if self.family == "Kr":
            if self.r < 1:
                raise ValueError("K_r needs r >= 1")
        elif self.family == "G":
            if self.f0 < 3:
                raise ValueError("growing family needs f0 >= 3")
            if self.base < 0:
                raise ValueError("base index must be non-negative")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def is_constant(self) -> bool:
        return self.family == "Kr"

    def level_key(self, level: int) -> int:
        """Levels with identical local structure share a key."""
        return 0 if self.family == "Kr" else level

    def rank_tower(self, level: int) -> TowerInt | TowerRange:
        if self.family == "Kr":
            return TowerInt(self.r)
        return f_value(self.f0, (self.base + level) // 3)

    def rank(self, level: int) -> int:
        """Exact rank at ``level``; raises if it is only known as a tower."""
        return _rank(self, self.level_key(level))

    def rule(self, level: int) -> str:
        if self.family == "Kr" or (self.base + level) % 3 != 2:
            return "bar"
        return "enum"

    def is_explicit(self, level: int) -> bool:
        """Whether the first layer below ``level`` is enumerated explicitly."""
        return _explicit(self, self.level_key(level))

    def name(self) -> str:
        if self.family == "Kr":
            return f"K_{self.r}"
        return f"G(f0={self.f0},base={self.base})"

    def to_json(self) -> dict:
        if self.family == "Kr":
            return {"family": "Kr", "r": self.r}
        return {"family": "G", "f0": self.f0, "base": self.base}

    @classmethod
    def from_json(cls, obj: dict) -> GroupSpec:
        fam = obj.get("family")
        if fam == "Kr":
            return cls("Kr", r=int(obj["r"]))
        if fam == "G":
            return cls("G", f0=int(obj["f0"]), base=int(obj.get("base", 0)))
        raise ValueError(f"unknown family {fam!r}")

    def __repr__(self):
        return self.name()


def Kr(r: int) -> GroupSpec:
    return GroupSpec("Kr", r=r)


def Growing(f0: int = 3, base: int = 0) -> GroupSpec:
    return GroupSpec("G", f0=f0, base=base)


@functools.lru_cache(maxsize=None)
def _rank(spec: GroupSpec, key: int) -> int:
    t = spec.rank_tower(key)
    if not getattr(t, "is_exact", False):
        raise BudgetExceeded("rank", f"rank of {spec.name()} at level {key} is not exact")
    return t.value


@functools.lru_cache(maxsize=None)
def _explicit(spec: GroupSpec, key: int) -> bool:
    r = _rank(spec, key)
    if spec.rule(key) == "bar":
        return r <= EXPLICIT_BAR_RANK
    return r <= EXPLICIT_ENUM_RANK


def enumeration_index(x: F2Vector, rank: int | None = None) -> int:
    """Index ``i`` with ``a_i = x``: bit ``k`` of ``i`` is the ``e_k`` coordinate."""
    if not x.cosparse:
        return sum(1 << i for i in x.support)
    if rank is None:
        raise ValueError("co-sparse vectors need an exact rank to be enumerated")
    if x.support and x.support[-1] >= rank:
        raise ValueError("index out of range")
    return ((1 << rank) - 1) ^ sum(1 << i for i in x.support)


def enumeration_vector(i: int, rank: int) -> F2Vector:
    """Inverse of :func:`enumeration_index`, canonical at ``rank``."""
    if not 0 <= i < (1 << rank):
        raise ValueError("index out of range")
    if rank <= 2 * support_budget():
        return from_mask(i, rank)
    # huge rank: only small-weight vectors are representable
    sup = [k for k in range(i.bit_length()) if i >> k & 1]
    return F2Vector(False, sup)


@functools.lru_cache(maxsize=None)
def _table(spec: GroupSpec, key: int) -> dict:
    """``{y: section letter}`` for every first-layer ``y != 1`` with a
    non-trivial section of ``D`` (explicit levels only)."""
    r = _rank(spec, key)
    nxt = _rank(spec, key + 1) if spec.family == "G" else r
    out = {}
    if spec.rule(key) == "bar":
        if r == 1:
            # ē_0 coincides with 1 at rank 1; the remaining vertex gets e_0
            out[basis(0)] = canonical(basis(0), nxt)
        else:
            for i in range(r):
                out[canonical(bar_basis(i), r)] = canonical(basis(i), nxt)
    else:
        m = nxt
        for idx in range(1, 1 << r):
            out[from_mask(idx, r)] = canonical(basis(idx % m), m)
    return out


def directed_section_rule(spec: GroupSpec, level: int, x: F2Vector):
    """Section of the directed generator at first-layer vertex ``x``.

    Returns ``DIRECTED`` (the next level's directed generator), a rooted
    ``F2Vector`` at the next level's rank, or ``None`` for the identity.
    """
    key = spec.level_key(level)
    r = _rank(spec, key)
    x = canonical(x, r)
    if x.is_zero:
        return DIRECTED
    if _explicit(spec, key):
        return _table(spec, key).get(x)
    if spec.rule(key) == "bar":
        if x.cosparse and len(x.support) == 1:
            return basis(x.support[0])
        return None
    m = _rank(spec, key + 1)
    return basis(enumeration_index(x, r) % m)


def section_table(spec: GroupSpec, level: int) -> dict | None:
    """Explicit ``{y: letter}`` table of the directed rule, or ``None``."""
    key = spec.level_key(level)
    if not _explicit(spec, key):
        return None
    return _table(spec, key)


@dataclass(frozen=True)
class GeneratingSet:
    kind: str
    spec: GroupSpec
    level: int
    members: tuple


def make_generators(spec: GroupSpec, level: int, kind: str, ball_budget: int = 1 << 20) -> GeneratingSet:
    """``E``-style: basis plus ``D``.  ``S``-style: all of ``A_rank`` plus
    every conjugate ``D^a`` (identity included, as in the definition)."""
    r = spec.rank(level)
    if kind == "E":
        if r > support_budget():
            raise BudgetExceeded("generators", f"basis of rank {r} too large to list")
        mem = [Word(spec, level, (canonical(basis(i), r),)) for i in range(r)]
        mem.append(Word(spec, level, (DIRECTED,)))
        return GeneratingSet("E", spec, level, tuple(mem))
    if kind == "S":
        if r > 62 or (1 << r) > ball_budget:
            raise BudgetExceeded("ball", f"2^{r} rooted elements exceed the ball budget")
        vecs = [from_mask(m, r) for m in range(1 << r)]
        rooted = [Word(spec, level, (v,) if not v.is_zero else ()) for v in vecs]
        conj = [Word(spec, level, (v, DIRECTED, v)) for v in vecs]
        return GeneratingSet("S", spec, level, tuple(rooted + conj))
    raise ValueError(f"unknown generating set kind {kind!r}")
