"""Words in the level generators, their action on vertices, sections,
portraits and the word problem.

A :class:`Word` at ``level`` is a reduced sequence of rooted letters
(``F2Vector`` at the level's rank) and the directed letter ``DIRECTED``.
All letters are involutions, so reduction only merges adjacent rooted
letters and cancels ``DIRECTED DIRECTED``.  Actions are right actions:
``act(w1 * w2, v) == act(w2, act(w1, v))``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .f2 import ZERO, F2Vector, canonical

__all__ = [
    "DIRECTED",
    "Word",
    "VertexPath",
    "Portrait",
    "Family",
    "ActiveSet",
    "normalize",
    "identity",
    "directed",
    "rooted",
    "act",
    "section",
    "inverse",
    "commutator",
    "conjugate",
    "power",
    "first_layer_translation",
    "active_vertices",
    "first_layer_sections",
    "is_trivial",
    "equal",
    "portrait",
    "fingerprint",
    "syllable_length_upper",
    "clear_caches",
]


class _Directed:
    __slots__ = ()

    def __repr__(self):
        return "D"

    def __reduce__(self):
        return "DIRECTED"

    def sort_key(self):
        return (0,)


DIRECTED = _Directed()


def _letter_key(l) -> tuple:
    return (0,) if l is DIRECTED else (1,) + l.sort_key()


def _reduce(seq: Iterable, rank: int) -> tuple:
    """Free reduction of a letter sequence whose rooted letters are canonical."""
    out: list = []
    for l in seq:
        if l is DIRECTED:
            if out and out[-1] is DIRECTED:
                out.pop()
            else:
                out.append(l)
        elif l.support or l.cosparse:
            if out and out[-1] is not DIRECTED:
                s = canonical(out[-1] + l, rank)
                if s.support or s.cosparse:
                    out[-1] = s
                else:
                    out.pop()
            else:
                out.append(l)
    return tuple(out)


class Word:
    """Group element at a tree level, kept in reduced form.

    ``Word(spec, level, letters)`` reduces ``letters``; rooted letters may be
    given in any polarity and are canonicalized at the level's rank.
    """

    __slots__ = ("spec", "level", "letters", "_hash")

    def __init__(self, spec, level: int, letters: Iterable = ()):
        r = spec.rank(level)
        seq = []
        for l in letters:
            if l is DIRECTED:
                seq.append(l)
            elif isinstance(l, F2Vector):
                seq.append(canonical(l, r))
            else:
                raise TypeError(f"not a letter: {l!r}")
        self._set(spec, level, _reduce(seq, r))

    def _set(self, spec, level, letters):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "_hash", hash((spec, spec.level_key(level), letters)))

    @classmethod
    def _trusted(cls, spec, level: int, letters: tuple) -> Word:
        self = object.__new__(cls)
        self._set(spec, level, letters)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __reduce__(self):
        return (Word._trusted, (self.spec, self.level, self.letters))

    @property
    def key(self) -> tuple:
        return (self.spec.level_key(self.level), self.letters)

    def __eq__(self, other):
        # syntactic equality of reduced forms; see equal() for group equality
        if not isinstance(other, Word):
            return NotImplemented
        return self.spec == other.spec and self.key == other.key

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(_letter_key(l) for l in self.letters))

    def __lt__(self, other: Word) -> bool:
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: Word) -> Word:
        if other.spec != self.spec or other.spec.level_key(other.level) != self.spec.level_key(self.level):
            raise ValueError("words live at different levels")
        r = self.spec.rank(self.level)
        return Word._trusted(self.spec, self.level, _reduce(self.letters + other.letters, r))

    def __pow__(self, n: int) -> Word:
        return power(self, n)

    @property
    def n_directed(self) -> int:
        return sum(1 for l in self.letters if l is DIRECTED)

    def __repr__(self):
        body = " ".join("D" if l is DIRECTED else repr(l) for l in self.letters) or "1"
        return f"Word[{self.spec.name()}@{self.level}]({body})"

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "letters": [{"directed": True} if l is DIRECTED else {"rooted": l.to_json()} for l in self.letters],
        }

    @classmethod
    def from_json(cls, spec, obj: dict) -> Word:
        letters = []
        for item in obj["letters"]:
            if item.get("directed"):
                letters.append(DIRECTED)
            else:
                letters.append(F2Vector.from_json(item["rooted"]))
        return cls(spec, int(obj.get("level", 0)), letters)


def normalize(spec, level: int, letters: Iterable) -> Word:
    """Reduced word for a raw letter sequence (rank checked per letter)."""
    return Word(spec, level, letters)


def identity(spec, level: int = 0) -> Word:
    return Word._trusted(spec, level, ())


def directed(spec, level: int = 0) -> Word:
    return Word._trusted(spec, level, (DIRECTED,))


def rooted(spec, level: int, v: F2Vector) -> Word:
    return Word(spec, level, (v,))


def inverse(w: Word) -> Word:
    """All letters are involutions, so the inverse is the reversal."""
    return Word._trusted(w.spec, w.level, w.letters[::-1])


def power(w: Word, n: int) -> Word:
    if n < 0:
        return power(inverse(w), -n)
    result = identity(w.spec, w.level)
    base = w
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def conjugate(w: Word, c: Word) -> Word:
    """``w^c = c^-1 w c``."""
    return inverse(c) * w * c


def commutator(*ws: Word) -> Word:
    """Left-normed commutator ``[a, b] = a^-1 b^-1 a b``, ``[a, b, c] = [[a, b], c]``."""
    if len(ws) < 2:
        raise ValueError("need at least two arguments")
    acc = ws[0]
    for b in ws[1:]:
        acc = inverse(acc) * inverse(b) * acc * b
    return acc


@dataclass(frozen=True)
class VertexPath:
    spec: object
    start_level: int
    letters: tuple = ()

    def __post_init__(self):
        lets = tuple(
            canonical(x, self.spec.rank(self.start_level + i)) for i, x in enumerate(self.letters)
        )
        object.__setattr__(self, "letters", lets)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other: VertexPath) -> VertexPath:
        if other.start_level != self.start_level + len(self):
            raise ValueError("paths do not concatenate")
        return VertexPath(self.spec, self.start_level, self.letters + other.letters)

    def to_json(self) -> dict:
        return {"start_level": self.start_level, "letters": [x.to_json() for x in self.letters]}

    @classmethod
    def from_json(cls, spec, obj: dict) -> VertexPath:
        return cls(spec, int(obj.get("start_level", 0)), tuple(F2Vector.from_json(x) for x in obj["letters"]))


class Family(NamedTuple):
    """Symbolic set of first-layer vertices whose sections are all the same
    non-trivial rooted element up to relabelling.

    ``kind == "bar"``: the vertices ``base + ē_i`` for all but finitely many
    ``i``.  ``kind == "all"``: every vertex outside the explicit set.
    """

    kind: str
    base: F2Vector | None

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": None if self.base is None else self.base.to_json()}


class _Info(NamedTuple):
    translation: F2Vector
    secs: dict  # first-layer vertex -> reduced letters at the next level
    families: tuple


@dataclass(frozen=True)
class ActiveSet:
    explicit: frozenset
    families: tuple = ()

    def __contains__(self, x):
        return x in self.explicit

    def __len__(self):
        return len(self.explicit)

    def __iter__(self):
        return iter(sorted(self.explicit))


_INFO_CACHE_SIZE = 1 << 17


@functools.lru_cache(maxsize=_INFO_CACHE_SIZE)
def _info(spec, key: int, letters: tuple) -> _Info:
    from .groups import directed_section_rule, section_table

    r = spec.rank(key)
    nr = spec.rank(key + 1)
    prefixes = []
    p = ZERO
    for l in letters:
        if l is DIRECTED:
            prefixes.append(p)
        else:
            p = canonical(p + l, r)
    if not prefixes:
        return _Info(p, {}, ())
    table = section_table(spec, key)
    contrib: dict = {}
    families: list = []
    if table is not None:
        for q in prefixes:
            lst = contrib.get(q)
            if lst is None:
                contrib[q] = [DIRECTED]
            else:
                lst.append(DIRECTED)
            for y, letter in table.items():
                x = canonical(q + y, r)
                lst = contrib.get(x)
                if lst is None:
                    contrib[x] = [letter]
                else:
                    lst.append(letter)
    else:
        counts: dict = {}
        for q in prefixes:
            counts[q] = counts.get(q, 0) + 1
        cands = set(counts)
        if spec.rule(key) == "bar":
            for q in counts:
                exc = set()
                for q2 in counts:
                    if q2 != q:
                        exc.update(canonical(q + q2, r).support)
                for i in exc:
                    if i < r:
                        cands.add(canonical(q + F2Vector._raw(True, (i,)), r))
                if counts[q] % 2:
                    families.append(Family("bar", q))
        elif any(c % 2 for c in counts.values()):
            families.append(Family("all", None))
        for x in cands:
            seq = []
            for q in prefixes:
                c = directed_section_rule(spec, key, canonical(x + q, r))
                if c is not None:
                    seq.append(c)
            contrib[x] = seq
    secs = {}
    for x, seq in contrib.items():
        red = _reduce(seq, nr)
        if red:
            secs[x] = red
    return _Info(p, secs, tuple(sorted(families, key=lambda f: (f.kind, f.base.sort_key() if f.base else ()))))


def _winfo(w: Word) -> _Info:
    return _info(w.spec, w.spec.level_key(w.level), w.letters)


def clear_caches() -> None:
    _info.cache_clear()
    _TRIVIAL.clear()
    from . import order as _order

    _order.clear_caches()


def first_layer_translation(w: Word) -> F2Vector:
    """``s`` with ``act(w, [x]) == [x + s]`` for every first-layer ``x``."""
    return _winfo(w).translation


def first_layer_sections(w: Word) -> dict:
    """``{x: w|_x}`` over the explicit active first-layer vertices."""
    info = _winfo(w)
    lvl = w.level + 1
    return {x: Word._trusted(w.spec, lvl, s) for x, s in info.secs.items()}


def active_vertices(w: Word) -> ActiveSet:
    """First-layer vertices with non-trivial (reduced) section.

    Vertices outside the returned set have identity section.  At ranks too
    large to enumerate, co-finite blocks are returned as :class:`Family`
    records; each member's section is a non-trivial rooted element.
    """
    info = _winfo(w)
    return ActiveSet(frozenset(info.secs), info.families)


def _check_vertex(w: Word, v: VertexPath):
    if v.spec != w.spec or w.spec.level_key(v.start_level) != w.spec.level_key(w.level):
        raise ValueError("vertex and word live at different levels")


def _section_letters(spec, level: int, letters: tuple, x: F2Vector) -> tuple:
    info = _info(spec, spec.level_key(level), letters)
    s = info.secs.get(x)
    if s is not None:
        return s
    if not info.families:
        return ()
    # x lies in a symbolic family: evaluate letter by letter
    from .groups import directed_section_rule

    r = spec.rank(level)
    y = x
    seq = []
    for l in letters:
        if l is DIRECTED:
            c = directed_section_rule(spec, level, y)
            if c is not None:
                seq.append(c)
        else:
            y = canonical(y + l, r)
    return _reduce(seq, spec.rank(level + 1))


def section(w: Word, v: VertexPath | F2Vector) -> Word:
    """``w|_v``: ``(v u).w = (v.w)(u.(w|_v))``."""
    if isinstance(v, F2Vector):
        v = VertexPath(w.spec, w.level, (v,))
    _check_vertex(w, v)
    letters = w.letters
    level = w.level
    for x in v.letters:
        if not letters:
            break
        letters = _section_letters(w.spec, level, letters, x)
        level += 1
    return Word._trusted(w.spec, w.level + len(v), letters)


def act(w: Word, v: VertexPath) -> VertexPath:
    """Image of ``v`` under ``w``."""
    _check_vertex(w, v)
    out = []
    letters = w.letters
    level = w.level
    spec = w.spec
    for x in v.letters:
        if letters:
            info = _info(spec, spec.level_key(level), letters)
            out.append(canonical(x + info.translation, spec.rank(level)))
            letters = _section_letters(spec, level, letters, x)
        else:
            out.append(x)
        level += 1
    return VertexPath(spec, v.start_level, tuple(out))


_TRIVIAL: dict = {}


def is_trivial(w: Word, max_depth: int = 64, max_states: int = 200_000):
    """Decide ``w == 1``; returns ``True``, ``False`` or ``None`` (unknown).

    Explores the sections of ``w`` at active vertices, layer by layer, with
    a visited set on reduced forms.  ``False`` is always backed by a moved
    vertex; ``True`` means every reachable section fixes the first layer.
    """
    if not w.letters:
        return True
    spec = w.spec
    root = (spec, spec.level_key(w.level), w.letters)
    hit = _TRIVIAL.get(root)
    if hit is not None:
        return hit
    seen = {root[1:]}
    stack = [(w.level, w.letters, 0)]
    unknown = False
    while stack:
        level, letters, depth = stack.pop()
        info = _info(spec, spec.level_key(level), letters)
        if not info.translation.is_zero or len(letters) == 1 or info.families:
            _TRIVIAL[root] = False
            return False
        if depth >= max_depth:
            unknown = True
            continue
        nkey = spec.level_key(level + 1)
        for sec in info.secs.values():
            k = (nkey, sec)
            if k in seen:
                continue
            known = _TRIVIAL.get((spec,) + k)
            if known is True:
                continue
            if known is False:
                _TRIVIAL[root] = False
                return False
            seen.add(k)
            stack.append((level + 1, sec, depth + 1))
        if len(seen) > max_states:
            return None
    if unknown:
        return None
    _TRIVIAL[root] = True
    return True


def equal(w1: Word, w2: Word, **kw):
    """Group equality; ``None`` when the budget did not suffice."""
    if w1 == w2:
        return True
    return is_trivial(w1 * inverse(w2), **kw)


@dataclass(frozen=True)
class Portrait:
    translation: F2Vector
    children: tuple = ()  # sorted (vertex, Portrait) pairs
    families: tuple = ()
    depth: int = 0

    @property
    def child_map(self) -> dict:
        return dict(self.children)

    def is_trivial(self) -> bool:
        return self.translation.is_zero and not self.children and not self.families

    def to_json(self) -> dict:
        import json

        out = {
            "t": self.translation.to_json(),
            "children": {
                json.dumps(x.to_json(), sort_keys=True, separators=(",", ":")): p.to_json()
                for x, p in self.children
            },
        }
        if self.families:
            out["families"] = [f.to_json() for f in self.families]
        return out


def _portrait(spec, level: int, letters: tuple, depth: int) -> Portrait:
    info = _info(spec, spec.level_key(level), letters)
    if depth <= 0 or not info.secs:
        return Portrait(info.translation, (), info.families if depth > 0 else (), max(depth, 0))
    kids = tuple(
        (x, _portrait(spec, level + 1, s, depth - 1)) for x, s in sorted(info.secs.items(), key=lambda t: t[0].sort_key())
    )
    return Portrait(info.translation, kids, info.families, depth)


def portrait(w: Word, depth: int) -> Portrait:
    """Sparse portrait truncated at ``depth``; children only at active vertices."""
    return _portrait(w.spec, w.level, w.letters, depth)


@functools.lru_cache(maxsize=1 << 16)
def _fp(spec, key: int, level: int, letters: tuple, depth: int) -> int:
    info = _info(spec, key, letters)
    # ints only, so the value does not depend on string hash seeding
    parts = [info.translation, tuple((f.kind == "bar", f.base) for f in info.families)]
    if depth > 0:
        nkey = spec.level_key(level + 1)
        parts.append(
            tuple(sorted((x, _fp(spec, nkey, level + 1, s, depth - 1)) for x, s in info.secs.items()))
        )
    return hash(tuple(parts))


def fingerprint(w: Word, depth: int = 4) -> int:
    """Hash of the depth-truncated portrait.  Equal elements share it."""
    return _fp(w.spec, w.spec.level_key(w.level), w.level, w.letters, depth)


def syllable_length_upper(w: Word) -> int:
    """Length of ``w`` written as ``D^(a_1) ... D^(a_k) c``: number of directed
    letters plus one if the trailing rooted part ``c`` is non-trivial."""
    info = _winfo(w)
    return w.n_directed + (0 if info.translation.is_zero else 1)
