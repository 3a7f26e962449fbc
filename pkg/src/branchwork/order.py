"""Element orders, Cayley balls, exact word length and period growth."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .engine import (
    DIRECTED,
    Word,
    _info,
    _reduce,
    equal,
    fingerprint,
    identity,
    is_trivial,
)
from .f2 import BudgetExceeded, canonical
from .groups import make_generators
from .parallel import pmap

__all__ = [
    "OrderResult",
    "order",
    "doubling_order",
    "truncated_exponent",
    "Ball",
    "ball_enumerate",
    "get_ball",
    "min_length",
    "PeriodRow",
    "PeriodTable",
    "period_growth",
    "clear_caches",
]

MAX_DEPTH = 64
MAX_NODES = 200_000
BALL_BUDGET = 5_000_000
FINGERPRINT_DEPTH = 4


@dataclass(frozen=True)
class OrderResult:
    """``exponent`` set means the order is ``2**exponent``.  Otherwise the
    budget tripped; ``partial`` is a lower bound for the order (the order on
    a finite truncation) and ``reason`` says why.  ``reason == "cycle"``
    means a section recursion returned to the same element through a
    doubling step, which proves the order infinite."""

    exponent: int | None = None
    partial: int | None = None
    reason: str | None = None

    @property
    def finite(self) -> bool:
        return self.exponent is not None

    @property
    def order(self) -> int | None:
        return None if self.exponent is None else 1 << self.exponent

    def to_json(self) -> dict:
        if self.finite:
            return {"order": self.order, "exponent": self.exponent}
        return {"order": None, "exceeded_budget": True, "partial": self.partial, "reason": self.reason}


_ORDER: dict = {}
_TRUNC: dict = {}
_BALLS: dict = {}


def clear_caches() -> None:
    _ORDER.clear()
    _TRUNC.clear()
    _BALLS.clear()


def _expand(spec, level: int, letters: tuple):
    """``(base, edges)``: ``e(w) = max(base, wt + e(child))`` over edges."""
    if not letters:
        return 0, ()
    if len(letters) == 1:
        return 1, ()
    key = spec.level_key(level)
    info = _info(spec, key, letters)
    s = info.translation
    if s.is_zero:
        base = 1 if info.families else 0
        edges = {(0, sec) for sec in info.secs.values()}
    else:
        r = spec.rank(level)
        sq = _reduce(letters + letters, r)
        if not sq:
            return 1, ()
        info2 = _info(spec, key, sq)
        base = 2 if info2.families else 1
        edges = set()
        chosen = set()
        for x in sorted(info2.secs, key=lambda v: v.sort_key()):
            if canonical(x + s, r) in chosen:
                continue
            chosen.add(x)
            edges.add((1, info2.secs[x]))
    return base, tuple(sorted(edges, key=lambda e: (e[0], len(e[1]))))


def order(w: Word, max_depth: int = MAX_DEPTH, max_nodes: int = MAX_NODES) -> OrderResult:
    """Order of ``w`` by first-layer orbit decomposition.

    If ``w`` moves the first layer (translation ``s != 0``) every orbit is
    ``{x, x+s}`` and ``ord(w) = 2 * max ord(w^2|_x)``; otherwise
    ``ord(w) = max ord(w|_x)``.  Only active vertices are visited.  The
    recursion graph on reduced words is explored completely, then solved
    as a longest-path problem over its strongly connected components.
    """
    spec = w.spec
    root = (spec.level_key(w.level), w.letters)
    hit = _ORDER.get((spec,) + root)
    if hit is not None:
        return OrderResult(hit)
    nodes: dict = {}
    depth_of = {root: 0}
    level_of = {root: w.level}
    stack = [root]
    reason = None
    try:
        while stack:
            st = stack.pop()
            if st in nodes:
                continue
            lvl, d = level_of[st], depth_of[st]
            cached = _ORDER.get((spec,) + st)
            if cached is not None:
                nodes[st] = (cached, ())
                continue
            if d > max_depth:
                reason = "recursion"
                break
            base, edges = _expand(spec, lvl, st[1])
            ed = []
            nkey = spec.level_key(lvl + 1)
            for wt, child in edges:
                ck = (nkey, child)
                ed.append((wt, ck))
                if ck not in nodes and ck not in depth_of:
                    depth_of[ck] = d + 1
                    level_of[ck] = lvl + 1
                    stack.append(ck)
            nodes[st] = (base, tuple(ed))
            if len(nodes) > max_nodes:
                reason = "nodes"
                break
    except BudgetExceeded as exc:
        reason = exc.kind
    if reason is not None:
        return OrderResult(None, 1 << truncated_exponent(w, 8), reason)
    values = _solve(nodes)
    if values[root] is None:
        return OrderResult(None, 1 << truncated_exponent(w, 10), "cycle")
    for st, v in values.items():
        if v is not None:
            _ORDER[(spec,) + st] = v
    return OrderResult(values[root])


def _solve(nodes: dict) -> dict:
    """Longest 0/1-weighted path from each node; ``None`` where a cycle
    through a weight-1 edge is reachable."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    comp_of: dict = {}
    comps: list = []
    counter = 0
    for start in nodes:
        if start in index:
            continue
        work = [(start, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            edges = nodes[v][1]
            recursed = False
            while i < len(edges):
                u = edges[i][1]
                i += 1
                if u not in index:
                    work.append((v, i))
                    work.append((u, 0))
                    recursed = True
                    break
                if u in on_stack:
                    low[v] = min(low[v], index[u])
            if recursed:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    on_stack.discard(u)
                    comp_of[u] = len(comps)
                    comp.append(u)
                    if u == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    values: dict = {}
    for ci, comp in enumerate(comps):
        best = 0
        infinite = False
        for v in comp:
            base, edges = nodes[v]
            best = max(best, base)
            for wt, u in edges:
                if comp_of[u] == ci:
                    if wt:
                        infinite = True
                else:
                    cv = values[u]
                    if cv is None:
                        infinite = True
                    else:
                        best = max(best, wt + cv)
        for v in comp:
            values[v] = None if infinite else best
    return values


def truncated_exponent(w: Word, depth: int) -> int:
    """``log2`` of the order of ``w`` acting on the first ``depth`` layers."""
    return _trunc(w.spec, w.level, w.letters, depth)


def _trunc(spec, level: int, letters: tuple, depth: int) -> int:
    if depth <= 0 or not letters:
        return 0
    key = (spec, spec.level_key(level), letters, depth)
    hit = _TRUNC.get(key)
    if hit is not None:
        return hit
    info = _info(spec, spec.level_key(level), letters)
    fam = 1 if depth >= 2 else 0
    if info.translation.is_zero:
        best = fam if info.families else 0
        for sec in info.secs.values():
            best = max(best, _trunc(spec, level + 1, sec, depth - 1))
    else:
        sq = _reduce(letters + letters, spec.rank(level))
        info2 = _info(spec, spec.level_key(level), sq)
        best = fam if info2.families else 0
        for sec in info2.secs.values():
            best = max(best, _trunc(spec, level + 1, sec, depth - 1))
        best += 1
    _TRUNC[key] = best
    return best


def doubling_order(w: Word, max_exponent: int = 24) -> int | None:
    """Smallest ``e`` with ``w^(2^e) == 1`` by repeated squaring and the word
    problem; ``None`` if not found up to ``max_exponent``."""
    p = w
    for e in range(max_exponent + 1):
        t = is_trivial(p)
        if t is None:
            return None
        if t:
            return e
        p = p * p
    return None


# -- balls -----------------------------------------------------------------


def _fp_task(args):
    w, depth = args
    return fingerprint(w, depth)


class Ball:
    """Exact Cayley ball, one reduced representative per group element.

    Deduplication: identical reduced forms first, then portrait
    fingerprints with exact :func:`equal` inside a bucket.
    """

    def __init__(self, spec, level: int, kind: str, fingerprint_depth: int = FINGERPRINT_DEPTH,
                 budget: int = BALL_BUDGET):
        self.spec = spec
        self.level = level
        self.kind = kind
        self.fingerprint_depth = fingerprint_depth
        self.budget = budget
        self.gens = [g for g in make_generators(spec, level, kind).members if g.letters]
        one = identity(spec, level)
        self.elements: list = [one]
        self.lengths: list = [0]
        self.nf_index: dict = {one.letters: 0}
        self.buckets: dict = {fingerprint(one, fingerprint_depth): [0]}
        self.radius = 0
        self._frontier = [0]

    def __len__(self):
        return len(self.elements)

    def _find(self, w: Word, fp: int):
        j = self.nf_index.get(w.letters)
        if j is not None:
            return j
        for j in self.buckets.get(fp, ()):
            t = equal(w, self.elements[j])
            if t is None:
                raise BudgetExceeded("recursion", f"could not compare {w!r}")
            if t:
                self.nf_index[w.letters] = j
                return j
        return None

    def lookup(self, w: Word):
        """Exact length of ``w`` if it lies in the ball, else ``None``."""
        j = self._find(w, fingerprint(w, self.fingerprint_depth))
        return None if j is None else self.lengths[j]

    def extend_to(self, radius: int, workers: int = 1) -> Ball:
        while self.radius < radius:
            n = self.radius + 1
            # products in deterministic frontier x generator order; repeats of a
            # reduced form are dropped before the expensive fingerprint
            cands = []
            fresh = set()
            for i in self._frontier:
                a = self.elements[i]
                for g in self.gens:
                    letters = (a * g).letters
                    if letters in self.nf_index or letters in fresh:
                        continue
                    fresh.add(letters)
                    cands.append(letters)
            fps = pmap(_fp_task, [(Word._trusted(self.spec, self.level, c), self.fingerprint_depth) for c in cands], workers)
            new = []
            for letters, fp in zip(cands, fps):
                w = Word._trusted(self.spec, self.level, letters)
                if self._find(w, fp) is not None:
                    continue
                j = len(self.elements)
                self.elements.append(w)
                self.lengths.append(n)
                self.nf_index[letters] = j
                self.buckets.setdefault(fp, []).append(j)
                new.append(j)
                if len(self.elements) > self.budget:
                    raise BudgetExceeded("ball", f"more than {self.budget} elements")
            self._frontier = new
            self.radius = n
        return self

    def items(self, radius: int | None = None) -> list:
        """``(word, length)`` pairs in canonical order."""
        rad = self.radius if radius is None else radius
        out = [(w, l) for w, l in zip(self.elements, self.lengths) if l <= rad]
        out.sort(key=lambda t: (t[1], t[0].sort_key()))
        return out

    def size(self, radius: int) -> int:
        return sum(1 for l in self.lengths if l <= radius)


def get_ball(spec, level: int, kind: str, radius: int, fingerprint_depth: int = FINGERPRINT_DEPTH,
             workers: int = 1, budget: int = BALL_BUDGET) -> Ball:
    """Cached :class:`Ball` extended to at least ``radius``."""
    key = (spec, spec.level_key(level), kind, fingerprint_depth)
    ball = _BALLS.get(key)
    if ball is None:
        ball = _BALLS[key] = Ball(spec, level, kind, fingerprint_depth, budget)
    # the budget belongs to the caller, not to whoever built the cached ball
    ball.budget = budget
    ball.extend_to(radius, workers)
    if ball.size(radius) > budget:
        raise BudgetExceeded("ball", f"more than {budget} elements")
    return ball


def ball_enumerate(spec, level: int, kind: str, radius: int, fingerprint_depth: int = FINGERPRINT_DEPTH,
                   workers: int = 1, budget: int = BALL_BUDGET) -> list:
    """``[(representative, exact length)]`` for every element of the ball."""
    return get_ball(spec, level, kind, radius, fingerprint_depth, workers, budget).items(radius)


def min_length(w: Word, kind: str, radius_limit: int, fingerprint_depth: int = FINGERPRINT_DEPTH,
               workers: int = 1):
    """Exact word length of ``w`` if at most ``radius_limit``, else ``None``."""
    if not w.letters:
        return 0
    ball = get_ball(w.spec, w.level, kind, 0, fingerprint_depth)
    for n in range(1, radius_limit + 1):
        ball.extend_to(n, workers)
        found = ball.lookup(w)
        if found is not None:
            return found
    return None


# -- period growth -----------------------------------------------------------


@dataclass(frozen=True)
class PeriodRow:
    n: int
    ball_size: int | None
    pi: int
    witness: Word


@dataclass
class PeriodTable:
    spec: object
    kind: str
    method: str
    rows: list = field(default_factory=list)

    def pi(self, n: int) -> int:
        for row in self.rows:
            if row.n == n:
                return row.pi
        raise KeyError(n)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["n", "ball_size", "pi", "witness_json"])
        for row in self.rows:
            wr.writerow([
                row.n,
                "" if row.ball_size is None else row.ball_size,
                row.pi,
                json.dumps(row.witness.to_json(), sort_keys=True, separators=(",", ":")),
            ])
        return buf.getvalue()


def _order_exponent(w: Word):
    res = order(w)
    if not res.finite:
        raise BudgetExceeded("order", f"no finite order for {w!r} ({res.reason})")
    return res.exponent


def period_growth(spec, level: int, kind: str, n_max: int, method: str = "ball", workers: int = 1,
                  fingerprint_depth: int = FINGERPRINT_DEPTH) -> PeriodTable:
    """``pi(n) = max{ord(g) : |g| <= n}`` for ``n = 0..n_max``.

    ``method="ball"`` enumerates the exact ball.  ``method="classes"``
    (``K_r`` with the ``S`` generators only) runs over representatives of
    conjugacy and symmetry classes of the ball, which gives the same
    maxima without listing every element; ``ball_size`` is then empty.
    """
    table = PeriodTable(spec, kind, method)
    if method == "ball":
        ball = get_ball(spec, level, kind, n_max, fingerprint_depth, workers)
        items = ball.items(n_max)
        exps = pmap(_order_exponent, [w for w, _ in items], workers)
        best, wit = -1, None
        by_len: dict = {}
        for (w, l), e in zip(items, exps):
            cur = by_len.get(l)
            if cur is None or e > cur[0]:
                by_len[l] = (e, w)
        for n in range(n_max + 1):
            cand = by_len.get(n)
            if cand is not None and cand[0] > best:
                best, wit = cand
            table.rows.append(PeriodRow(n, ball.size(n), 1 << best, wit))
        return table
    if method == "classes":
        from .symmetry import class_representatives

        if not spec.is_constant or kind != "S":
            raise ValueError("class method needs K_r with S generators")
        reps = class_representatives(spec.r, n_max)
        words = [_class_word(spec, level, t) for _, t in reps]
        exps = pmap(_order_exponent, words, workers)
        best, wit = -1, None
        by_len: dict = {}
        for (l, _), w, e in zip(reps, words, exps):
            cur = by_len.get(l)
            if cur is None or e > cur[0]:
                by_len[l] = (e, w)
        for n in range(n_max + 1):
            cand = by_len.get(n)
            if cand is not None and cand[0] > best:
                best, wit = cand
            table.rows.append(PeriodRow(n, None, 1 << best, wit))
        return table
    raise ValueError(f"unknown method {method!r}")


def _class_word(spec, level: int, t: tuple) -> Word:
    """``D x_1 D x_2 ... D x_m`` for a tuple of masks; a rooted mask alone
    for ``("rooted", mask)``."""
    from .f2 import from_mask

    r = spec.rank(level)
    if t and t[0] == "rooted":
        return Word(spec, level, (from_mask(t[1], r),))
    letters = []
    for x in t:
        letters.append(DIRECTED)
        letters.append(from_mask(x, r))
    return Word(spec, level, letters)
