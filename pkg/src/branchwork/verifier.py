"""Machine checks of the quantitative section and length inequalities.

Every check returns a :class:`CheckReport`.  Reports are deterministic:
apart from ``elapsed`` they depend only on the parameters and the seed.
"""

from __future__ import annotations

import itertools
import json
import random
import re
import time
from dataclasses import dataclass, field

from .engine import (
    DIRECTED,
    VertexPath,
    Word,
    _info,
    active_vertices,
    act,
    commutator,
    conjugate,
    directed,
    equal,
    first_layer_sections,
    identity,
    inverse,
    is_trivial,
    power,
    section,
    syllable_length_upper,
)
from .f2 import ZERO, BudgetExceeded, F2Vector, bar_basis, basis, canonical, from_mask, to_mask
from .groups import GroupSpec, Growing, Kr, enumeration_vector, make_generators
from .order import get_ball, min_length
from .parallel import pmap
from .symmetry import reduced_products
from .tower import f_exact, f_value, tetr

__all__ = [
    "CheckReport",
    "check_two_layer_reduction",
    "two_layer_profile",
    "check_growing_reduction",
    "check_2667",
    "check_tetration",
    "check_commutator_sections",
    "check_weakly_branch_generators",
    "check_transitivity",
    "chi_complexity",
    "parse_abstract_word",
    "replay",
    "run_check",
    "CHECKS",
]


@dataclass
class CheckReport:
    name: str
    params: dict
    instances: int = 0
    passed: bool = True
    counterexample: dict | None = None
    mode: str = "exact"
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def fail(self, cx: dict) -> None:
        self.passed = False
        if self.counterexample is None:
            self.counterexample = cx

    def to_json(self, with_time: bool = True) -> dict:
        out = {
            "format": 1,
            "check": self.name,
            "params": self.params,
            "instances": self.instances,
            "passed": self.passed,
            "mode": self.mode,
            "counterexample": self.counterexample,
            "details": self.details,
        }
        if with_time:
            out["elapsed"] = round(self.elapsed, 3)
        return out

    def dumps(self, with_time: bool = True) -> str:
        return json.dumps(self.to_json(with_time), sort_keys=True, separators=(",", ":"))


def _ceil(a: int, b: int) -> int:
    return -(-a // b)


def _wjson(w: Word) -> dict:
    return w.to_json()


def _pjson(v: VertexPath) -> dict:
    return v.to_json()


# -- replay ------------------------------------------------------------------


def replay(cx: dict):
    """Recompute a length counterexample from its JSON form.

    Returns ``True`` if it still falsifies, i.e. the measured length of
    ``(g^power)|_vertex`` exceeds ``bound``.
    """
    spec = GroupSpec.from_json(cx["spec"])
    g = Word.from_json(spec, cx["g"])
    v = VertexPath.from_json(spec, cx["vertex"])
    s = section(power(g, int(cx.get("power", 1))), v)
    if cx.get("measure", "exact") == "exact":
        n = min_length(s, cx.get("kind", "S"), int(cx["bound"]))
        return n is None
    return syllable_length_upper(s) > int(cx["bound"])


# -- two-layer reduction in K_r ------------------------------------------------


def _exact_length_upto(w: Word, bound: int):
    """Exact ``S``-length of ``w`` if at most ``bound``, else ``None``."""
    if not w.letters:
        return 0
    t = is_trivial(w)
    if t is None:
        raise BudgetExceeded("recursion", f"word problem undecided for {w!r}")
    if t:
        return 0
    if bound <= 0:
        return None
    if w.n_directed == 0:
        return 1
    if w.n_directed == 1 and len(w.letters) <= 3:
        lets = w.letters
        first = lets[0] if lets[0] is not DIRECTED else ZERO
        last = lets[-1] if lets[-1] is not DIRECTED else ZERO
        if first == last:
            return 1
        return 2 if bound >= 2 else None
    ball = get_ball(w.spec, w.level, "S", bound)
    return ball.lookup(w)


def _layer2(w: Word) -> list:
    """``[(u, w|_u)]`` over layer-2 vertices with non-trivial reduced section."""
    out = []
    for x, s1 in sorted(first_layer_sections(w).items(), key=lambda t: t[0].sort_key()):
        for y, s2 in sorted(first_layer_sections(s1).items(), key=lambda t: t[0].sort_key()):
            out.append(((x, y), s2))
    return out


def _product_word(spec, xs) -> Word:
    r = spec.rank(0)
    letters = [DIRECTED]
    for x in xs:
        letters.append(from_mask(int(x), r))
        letters.append(DIRECTED)
    return Word(spec, 0, letters)


def _two_layer_task(args):
    r, k, xs, cap = args
    spec = Kr(r)
    p = _product_word(spec, xs)
    bound = _ceil(k, r)
    worst = 0
    checked = 0
    for u, s in _layer2(p):
        checked += 1
        n = _exact_length_upto(s, max(cap, bound))
        if n is None or n > bound:
            if cap > bound:
                worst = None if n is None else max(worst, n)
                if n is None:
                    break
                continue
            acc = 0
            for x in xs:
                acc ^= int(x)
            g0 = p * Word(spec, 0, (from_mask(acc, r),))
            return checked, None, {
                "spec": spec.to_json(),
                "g": _wjson(g0),
                "vertex": {"start_level": 0, "letters": [u[0].to_json(), u[1].to_json()]},
                "power": 1,
                "bound": bound,
                "kind": "S",
                "measure": "exact",
            }
        worst = max(worst, n)
    return checked, worst, None


def _tasks(r: int, k: int, cap: int) -> list:
    return [(r, k, tuple(int(v) for v in row), cap) for row in reduced_products(r, k)]


def two_layer_profile(r: int, radius: int, cap: int = 2, workers: int = 1) -> dict:
    """``{k: max exact length of a layer-2 section}`` over products of ``k``
    conjugates of the directed generator, up to symmetry.  Lengths above
    ``cap`` are reported as ``None``."""
    out = {}
    for k in range(1, radius + 1):
        res = pmap(_two_layer_task, _tasks(r, k, cap), workers, min_parallel=512)
        ws = [w for _, w, _ in res]
        out[k] = None if None in ws else max(ws, default=0)
    return out


def check_two_layer_reduction(r: int, radius: int, workers: int = 1) -> CheckReport:
    """``|g|_u| <= ceil(|g| / r)`` for every ``g`` in the ``S``-ball and every
    layer-2 vertex ``u`` of ``K_r``.

    Write a word of length ``l`` as ``D^(y_1) ... D^(y_k) c`` with ``k <= l``.
    Conjugating by ``y_1`` and dropping ``c`` permutes the layer-2 sections
    without changing them, leaving ``D x_1 D ... x_(k-1) D``.  Checking
    these products (up to coordinate permutations and reversal) against
    ``ceil(k / r)`` is therefore equivalent to the full sweep: a failure at
    ``k`` is a genuine counterexample of length at most ``k``.
    """
    t0 = time.perf_counter()
    rep = CheckReport("check_two_layer_reduction", {"r": r, "radius": radius})
    rep.mode = "exact-classes"
    classes = 0
    worst = {}
    for k in range(1, radius + 1):
        tasks = _tasks(r, k, 0)
        classes += len(tasks)
        res = pmap(_two_layer_task, tasks, workers, min_parallel=512)
        wk = 0
        for checked, w, cx in res:
            rep.instances += checked
            if cx is not None:
                rep.fail(cx)
            else:
                wk = max(wk, w)
        worst[str(k)] = {"bound": _ceil(k, r), "max_section_length": wk}
        if not rep.passed:
            break
    # identity and rooted elements have trivial sections below the first layer
    rep.instances += 1
    rep.details = {"classes": classes, "by_directed_count": worst}
    rep.elapsed = time.perf_counter() - t0
    return rep


# -- growing valency --------------------------------------------------------


def _active_paths(w: Word, depth: int) -> list:
    """``[(path, section)]`` over the explicit active vertices of ``layer
    depth``; families are reported separately."""
    frontier = [((), w)]
    for _ in range(depth):
        nxt = []
        for path, s in frontier:
            for x, s1 in sorted(first_layer_sections(s).items(), key=lambda t: t[0].sort_key()):
                nxt.append((path + (x,), s1))
        frontier = nxt
    return frontier


def _has_families(w: Word, depth: int) -> bool:
    frontier = [w]
    for d in range(depth):
        nxt = []
        for s in frontier:
            if active_vertices(s).families:
                return True
            nxt.extend(first_layer_sections(s).values())
        frontier = nxt
    return False


def _measure(s: Word, bound: int, kind: str = "S"):
    """``(value, mode)``: exact length when the small ball decides it,
    otherwise the syllable upper bound."""
    up = syllable_length_upper(s)
    if up <= 1 or not s.letters:
        t = is_trivial(s)
        return (0 if t else up), "exact"
    rank = s.spec.rank(s.level)
    if rank <= 3:
        n = min_length(s, kind, min(bound, up))
        return (up, "upper") if n is None else (n, "exact")
    if rank <= 7:
        n = min_length(s, kind, 1)
        if n is not None:
            return n, "exact"
    return up, "upper"


def check_growing_reduction(f0: int = 3, radius: int = 3, workers: int = 1) -> CheckReport:
    """Three reduction inequalities on the growing-valency group at level 0:

    * ``|g|_v| <= ceil(|g| / f(0))`` on layer 2,
    * ``|g^2|_x| <= |g| + 1`` on layer 1,
    * ``|g^8|_u| <= ceil(4 |g| / f(0)) + 1`` on layer 3,

    for every ``g`` of the exact ``S``-ball.  Left-hand sides are exact where
    a small ball decides them and syllable upper bounds otherwise; an upper
    bound that satisfies the inequality proves it.
    """
    t0 = time.perf_counter()
    spec = Growing(f0)
    f = f_exact(f0, 0)
    rep = CheckReport("check_growing_reduction", {"f0": f0, "radius": radius, "level": 0})
    items = get_ball(spec, 0, "S", radius, workers=workers).items(radius)
    modes = {"exact": 0, "upper": 0}
    per = {"layer2": 0, "square": 0, "eighth": 0}
    for g, l in items:
        for name, pw, depth, bound in (
            ("layer2", 1, 2, _ceil(l, f)),
            ("square", 2, 1, l + 1),
            ("eighth", 8, 3, _ceil(4 * l, f) + 1),
        ):
            h = power(g, pw)
            if _has_families(h, depth):
                raise BudgetExceeded("rank", "symbolic vertices at explicit levels")
            for path, s in _active_paths(h, depth):
                val, mode = _measure(s, bound)
                rep.instances += 1
                per[name] += 1
                modes[mode] += 1
                if val > bound:
                    rep.fail({
                        "spec": spec.to_json(),
                        "g": _wjson(g),
                        "vertex": {"start_level": 0, "letters": [x.to_json() for x in path]},
                        "power": pw,
                        "bound": bound,
                        "kind": "S",
                        "measure": mode,
                        "inequality": name,
                    })
    rep.mode = "exact" if modes["upper"] == 0 else "exact+upper-bound"
    rep.details = {"elements": len(items), "instances_by_inequality": per, "instances_by_mode": modes}
    rep.elapsed = time.perf_counter() - t0
    return rep


def _deep_syllable(spec, level: int, letters: tuple, depth: int, memo: dict) -> int:
    """Largest syllable length over the sections at relative ``depth``."""
    key = (level, letters, depth)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if not letters:
        val = 0
    elif depth == 0:
        val = syllable_length_upper(Word._trusted(spec, level, letters))
    else:
        info = _info(spec, spec.level_key(level), letters)
        # symbolic members are rooted: length 1 one layer down, trivial below
        val = 1 if info.families and depth == 1 else 0
        for sec in info.secs.values():
            val = max(val, _deep_syllable(spec, level + 1, sec, depth - 1, memo))
    memo[key] = val
    return val


def check_2667(f0: int = 3, radius: int = 4, depth: int = 10, workers: int = 1) -> CheckReport:
    """``f(0) f(1) f(2) > 2^10`` and the chained bound on depth-10 sections.

    Sections never get longer than the element, and each window of three
    levels starting at a multiple of 3 divides the length by ``f`` (rounding
    up).  For ``g`` of length ``l`` the depth-10 sections therefore have
    length at most ``ceil(ceil(ceil(l/f(0))/f(1))/f(2))``.
    """
    t0 = time.perf_counter()
    spec = Growing(f0)
    rep = CheckReport("check_2667", {"f0": f0, "radius": radius, "depth": depth})
    fs = [f_exact(f0, i) for i in range(3)]
    prod = fs[0] * fs[1] * fs[2]
    rep.instances += 1
    rep.details["product"] = prod
    if not prod > 1 << depth:
        rep.fail({"product": prod, "power": 1 << depth})
    items = get_ball(spec, 0, "S", radius, workers=workers).items(radius)
    memo: dict = {}
    worst = 0
    for g, l in items:
        bound = l
        for i in range(3):
            # windows [0,2], [3,5], [6,8] all fit inside depth 10
            if 3 * i + 2 <= depth:
                bound = _ceil(bound, fs[i])
        val = _deep_syllable(spec, 0, g.letters, depth, memo)
        worst = max(worst, val)
        rep.instances += 1
        if val > bound:
            rep.fail({"spec": spec.to_json(), "g": _wjson(g), "depth": depth, "bound": bound, "found": val})
    rep.mode = "upper-bound"
    rep.details.update({"elements": len(items), "max_deep_syllable_length": worst})
    rep.elapsed = time.perf_counter() - t0
    return rep


def check_tetration(f0: int = 3, exact_k: int = 3, tower_k: int = 6) -> CheckReport:
    """``f(k) - 1 >= tetr_2(k)``: exact for small ``k``, via towers beyond."""
    t0 = time.perf_counter()
    rep = CheckReport("check_tetration", {"f0": f0, "exact_k": exact_k, "tower_k": tower_k})
    rows = []
    for k in range(tower_k + 1):
        fk = f_value(f0, k)
        tk = tetr(2, k)
        if k <= exact_k:
            if not (fk.is_exact and tk.is_exact):
                raise BudgetExceeded("bits", f"k={k} not exactly representable")
            ok = fk.value - 1 >= tk.value
            rows.append({"k": k, "mode": "exact", "holds": ok})
        else:
            low = fk.lower if not getattr(fk, "is_exact", False) else fk
            # f(k) - 1 >= lower end of the bracket, which is already of the form value - 1
            ok = low >= tk
            rows.append({"k": k, "mode": "tower", "holds": ok})
        rep.instances += 1
        if not ok:
            rep.fail({"k": k})
    rep.details = {"rows": rows}
    rep.mode = "exact+tower"
    rep.elapsed = time.perf_counter() - t0
    return rep


# -- commutator section tables ----------------------------------------------------


def _expected_c_table(spec, i: int, j: int, x: int) -> Word:
    r = spec.rank(0)
    ones = (1 << r) - 1
    bi, bj = 1 << i, 1 << j
    if x in (0, bi, bj, bi | bj):
        return directed(spec, 1)
    if x in (ones, ones ^ bi ^ bj, ones ^ bi, ones ^ bj):
        return Word(spec, 1, (from_mask(bi | bj, r),))
    for t in range(r):
        if t in (i, j):
            continue
        bt = ones ^ (1 << t)
        if x in (bt, bt ^ bi, bt ^ bj, bt ^ bi ^ bj):
            return Word(spec, 1, (basis(t),))
    return identity(spec, 1)


def _e(spec, level: int, i: int) -> Word:
    return Word(spec, level, (basis(i),))


def _ebar(spec, level: int, i: int) -> Word:
    return Word(spec, level, (bar_basis(i),))


def check_commutator_sections(r: int = 6) -> CheckReport:
    """Section tables of ``c_ij = [b, e_i, e_j]`` and the commutators built
    from them, over every valid index tuple in ``K_r``."""
    t0 = time.perf_counter()
    spec = Kr(r)
    rep = CheckReport("check_commutator_sections", {"r": r})
    b = directed(spec)
    b1 = directed(spec, 1)
    c = {}
    n_table = n_pair = n_triple = 0
    for i, j in itertools.permutations(range(r), 2):
        cij = commutator(b, _e(spec, 0, i), _e(spec, 0, j))
        c[i, j] = cij
        for x in range(1 << r):
            s = section(cij, from_mask(x, r))
            rep.instances += 1
            n_table += 1
            if equal(s, _expected_c_table(spec, i, j, x)) is not True:
                rep.fail({"table": "c", "i": i, "j": j, "vertex": x, "section": _wjson(s)})
    for i, j, k, m, n in itertools.permutations(range(r), 5):
        cm = conjugate(c[m, n], _ebar(spec, 0, k))
        h = commutator(c[i, j], cm)
        secs = first_layer_sections(h)
        ones = (1 << r) - 1
        expect = {
            0: commutator(b1, _e(spec, 1, k)),
            ones ^ (1 << k): commutator(_e(spec, 1, k), b1),
        }
        rep.instances += 1
        n_pair += 1
        if not first_layer_translation_zero(h):
            rep.fail({"table": "pair", "indices": [i, j, k, m, n], "reason": "moves the first layer"})
            continue
        for x, s in secs.items():
            want = expect.get(to_mask(x, r))
            if want is None:
                if is_trivial(s) is not True:
                    rep.fail({"table": "pair", "indices": [i, j, k, m, n], "vertex": to_mask(x, r)})
        for xm, want in expect.items():
            s = section(h, from_mask(xm, r))
            if equal(s, want) is not True:
                rep.fail({"table": "pair", "indices": [i, j, k, m, n], "vertex": xm})
        for l in range(r):
            if l in (i, j, k):
                continue
            cl = conjugate(c[i, j], _ebar(spec, 0, l))
            trip = commutator(h, cl)
            rep.instances += 1
            n_triple += 1
            want = commutator(b1, _e(spec, 1, k), _e(spec, 1, l))
            ok = first_layer_translation_zero(trip)
            for x, s in first_layer_sections(trip).items():
                if x.is_zero:
                    continue
                if is_trivial(s) is not True:
                    ok = False
            if equal(section(trip, ZERO), want) is not True:
                ok = False
            if not ok:
                rep.fail({"table": "triple", "indices": [i, j, k, m, n, l]})
    rep.details = {"c_table_vertices": n_table, "pair_tuples": n_pair, "triple_tuples": n_triple}
    rep.elapsed = time.perf_counter() - t0
    return rep


def first_layer_translation_zero(w: Word) -> bool:
    return _info(w.spec, w.spec.level_key(w.level), w.letters).translation.is_zero


# -- weakly branch generators -------------------------------------------------------


def _a_vec(r: int, p: int, q: int, t: int) -> F2Vector:
    """``e_q e_pq e_t e_pt`` with underlined letters ``e_(2^q)`` etc."""
    acc = ZERO
    for idx in (1 << q, (1 << p) + (1 << q), 1 << t, (1 << p) + (1 << t)):
        acc = canonical(acc + basis(idx % r), r)
    return acc


def check_weakly_branch_generators(spec: GroupSpec | None = None, s_values=None, seed: int = 0,
                                   prev_rank: int = 7) -> CheckReport:
    """Normal generators are non-trivial, first-layer sections of ``d``
    realize the next level's ``E`` set, and the commutator section table.

    For ``K_r`` the table is the ``c_ij`` one above; for the growing family
    the table is that of ``[[d, a_1], [d, a_2]^(ē_s)]`` with ``a_1, a_2``
    products of four underlined letters indexed by ``[0, prev_rank)``.
    """
    t0 = time.perf_counter()
    spec = spec or Growing(127)
    rep = CheckReport("check_weakly_branch_generators", {"spec": spec.to_json(), "seed": seed})
    rng = random.Random(seed)
    counts = {"nontrivial": 0, "realized": 0, "table": 0, "triple": 0}

    # (a) non-triviality of normal generators
    r0 = spec.rank(0)
    d = directed(spec)
    levels = [0] if spec.is_constant else [0, 1, 2]
    for lv in levels:
        r = spec.rank(lv)
        dl = directed(spec, lv)
        pairs = [(0, 1), (1, 0), (0, r - 1), (r - 2, r - 1)]
        for i, j in pairs:
            w = commutator(dl, _e(spec, lv, i), _e(spec, lv, j))
            rep.instances += 1
            counts["nontrivial"] += 1
            if is_trivial(w) is not False:
                rep.fail({"part": "nontrivial", "level": lv, "i": i, "j": j})

    # (b) first-layer sections of d realize E_(level+1) and d_(level+1)
    for lv in levels:
        r = spec.rank(lv)
        nr = spec.rank(lv + 1)
        dl = directed(spec, lv)
        targets = []
        if spec.rule(lv) == "bar":
            for i in range(r):
                targets.append((bar_basis(i) if r > 1 else basis(0), basis(i)))
        else:
            idxs = {1, 2, 3, r, (1 << r) - 2, (1 << r) - 1}
            idxs.update(rng.randrange(1, 1 << r) for _ in range(64))
            for idx in sorted(idxs):
                targets.append((enumeration_vector(idx, r), basis(idx % nr)))
            if nr > 64:
                # every basis index below nr comes from its own enumeration index
                for i in sorted({rng.randrange(nr) for _ in range(16)} | {0, 1, nr - 1}):
                    src = nr if i == 0 else i
                    targets.append((enumeration_vector(src, r), basis(i)))
        targets.append((ZERO, None))
        for x, want in targets:
            s = section(dl, x)
            rep.instances += 1
            counts["realized"] += 1
            ok = s.letters == ((DIRECTED,) if want is None else (canonical(want, nr),))
            if not ok:
                rep.fail({"part": "realize", "level": lv, "vertex": x.to_json()})

    # (c) commutator section table
    if spec.is_constant:
        sub = check_commutator_sections(spec.r) if spec.r <= 6 else None
        if sub is not None:
            rep.instances += sub.instances
            counts["table"] += sub.instances
            if not sub.passed:
                rep.fail({"part": "table", "sub": sub.counterexample})
    else:
        r = r0
        d1 = directed(spec, 1)
        seen = set()
        for i, j, l, m, n, s6 in itertools.permutations(range(prev_rank), 6):
            key = (i, frozenset((j, l)), m, frozenset((n, s6)))
            if key in seen:
                continue
            seen.add(key)
            a1 = Word(spec, 0, (_a_vec(r, i, j, l),))
            a2 = Word(spec, 0, (_a_vec(r, m, n, s6),))
            x1 = commutator(d, a1)
            x2 = commutator(d, a2)
            if s_values is None:
                # indices touching a_1 or a_2, the extremes and two seeded picks
                s_list = set(a1.letters[0].support) | set(a2.letters[0].support) | {0, r // 2, r - 1}
                s_list |= {rng.randrange(r) for _ in range(2)}
            else:
                s_list = s_values
            for s in sorted(s_list):
                h = commutator(x1, conjugate(x2, _ebar(spec, 0, s)))
                rep.instances += 1
                counts["table"] += 1
                info = _info(spec, 0, h.letters)
                ok = info.translation.is_zero and not info.families
                want = {ZERO: commutator(d1, _e(spec, 1, s)), bar_basis(s): commutator(_e(spec, 1, s), d1)}
                for x, sec in info.secs.items():
                    if x not in want:
                        if is_trivial(Word._trusted(spec, 1, sec)) is not True:
                            ok = False
                for x, wv in want.items():
                    if equal(section(h, x), wv) is not True:
                        ok = False
                if not ok:
                    rep.fail({"part": "table", "indices": [i, j, l, m, n, s6], "s": s})
                    break
        # the follow-up commutator with [d, a_1]^(ē_q) is rigid at the root vertex
        i, j, l, m, n, s6 = 0, 1, 2, 3, 4, 5
        a1 = Word(spec, 0, (_a_vec(r, i, j, l),))
        a2 = Word(spec, 0, (_a_vec(r, m, n, s6),))
        x1 = commutator(d, a1)
        x2 = commutator(d, a2)
        for s, q in [(0, 1), (5, 9), (126, 0), (63, 64)]:
            h = commutator(x1, conjugate(x2, _ebar(spec, 0, s)), conjugate(x1, _ebar(spec, 0, q)))
            rep.instances += 1
            counts["triple"] += 1
            info = _info(spec, 0, h.letters)
            ok = info.translation.is_zero and not info.families
            for x, sec in info.secs.items():
                if not x.is_zero and is_trivial(Word._trusted(spec, 1, sec)) is not True:
                    ok = False
            if equal(section(h, ZERO), commutator(d1, _e(spec, 1, s), _e(spec, 1, q))) is not True:
                ok = False
            if not ok:
                rep.fail({"part": "triple", "s": s, "q": q})
        counts["level2"] = _check_level2_tables(spec, rep, rng)
    rep.details = counts
    rep.elapsed = time.perf_counter() - t0
    return rep


def _check_level2_tables(spec, rep: CheckReport, rng) -> int:
    """Sections of ``c_ij = [d, e_i, e_j]`` at the first enumeration level.

    With underlined letters ``u_A = d|_A`` of the next level:
    ``c_ij|_1 = u_i d u_j u_ij``, ``c_ij`` has directed sections only at
    ``1, e_i, e_j, e_ie_j``, ``[c_ij, c_il]`` is supported on
    ``1, e_i, e_j, e_l, e_ie_j, e_ie_l`` and its root section conjugated by
    ``u_j u_ij`` is ``[d, u_j u_l u_ij u_il]``.
    """
    lv = next(k for k in range(3) if spec.rule(k) == "enum")
    r = spec.rank(lv)
    nr = spec.rank(lv + 1)
    dl = directed(spec, lv)
    dn = directed(spec, lv + 1)

    def u(*idx):
        return Word(spec, lv + 1, (basis(sum(1 << t for t in idx) % nr),))

    def e(i):
        return _e(spec, lv, i)

    triples = [(0, 1, 2), (2, 5, 9), (r - 1, 3, r - 2)]
    while len(triples) < 12:
        t = tuple(rng.sample(range(r), 3))
        if t not in triples:
            triples.append(t)
    n = 0
    for i, j, l in triples:
        cij = commutator(dl, e(i), e(j))
        cil = commutator(dl, e(i), e(l))
        n += 1
        rep.instances += 1
        ok = equal(section(cij, ZERO), u(i) * dn * u(j) * u(i, j)) is True
        info = _info(spec, spec.level_key(lv), cij.letters)
        directed_at = {x for x, sec in info.secs.items() if DIRECTED in sec}
        want = {canonical(from_mask(m, r), r) for m in (0, 1 << i, 1 << j, (1 << i) | (1 << j))}
        ok = ok and directed_at == want and info.translation.is_zero
        h = commutator(cij, cil)
        hinfo = _info(spec, spec.level_key(lv), h.letters)
        support = {canonical(from_mask(m, r), r) for m in (0, 1 << i, 1 << j, 1 << l, (1 << i) | (1 << j), (1 << i) | (1 << l))}
        ok = ok and not hinfo.families and set(hinfo.secs) <= support
        root = section(h, ZERO)
        ok = ok and equal(root, commutator(section(cij, ZERO), section(cil, ZERO))) is True
        target = commutator(dn, u(j) * u(l) * u(i, j) * u(i, l))
        ok = ok and equal(conjugate(root, u(j) * u(i, j)), target) is True
        if not ok:
            rep.fail({"part": "level2", "i": i, "j": j, "l": l})
    return n


# -- transitivity ------------------------------------------------------------------


def check_transitivity(spec: GroupSpec, max_layer: int, max_vertices: int = 1 << 17) -> CheckReport:
    """Orbit of the all-zero vertex under the ``E`` generators fills each layer."""
    t0 = time.perf_counter()
    rep = CheckReport("check_transitivity", {"spec": spec.to_json(), "max_layer": max_layer})
    gens = make_generators(spec, 0, "E").members
    sizes = {}
    for layer in range(max_layer + 1):
        total = 1
        for lv in range(layer):
            total <<= spec.rank(lv)
        if total > max_vertices:
            rep.details["skipped_from_layer"] = layer
            break
        start = VertexPath(spec, 0, tuple(ZERO for _ in range(layer)))
        seen = {start.letters}
        stack = [start]
        while stack:
            v = stack.pop()
            for g in gens:
                img = act(g, v)
                if img.letters not in seen:
                    seen.add(img.letters)
                    stack.append(img)
        sizes[str(layer)] = {"orbit": len(seen), "layer": total}
        rep.instances += 1
        if len(seen) != total:
            rep.fail({"layer": layer, "orbit": len(seen), "layer_size": total})
    rep.details["layers"] = sizes
    rep.elapsed = time.perf_counter() - t0
    return rep


# -- lawlessness complexity -------------------------------------------------------------


_TOKEN = re.compile(r"\s*(?:(\[)|(\])|(,)|(\()|(\))|\^(-?\d+)|([A-Za-z]))")


def parse_abstract_word(text: str) -> tuple:
    """Parse ``"x y X"``, ``"[x,y]"``, ``"x^2"``, ``"(xy)^-1"`` into a tuple of
    ``(letter_index, ±1)``.  Upper case is the inverse of lower case;
    letters are numbered in order of first appearance."""
    names: dict = {}
    pos = 0
    toks = []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        toks.append(mt.groups())
        pos = mt.end()
    idx = [0]

    def inv(w):
        return tuple((a, -e) for a, e in reversed(w))

    def red(w):
        out = []
        for t in w:
            if out and out[-1][0] == t[0] and out[-1][1] == -t[1]:
                out.pop()
            else:
                out.append(t)
        return tuple(out)

    def atom():
        if idx[0] >= len(toks):
            raise ValueError("unexpected end of word")
        t = toks[idx[0]]
        idx[0] += 1
        if t[6]:
            ch = t[6]
            key = ch.lower()
            if key not in names:
                names[key] = len(names)
            w = ((names[key], -1 if ch.isupper() else 1),)
        elif t[3]:
            w = seq(")")
            idx[0] += 1
        elif t[0]:
            parts = [seq(",", "]")]
            while toks[idx[0]][2]:
                idx[0] += 1
                parts.append(seq(",", "]"))
            idx[0] += 1
            if len(parts) < 2:
                raise ValueError("commutator needs two entries")
            w = parts[0]
            for p in parts[1:]:
                w = inv(w) + inv(p) + w + p
        else:
            raise ValueError("unexpected token")
        while idx[0] < len(toks) and toks[idx[0]][5] is not None:
            e = int(toks[idx[0]][5])
            idx[0] += 1
            base = w if e >= 0 else inv(w)
            w = base * abs(e)
        return w

    def seq(*stops):
        w = ()
        while idx[0] < len(toks):
            t = toks[idx[0]]
            if (t[1] and "]" in stops) or (t[2] and "," in stops) or (t[4] and ")" in stops):
                return w
            w = w + atom()
        if stops:
            raise ValueError("unbalanced brackets")
        return w

    w = red(seq())
    return w, len(names)


def _eval_abstract(word: tuple, gs: tuple, spec, level) -> Word:
    out = identity(spec, level)
    for a, e in word:
        g = gs[a]
        out = out * (g if e > 0 else inverse(g))
    return out


def chi_complexity(spec: GroupSpec, level: int, word, radius: int, kind: str = "S"):
    """Least total length ``sum |g_i|`` with ``w(g_1, ..., g_m) != 1``.

    Tuples are searched in order of (total length, lengths, canonical
    representatives).  Returns ``(total, witness tuple)`` or ``None`` if no
    tuple of total length at most ``radius`` works.
    """
    if isinstance(word, str):
        word, m = parse_abstract_word(word)
    else:
        m = 1 + max((a for a, _ in word), default=-1)
    if m == 0:
        return None
    ball = get_ball(spec, level, kind, 0)
    for total in range(radius + 1):
        # longer elements are only needed once shorter totals are exhausted
        ball.extend_to(total)
        by_len: dict = {}
        for w, l in ball.items(total):
            by_len.setdefault(l, []).append(w)
        for lens in _compositions(total, m):
            pools = [by_len.get(l, []) for l in lens]
            for gs in itertools.product(*pools):
                val = _eval_abstract(word, gs, spec, level)
                t = is_trivial(val)
                if t is None:
                    raise BudgetExceeded("recursion", "word problem undecided during search")
                if not t:
                    return total, gs
    return None


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# -- registry -------------------------------------------------------------------------


CHECKS = {
    "check_two_layer_reduction": lambda a: check_two_layer_reduction(a.get("r", 5), a.get("radius", 5), a.get("workers", 1)),
    "check_growing_reduction": lambda a: check_growing_reduction(a.get("f0", 3), a.get("radius", 3), a.get("workers", 1)),
    "check_2667": lambda a: check_2667(a.get("f0", 3), a.get("radius", 4)),
    "check_tetration": lambda a: check_tetration(a.get("f0", 3)),
    "check_commutator_sections": lambda a: check_commutator_sections(a.get("r", 6)),
    "check_weakly_branch_generators": lambda a: check_weakly_branch_generators(
        a.get("spec") or Growing(127), seed=a.get("seed", 0)
    ),
    "check_transitivity": lambda a: check_transitivity(a.get("spec") or Kr(5), a.get("max_layer", 2)),
}


def run_check(name: str, **params) -> CheckReport:
    if name not in CHECKS:
        raise KeyError(name)
    return CHECKS[name](params)
