"""Command line front end: ``python -m branchwork <command> ...``.

Exit codes: 0 success, 1 a verification check was falsified, 2 usage
error, 3 a budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass

from . import engine, f2, order as order_mod, verifier
from .engine import DIRECTED, VertexPath, Word
from .f2 import BudgetExceeded, bar_basis, basis
from .groups import GroupSpec

FORMAT_VERSION = 1
ENV_PREFIX = "BRANCHWORK_"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    spec: GroupSpec
    level: int = 0
    gens: str = "S"
    budget_support: int = 4096
    budget_recursion: int = order_mod.MAX_DEPTH
    budget_ball: int = order_mod.BALL_BUDGET
    budget_order: int = order_mod.MAX_NODES
    fingerprint_depth: int = order_mod.FINGERPRINT_DEPTH
    seed: int = 0
    threads: int = 1
    fmt: str = "json"

    def __post_init__(self):
        for name in ("budget_support", "budget_recursion", "budget_ball", "budget_order", "threads"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name.replace('_', '-')} must be positive")
        if self.fingerprint_depth < 0:
            raise UsageError("fingerprint-depth must be non-negative")


def parse_spec(text: str) -> GroupSpec:
    """JSON (``{"family":"Kr","r":5}``) or shorthand (``Kr r=5``, ``G f0=3``)."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return GroupSpec.from_json(json.loads(text))
        parts = text.replace(",", " ").split()
        fam = parts[0]
        kv = dict(p.split("=", 1) for p in parts[1:])
        if fam in ("Kr", "K"):
            return GroupSpec("Kr", r=int(kv["r"]))
        if fam in ("G", "Growing"):
            return GroupSpec("G", f0=int(kv.get("f0", 3)), base=int(kv.get("base", 0)))
    except (ValueError, KeyError, IndexError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad --spec {text!r}: {exc}") from exc
    raise UsageError(f"bad --spec {text!r}")


_TOKEN = re.compile(r"^(?:(D|b|d)|e(\d+)|E(\d+)|m(\d+)|1)$")


def _letter(tok: str, rank: int):
    mt = _TOKEN.match(tok)
    if not mt:
        raise UsageError(f"bad letter {tok!r}")
    if mt.group(1):
        return DIRECTED
    if mt.group(2):
        return basis(int(mt.group(2)))
    if mt.group(3):
        return bar_basis(int(mt.group(3)))
    if mt.group(4):
        return f2.from_mask(int(mt.group(4)), rank)
    return f2.ZERO


def parse_word(text: str, spec: GroupSpec, level: int) -> Word:
    """Word JSON, or text such as ``"D e0 D E1"`` (``E<i>`` is the
    complement of ``e<i>``, ``m<k>`` a bitmask, ``1`` the identity)."""
    text = text.strip()
    try:
        if text.startswith("{"):
            obj = json.loads(text)
            obj.setdefault("level", level)
            return Word.from_json(spec, obj)
        rank = spec.rank(level)
        return Word(spec, level, [_letter(t, rank) for t in text.split()])
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad --word: {exc}") from exc


def parse_vertex(text: str, spec: GroupSpec, level: int) -> VertexPath:
    """Vertex JSON, or space-separated first-layer letters like ``"e0 E1 m5"``."""
    text = text.strip()
    try:
        if text.startswith("{"):
            obj = json.loads(text)
            obj.setdefault("start_level", level)
            return VertexPath.from_json(spec, obj)
        letters = []
        for i, tok in enumerate(text.split()):
            x = _letter(tok, spec.rank(level + i))
            if x is DIRECTED:
                raise UsageError("a vertex cannot contain the directed letter")
            letters.append(x)
        return VertexPath(spec, level, tuple(letters))
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad --vertex: {exc}") from exc


def _emit(obj, out) -> None:
    if isinstance(obj, dict):
        obj = {"format": FORMAT_VERSION, **obj}
    out.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _env(name: str, default):
    val = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if val is None:
        return default
    return type(default)(val) if default is not None else val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", default=None, help='group, e.g. \'{"family":"Kr","r":5}\' or "Kr r=5"')
    common.add_argument("--level", type=int, default=None)
    common.add_argument("--gens", choices=["E", "S"], default=None)
    common.add_argument("--budget-support", type=int, default=None)
    common.add_argument("--budget-recursion", type=int, default=None)
    common.add_argument("--budget-ball", type=int, default=None)
    common.add_argument("--budget-order", type=int, default=None)
    common.add_argument("--fingerprint-depth", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--format", choices=["json", "csv"], default=None)

    p = argparse.ArgumentParser(prog="branchwork", description="Spinal groups on rooted trees.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("section", parents=[common], help="section of a word at a vertex")
    s.add_argument("--word", required=True)
    s.add_argument("--vertex", required=True)
    s.add_argument("--portrait-depth", type=int, default=0)

    s = sub.add_parser("act", parents=[common], help="image of a vertex")
    s.add_argument("--word", required=True)
    s.add_argument("--vertex", required=True)

    s = sub.add_parser("order", parents=[common], help="order of an element")
    s.add_argument("--word", required=True)

    s = sub.add_parser("ball", parents=[common], help="exact Cayley ball")
    s.add_argument("--radius", "--n", dest="radius", type=int, required=True)

    s = sub.add_parser("period-growth", parents=[common], help="period growth table")
    s.add_argument("--n", "--radius", dest="n", type=int, required=True)
    s.add_argument("--method", choices=["ball", "classes"], default="ball")

    s = sub.add_parser("min-length", parents=[common], help="exact word length")
    s.add_argument("--word", required=True)
    s.add_argument("--radius", "--n", dest="radius", type=int, required=True)

    s = sub.add_parser("chi", parents=[common], help="lawlessness complexity of an abstract word")
    s.add_argument("--law", required=True, help='abstract word, e.g. "[x,y]" or "x^4"')
    s.add_argument("--radius", "--n", dest="radius", type=int, required=True)

    s = sub.add_parser("verify", parents=[common], help="run verification checks")
    s.add_argument("check", choices=sorted(verifier.CHECKS) + ["all"])
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--radius", type=int, default=None)
    s.add_argument("--f0", type=int, default=None)
    s.add_argument("--max-layer", type=int, default=None)
    s.add_argument("--timing", action="store_true", help="include elapsed seconds (breaks byte equality)")
    return p


def _config(args) -> RunConfig:
    spec_text = args.spec if args.spec is not None else _env("spec", None)
    if spec_text is None:
        if args.command == "verify":
            spec_text = "Kr r=5"
        else:
            raise UsageError("--spec is required")
    pick = lambda flag, name, default: flag if flag is not None else _env(name, default)  # noqa: E731
    return RunConfig(
        spec=parse_spec(spec_text),
        level=pick(args.level, "level", 0),
        gens=pick(args.gens, "gens", "S"),
        budget_support=pick(args.budget_support, "budget_support", 4096),
        budget_recursion=pick(args.budget_recursion, "budget_recursion", order_mod.MAX_DEPTH),
        budget_ball=pick(args.budget_ball, "budget_ball", order_mod.BALL_BUDGET),
        budget_order=pick(args.budget_order, "budget_order", order_mod.MAX_NODES),
        fingerprint_depth=pick(args.fingerprint_depth, "fingerprint_depth", order_mod.FINGERPRINT_DEPTH),
        seed=pick(args.seed, "seed", 0),
        threads=pick(args.threads, "threads", 1),
        fmt=pick(args.format, "format", "json"),
    )


def _run(args, cfg: RunConfig, out) -> int:
    spec, level = cfg.spec, cfg.level
    cmd = args.command
    if cmd == "section":
        w = parse_word(args.word, spec, level)
        v = parse_vertex(args.vertex, spec, level)
        s = engine.section(w, v)
        res = {"section": s.to_json()}
        if args.portrait_depth:
            res["portrait"] = engine.portrait(s, args.portrait_depth).to_json()
        _emit(res, out)
        return 0
    if cmd == "act":
        w = parse_word(args.word, spec, level)
        v = parse_vertex(args.vertex, spec, level)
        _emit({"image": engine.act(w, v).to_json()}, out)
        return 0
    if cmd == "order":
        w = parse_word(args.word, spec, level)
        res = order_mod.order(w, max_depth=cfg.budget_recursion, max_nodes=cfg.budget_order)
        _emit(res.to_json(), out)
        return 0 if res.finite else 3
    if cmd == "ball":
        items = order_mod.ball_enumerate(
            spec, level, cfg.gens, args.radius, cfg.fingerprint_depth, cfg.threads, cfg.budget_ball
        )
        if cfg.fmt == "csv":
            out.write("index,length,word_json\n")
            for i, (w, l) in enumerate(items):
                wj = json.dumps(w.to_json(), sort_keys=True, separators=(",", ":"))
                out.write(f'{i},{l},"{wj.replace(chr(34), chr(34) * 2)}"\n')
        else:
            _emit({"size": len(items), "elements": [{"word": w.to_json(), "length": l} for w, l in items]}, out)
        return 0
    if cmd == "period-growth":
        table = order_mod.period_growth(
            spec, level, cfg.gens, args.n, method=args.method, workers=cfg.threads,
            fingerprint_depth=cfg.fingerprint_depth,
        )
        if cfg.fmt == "csv":
            out.write(table.to_csv())
        else:
            _emit({
                "method": table.method,
                "rows": [
                    {"n": r.n, "ball_size": r.ball_size, "pi": r.pi, "witness": r.witness.to_json()}
                    for r in table.rows
                ],
            }, out)
        return 0
    if cmd == "min-length":
        w = parse_word(args.word, spec, level)
        n = order_mod.min_length(w, cfg.gens, args.radius, cfg.fingerprint_depth, cfg.threads)
        _emit({"min_length": n, "found": n is not None}, out)
        return 0
    if cmd == "chi":
        try:
            word, m = verifier.parse_abstract_word(args.law)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        res = verifier.chi_complexity(spec, level, word, args.radius, cfg.gens)
        if res is None:
            _emit({"chi": None, "found": False, "radius": args.radius}, out)
        else:
            _emit({"chi": res[0], "found": True, "witness": [g.to_json() for g in res[1]]}, out)
        return 0
    if cmd == "verify":
        names = sorted(verifier.CHECKS) if args.check == "all" else [args.check]
        params = {"workers": cfg.threads, "seed": cfg.seed}
        for key in ("r", "radius", "f0", "max_layer"):
            val = getattr(args, key)
            if val is not None:
                params[key] = val
        if args.spec is not None:
            params["spec"] = spec
        failed = False
        for name in names:
            rep = verifier.run_check(name, **params)
            out.write(rep.dumps(with_time=args.timing) + "\n")
            failed |= not rep.passed
        return 1 if failed else 0
    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    old_budget = None
    try:
        cfg = _config(args)
        old_budget = f2.set_support_budget(cfg.budget_support)
        return _run(args, cfg, out)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"branchwork: error: {exc}\n")
        return 2
    except BudgetExceeded as exc:
        _emit({"error": "budget", "kind": exc.kind, "message": str(exc)}, out)
        return 3
    finally:
        if old_budget is not None:
            f2.set_support_budget(old_budget)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
