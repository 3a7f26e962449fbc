"""Order-preserving parallel map."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

__all__ = ["pmap", "default_workers"]

# below this many tasks the pool start-up costs more than it saves
MIN_PARALLEL = 2048


def default_workers() -> int:
    env = os.environ.get("BRANCHWORK_THREADS")
    if env:
        return max(1, int(env))
    return 1


def _run_chunk(args):
    fn, chunk = args
    return [fn(x) for x in chunk]


def pmap(fn, items, workers: int = 1, min_parallel: int = MIN_PARALLEL) -> list:
    """``[fn(x) for x in items]`` computed with up to ``workers`` processes.

    Chunks are merged back in input order, so the result never depends on
    the number of workers or on scheduling.
    """
    items = list(items)
    if workers <= 1 or len(items) < min_parallel:
        return [fn(x) for x in items]
    nchunks = workers * 4
    size = -(-len(items) // nchunks)
    chunks = [items[i : i + size] for i in range(0, len(items), size)]
    out: list = []
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(_run_chunk, [(fn, c) for c in chunks]):
            out.extend(part)
    return out
