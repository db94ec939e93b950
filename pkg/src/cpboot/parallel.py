"""Order-preserving parallel map over independent, index-keyed tasks."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def resolve_workers(workers: int | None) -> int:
    """``None`` falls back to ``$CPBOOT_THREADS`` and then to 1."""
    if workers is None:
        workers = int(os.environ.get("CPBOOT_THREADS", "1") or 1)
    if workers < 1:
        raise ValueError(f"worker count must be positive, got {workers}")
    return workers


def _run_block(func, block):
    return [func(i) for i in block]


def map_indexed(func, count: int, workers: int | None = 1, block: int = 0) -> list:
    """Return ``[func(0), ..., func(count - 1)]``.

    Tasks must depend on their index only (each derives its own random
    stream), so the result is identical for any worker count.
    """
    workers = resolve_workers(workers)
    if workers == 1 or count <= 1:
        return [func(i) for i in range(count)]
    block = block or max(1, count // (8 * workers))
    blocks = [range(s, min(count, s + block)) for s in range(0, count, block)]
    out: list = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_block, [func] * len(blocks), blocks):
            out.extend(part)
    return out
