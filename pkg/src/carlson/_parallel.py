"""Deterministic first-hit search over ordered chunks with a thread pool."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CARLSON_THREADS", "1")))
    except ValueError:
        return 1


def first_hit(fn: Callable[[T], R | None], chunks: Sequence[T], threads: int | None = None) -> R | None:
    """Result of the earliest chunk (in list order) for which ``fn`` returns non-``None``.

    Chunks run in batches of ``threads``; a batch is only consulted after all
    of its members finish, so the answer never depends on scheduling.
    """
    threads = threads or default_threads()
    if threads <= 1 or len(chunks) <= 1:
        for ch in chunks:
            r = fn(ch)
            if r is not None:
                return r
        return None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for start in range(0, len(chunks), threads):
            batch = list(pool.map(fn, chunks[start:start + threads]))
            for r in batch:
                if r is not None:
                    return r
    return None


def split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split ``[lo, hi)`` into at most ``parts`` contiguous nonempty ranges."""
    parts = max(1, min(parts, hi - lo))
    step, extra = divmod(hi - lo, parts)
    out = []
    a = lo
    for i in range(parts):
        b = a + step + (1 if i < extra else 0)
        out.append((a, b))
        a = b
    return out
