"""Thread-pool helper honoring the FRAME_FORGE_THREADS cap."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_THREADS = "FRAME_FORGE_THREADS"


def worker_count() -> int:
    """Number of worker threads: FRAME_FORGE_THREADS if set to a positive int, else all cores."""
    raw = os.environ.get(ENV_THREADS, "").strip()
    if raw:
        try:
            val = int(raw)
        except ValueError:
            val = 0
        if val >= 1:
            return val
    return os.cpu_count() or 1


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """``[fn(x) for x in items]``, threaded when more than one worker is allowed.

    Results keep input order so aggregation never depends on scheduling.
    """
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
