"""Bounded worker pool with schedule-independent, ordered assembly."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, TypeVar

T = TypeVar("T")

ENV_THREADS = "ATLAS_THREADS"


def default_workers() -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1


def map_ordered(fn: Callable[[int], T], n: int, workers: Optional[int] = None) -> list[T]:
    """[fn(0), ..., fn(n-1)], computed on up to ``workers`` threads.

    The compiled kernels release the GIL, so row-level work overlaps; results
    are collected by index, which keeps output independent of scheduling.
    """
    workers = workers or default_workers()
    if workers <= 1 or n <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n)))
