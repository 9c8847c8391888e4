"""Thread-count policy and a small map helper."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    """Worker threads allowed; ``MAGIC_ENTROPY_THREADS`` caps the CPU count."""
    cpus = os.cpu_count() or 1
    raw = os.environ.get("MAGIC_ENTROPY_THREADS", "").strip()
    if not raw:
        return cpus
    try:
        val = int(raw)
    except ValueError:
        return cpus
    return max(1, min(val, cpus))


def pmap(fn: Callable[[T], R], items: Iterable[T], min_items: int = 64) -> list[R]:
    items = list(items)
    workers = thread_count()
    if workers <= 1 or len(items) < min_items:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
