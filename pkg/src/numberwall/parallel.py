"""Order-preserving parallel map shared by the wall and escape code."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_default_workers: int | None = None


def set_default_workers(n: int | None) -> None:
    """Cap the worker count used when callers pass ``workers=None``."""
    global _default_workers
    if n is not None and n < 1:
        raise ValueError("worker count must be positive")
    _default_workers = n


def default_workers() -> int:
    return _default_workers or os.cpu_count() or 1


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """``[fn(x) for x in items]`` computed on a thread pool; results keep input order."""
    items = list(items)
    n = workers or default_workers()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
