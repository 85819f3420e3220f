"""Deterministic chunked map over a process pool.

The worker count comes from ``CHEBCONVEX_WORKERS`` (default 1).  Chunks are
cut from the input order and results are concatenated in that order, so the
output never depends on the worker count.
"""

from __future__ import annotations

import atexit
import os
import pickle
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional, Sequence

ENV_WORKERS = "CHEBCONVEX_WORKERS"
MIN_PARALLEL_ITEMS = 64

_pools: dict[int, ProcessPoolExecutor] = {}


def worker_count(workers: Optional[int] = None) -> int:
    if workers is None:
        try:
            workers = int(os.environ.get(ENV_WORKERS, "1"))
        except ValueError:
            workers = 1
    return max(1, workers)


def _pool(n: int) -> ProcessPoolExecutor:
    if n not in _pools:
        _pools[n] = ProcessPoolExecutor(max_workers=n)
    return _pools[n]


@atexit.register
def _shutdown():
    for pool in _pools.values():
        pool.shutdown(cancel_futures=True)
    _pools.clear()


def _picklable(obj) -> bool:
    try:
        pickle.dumps(obj)
    except Exception:
        return False
    return True


def parallel_map(fn: Callable, items: Sequence, workers: Optional[int] = None,
                 args: tuple = (), kwargs: Optional[dict] = None) -> list:
    """Return ``fn(*args, chunk, **kwargs)`` concatenated over input chunks."""
    kwargs = kwargs or {}
    items = list(items)
    n = worker_count(workers)
    if n == 1 or len(items) < MIN_PARALLEL_ITEMS or not _picklable((fn, args, kwargs)):
        return list(fn(*args, items, **kwargs))
    size = -(-len(items) // (4 * n))
    chunks = [items[i:i + size] for i in range(0, len(items), size)]
    if not _picklable(chunks[0]):
        return list(fn(*args, items, **kwargs))
    futures = [_pool(n).submit(fn, *args, chunk, **kwargs) for chunk in chunks]
    out: list = []
    for fut in futures:
        out.extend(fut.result())
    return out
