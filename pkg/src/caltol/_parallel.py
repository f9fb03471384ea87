"""Thread-pool map with deterministic, order-preserving reduction.

Work items carry their own derived seeds, so results are identical whatever
the worker count; CALTOL_THREADS caps the pool size.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["worker_count", "ordered_map"]


def worker_count() -> int:
    env = os.environ.get("CALTOL_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"CALTOL_THREADS must be an integer, got {env!r}")
    return max(1, os.cpu_count() or 1)


def ordered_map(fn, items):
    """Map fn over items, in parallel when allowed, results in input order."""
    items = list(items)
    n_workers = min(worker_count(), len(items)) if items else 1
    if n_workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, items))
