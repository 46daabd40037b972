"""Order-preserving parallel map over modes, capped by MEMWAVE_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("MEMWAVE_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError as exc:
            raise ValueError(f"MEMWAVE_THREADS={raw!r} is not an integer") from exc
        if n < 1:
            raise ValueError("MEMWAVE_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def parallel_map(fn, items):
    """map(fn, items) with results in input order; per-item work must be pure."""
    items = list(items)
    workers = min(thread_count(), max(1, len(items)))
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
