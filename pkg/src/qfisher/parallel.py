"""Deterministic fan-out helper for grid sweeps and property suites.

Results always come back in input order.  The pool width is capped by the
QFISHER_THREADS environment variable; width 1 degenerates to a plain map.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def pool_width() -> int:
    raw = os.environ.get("QFISHER_THREADS", "")
    if raw.strip():
        try:
            width = int(raw)
        except ValueError as exc:
            raise ValueError(f"QFISHER_THREADS must be an integer, got {raw!r}") from exc
        return max(1, width)
    return min(8, os.cpu_count() or 1)


def parallel_map(fn, items):
    items = list(items)
    width = pool_width()
    if width <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=width) as pool:
        return list(pool.map(fn, items))
