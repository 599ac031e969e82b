"""Bounded internal parallelism for subset scans.

The FRAMELAB_THREADS environment variable caps the worker count; unset or
invalid values fall back to the machine's CPU count. Work is split into
chunks whose results are merged in chunk order, so the outcome is identical
whatever the thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("FRAMELAB_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        n = os.cpu_count() or 1
    return n


def run_chunks(fn, chunks: list) -> list:
    """Apply ``fn`` to every chunk, returning results in chunk order."""
    if not chunks:
        return []
    workers = min(thread_count(), len(chunks))
    if workers <= 1 or len(chunks) == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))
