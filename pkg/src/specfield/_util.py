"""Runtime helpers shared by the replication-heavy experiment drivers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

# keep one replication batch around this many bytes of innovation workspace
_CHUNK_BYTES = 1 << 26


def worker_count() -> int:
    """Worker threads for replication batches; SPECFIELD_THREADS overrides (>=1)."""
    raw = os.environ.get("SPECFIELD_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"SPECFIELD_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ValueError(f"SPECFIELD_THREADS must be >= 1, got {n}")
    return n


def replication_chunks(total: int, bytes_per_replication: int) -> list[tuple[int, int]]:
    """Split range(total) into contiguous (start, stop) chunks of bounded memory."""
    per = max(1, _CHUNK_BYTES // max(1, bytes_per_replication))
    return [(lo, min(lo + per, total)) for lo in range(0, total, per)]


def run_chunked(chunks, task):
    """Run ``task(lo, hi)`` over every chunk, threaded when configured.

    Tasks must write into disjoint slots of preallocated output (indexed by
    replication), which keeps results identical whatever the worker count.
    """
    workers = worker_count()
    if workers == 1 or len(chunks) <= 1:
        for lo, hi in chunks:
            task(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task, lo, hi) for lo, hi in chunks]
        for fut in futures:
            fut.result()
