"""Chunked, thread-count-independent execution of Monte Carlo workers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .rng import RngStream


def resolve_threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("CENFRAC_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def run_chunks(worker, rng: RngStream, n: int, chunk_size: int, threads: int | None):
    """Run worker(generator, count) over fixed chunks of n samples.

    Chunk boundaries and substreams depend only on (rng, n, chunk_size), so
    the concatenated results are identical for any thread count.
    """
    counts = []
    left = int(n)
    while left > 0:
        take = min(chunk_size, left)
        counts.append(take)
        left -= take
    jobs = [(c, m) for c, m in enumerate(counts)]
    n_threads = resolve_threads(threads)
    if n_threads <= 1 or len(jobs) <= 1:
        return [worker(rng.chunk_generator(c), m) for c, m in jobs]
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        futures = [pool.submit(worker, rng.chunk_generator(c), m) for c, m in jobs]
        return [f.result() for f in futures]
