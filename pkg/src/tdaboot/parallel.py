"""Seeded substreams and an order-preserving thread map.

Every random quantity is drawn from a generator keyed by ``(seed, *key)``,
so results never depend on how work is split across threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import InvalidArgument

ENV_THREADS = "TDABOOT_THREADS"

# Stage tags for substream keys.
STAGE_BOOTSTRAP = 1
STAGE_TRUTH = 2
STAGE_COVERAGE = 3
STAGE_STABILIZATION = 4
STAGE_DIAGNOSE = 5


def substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def resolve_threads(threads: int | None = None) -> int:
    """Thread count: the environment variable wins, then ``threads``, then the core count."""
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            threads = int(env)
        except ValueError:
            raise InvalidArgument(f"{ENV_THREADS} must be an integer, got {env!r}") from None
    if threads is None:
        threads = os.cpu_count() or 1
    if threads < 1:
        raise InvalidArgument(f"thread count must be >= 1, got {threads}")
    return threads


def pmap(fn, items, threads: int | None = 1) -> list:
    """``[fn(x) for x in items]``, possibly on a thread pool; order is kept."""
    items = list(items)
    threads = resolve_threads(threads) if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
