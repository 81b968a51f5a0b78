"""Deterministic seed splitting and optional thread parallelism.

Every stochastic routine in this package takes a single root seed and derives
per-task seeds with ``numpy.random.SeedSequence.spawn``, always in the same
order.  Worker counts only control concurrency, never the task partition, so
results are bit-identical for any number of workers.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np


def spawn_seeds(seed, count):
    """Derive `count` child seed sequences from a root seed, in fixed order."""
    return np.random.SeedSequence(seed).spawn(count)


def parallel_map(fn, items, workers=1):
    """Map `fn` over `items`, returning results in input order."""
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
