"""
Thread-pool helper for per-iteration work.

Iterations are split into contiguous chunks, each chunk is processed by one
worker, and results are reassembled in index order. Output therefore does
not depend on the number of threads.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")


def chunk_bounds(count: int, chunks: int) -> List[range]:
    """Split ``range(count)`` into at most ``chunks`` contiguous ranges."""
    chunks = max(1, min(chunks, count)) if count else 1
    size, extra = divmod(count, chunks)
    bounds = []
    start = 0
    for c in range(chunks):
        stop = start + size + (1 if c < extra else 0)
        bounds.append(range(start, stop))
        start = stop
    return bounds


def map_chunks(func: Callable[[range], Sequence[T]], count: int, threads: int = 1) -> List[T]:
    """
    Apply ``func`` to contiguous chunks of ``range(count)``.

    Args:
        func: Callable receiving a range of iteration indices and returning
            one result per index, in order
        count: Number of iterations
        threads: Worker threads; 1 runs inline

    Returns:
        List of ``count`` results in iteration order
    """
    if count == 0:
        return []
    if threads <= 1 or count == 1:
        return list(func(range(count)))

    bounds = chunk_bounds(count, threads)
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        parts = list(pool.map(func, bounds))

    results: List[T] = []
    for part in parts:
        results.extend(part)
    return results
