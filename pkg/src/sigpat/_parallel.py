import os
from concurrent.futures import ProcessPoolExecutor


def resolve_threads(threads=None) -> int:
    if threads is None:
        threads = int(os.environ.get("SIGPAT_THREADS", "1") or 1)
    return max(1, int(threads))


def parallel_map(fn, items, threads=None):
    """Ordered ``map``; uses worker processes when ``threads > 1``."""
    threads = resolve_threads(threads)
    items = list(items)
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * threads))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
