import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    """Worker cap from CHRONOLENS_THREADS (default: CPU count)."""
    raw = os.environ.get("CHRONOLENS_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def parallel_map(func, items):
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
