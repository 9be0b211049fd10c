import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    """Worker cap from MODSTRIP_THREADS (default 1, i.e. serial)."""
    raw = os.environ.get("MODSTRIP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items):
    """Order-preserving map; threads only when MODSTRIP_THREADS > 1.  numpy
    FFTs release the GIL, so per-vector checks overlap usefully."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
