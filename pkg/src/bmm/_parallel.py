"""Order-preserving map over independent tasks, optionally across processes.

Every task carries its own seed, so results never depend on ``workers``.
"""
from concurrent.futures import ProcessPoolExecutor

from ._validate import check_count


def pmap(func, tasks, workers=1):
    """``[func(t) for t in tasks]``, run on ``workers`` processes when > 1.

    ``func`` must be picklable (a module-level function).
    """
    workers = check_count(workers, "workers")
    tasks = list(tasks)
    if workers == 1 or len(tasks) < 2:
        return [func(t) for t in tasks]
    chunk = max(1, len(tasks) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, tasks, chunksize=chunk))


def split_range(total, parts):
    """Split ``range(total)`` into at most ``parts`` contiguous (start, stop) pairs."""
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out, start = [], 0
    for k in range(parts):
        stop = start + step + (1 if k < extra else 0)
        out.append((start, stop))
        start = stop
    return out
