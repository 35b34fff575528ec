# engine/parallel.py
"""
Разбиение перебора по старшим битам и параллельный запуск через joblib.

Блок с префиксом p фиксирует старшие биты, младшие обходятся кодом Грея.
Счётчики складываются в порядке префиксов, поэтому результат не зависит
от числа процессов.
"""
import logging
from collections import Counter
from typing import Callable, List, Optional

import psutil
from joblib import Parallel, delayed

from engine.gray import ScaledColumns, ScaledQuad, quad_counts, vector_counts

logger = logging.getLogger(__name__)


def resolve_workers(workers: int) -> int:
    """0 означает число физических ядер"""
    if workers and workers > 0:
        return workers
    return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1


def _prefix_bits(n: int, workers: int, partition_bits: int) -> int:
    if partition_bits <= 0:
        partition_bits = 0 if workers <= 1 else (workers - 1).bit_length() + 2
    return min(partition_bits, n)


def parallel_quad_counts(sq: ScaledQuad, cols: Optional[ScaledColumns], workers: int = 1,
                         partition_bits: int = 0) -> Counter:
    workers = resolve_workers(workers)
    p = _prefix_bits(sq.n, workers, partition_bits)
    free = sq.n - p
    if p == 0:
        return quad_counts(sq, cols, free, 0)
    logger.debug(f"Перебор разбит на {1 << p} блоков по 2^{free} точек, процессов {workers}")
    parts = Parallel(n_jobs=workers)(
        delayed(quad_counts)(sq, cols, free, prefix) for prefix in range(1 << p)
    )
    total = Counter()
    for part in parts:
        total.update(part)
    return total


def parallel_vector_counts(cols: ScaledColumns, n: int, accept: Callable[[List[int]], bool],
                           workers: int = 1, partition_bits: int = 0) -> int:
    workers = resolve_workers(workers)
    p = _prefix_bits(n, workers, partition_bits)
    free = n - p
    if p == 0:
        return vector_counts(cols, n, accept, free, 0)
    parts = Parallel(n_jobs=workers)(
        delayed(vector_counts)(cols, n, accept, free, prefix) for prefix in range(1 << p)
    )
    return sum(parts)
