# engine/sampling.py
"""
Оценка Pr[Q = z] методом Монте-Карло.

Генератор Philox (счётчиковый) с ключом (seed, номер потока): поток i
выдаёт блок i из STREAM_BLOCK выборок, поэтому результат побитово
воспроизводим при любом числе процессов.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, sqrt
from typing import Optional

import numpy as np
from joblib import Parallel, delayed
from numpy.random import Generator, Philox
from scipy import stats

from core.types import QuadPoly
from engine.general import ProductDist
from engine.gray import common_denominator

logger = logging.getLogger(__name__)

STREAM_BLOCK = 8192
WILSON_Z = float(stats.norm.ppf(0.975))
_INT64_SAFE = 1 << 62
_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class MonteCarloResult:
    hits: int
    samples: int
    estimate: Fraction
    center: Fraction
    halfwidth: Fraction

    def covers(self, p) -> bool:
        """Лежит ли p в интервале Уилсона center ± halfwidth"""
        return abs(Fraction(p) - self.center) <= self.halfwidth


def wilson_interval(hits: int, samples: int, z: float = WILSON_Z):
    """
    Центр и полуширина интервала Уилсона.

    :return: (center, halfwidth) как Fraction от двоичных float
    """
    p = hits / samples
    z2 = z * z
    denom = 1 + z2 / samples
    center = (p + z2 / (2 * samples)) / denom
    half = z / denom * sqrt(p * (1 - p) / samples + z2 / (4 * samples * samples))
    return Fraction(center), Fraction(half)


def stream_generator(seed: int, stream: int) -> Generator:
    key = np.array([seed & _UINT64_MASK, stream & _UINT64_MASK], dtype=np.uint64)
    return Generator(Philox(key=key))


class _Sampler:
    """Целочисленная форма задачи: D·V²·Q(X/V) сравнивается с D·V²·z"""

    def __init__(self, q: QuadPoly, dist: Optional[ProductDist], z):
        n = q.n
        self.n = n
        D = common_denominator(list(q.A.entries) + list(q.b) + [q.c, Fraction(z)])
        if dist is None or dist.is_rademacher():
            self.tables = None
            V = 1
        else:
            V = common_denominator([v for d in dist.dists for v in d.support])
            self.tables = []
            for d in dist.dists:
                L = lcm(*(p.denominator for _, p in d.atoms))
                if L >= _INT64_SAFE:
                    raise ValueError(f"Знаменатель вероятностей {L} слишком велик для выборки")
                thresholds = np.cumsum([int(p * L) for _, p in d.atoms])
                values = [int(v * V) for v in d.support]
                self.tables.append((L, thresholds, values))
        self.V = V
        max_x = max([abs(v) for _, _, values in (self.tables or []) for v in values] + [1])
        self.value_dtype = np.int64 if max_x < _INT64_SAFE else object
        A = [[int(q.A[i, j] * D) for j in range(n)] for i in range(n)]
        b = [int(q.b[i] * D) * V for i in range(n)]
        self.c = int(q.c * D) * V * V
        self.target = int(Fraction(z) * D) * V * V
        bound = (max([abs(x) for row in A for x in row] + [0]) * max_x * max_x * n * n
                 + max([abs(x) for x in b] + [0]) * max_x * n)
        self.dtype = np.int64 if bound + abs(self.c) + abs(self.target) < _INT64_SAFE else object
        self.A = np.array(A, dtype=self.dtype).reshape(n, n)
        self.b = np.array(b, dtype=self.dtype)

    def draw(self, rng: Generator, size: int) -> np.ndarray:
        if self.tables is None:
            return rng.integers(0, 2, size=(size, self.n), dtype=np.int64) * 2 - 1
        columns = []
        for L, thresholds, values in self.tables:
            u = rng.integers(0, L, size=size, dtype=np.int64)
            idx = np.searchsorted(thresholds, u, side="right")
            columns.append(np.asarray(values, dtype=self.value_dtype)[idx])
        return np.stack(columns, axis=1)

    def hits(self, seed: int, stream: int, size: int) -> int:
        rng = stream_generator(seed, stream)
        X = self.draw(rng, size).astype(self.dtype)
        values = ((X @ self.A) * X).sum(axis=1) + X @ self.b + self.c
        return int(np.count_nonzero(values == self.target))


def _block_hits(sampler: _Sampler, seed: int, streams, samples: int) -> int:
    total = 0
    for stream in streams:
        size = min(STREAM_BLOCK, samples - stream * STREAM_BLOCK)
        total += sampler.hits(seed, stream, size)
    return total


def monte_carlo(q: QuadPoly, dist: Optional[ProductDist], z, samples: int, seed: int,
                workers: int = 1) -> MonteCarloResult:
    """
    Частотная оценка Pr[Q(ζ) = z] с 95% интервалом Уилсона.

    :param dist: ProductDist или None для знаков Радемахера
    :param samples: число выборок, не меньше 1
    :param seed: 64-битный ключ генератора
    """
    if samples < 1:
        raise ValueError(f"samples должно быть не меньше 1, получено {samples}")
    if dist is not None and dist.n != q.n:
        raise ValueError(f"Распределение на {dist.n} переменных, многочлен от {q.n}")
    sampler = _Sampler(q, dist, z)
    n_streams = (samples + STREAM_BLOCK - 1) // STREAM_BLOCK
    if workers > 1 and n_streams > 1:
        groups = [range(i, n_streams, workers) for i in range(workers)]
        hits = sum(Parallel(n_jobs=workers)(
            delayed(_block_hits)(sampler, seed, g, samples) for g in groups
        ))
    else:
        hits = _block_hits(sampler, seed, range(n_streams), samples)
    center, half = wilson_interval(hits, samples)
    logger.debug(f"Монте-Карло: {hits} попаданий из {samples}, seed = {seed}")
    return MonteCarloResult(hits, samples, Fraction(hits, samples), center, half)
