# experiments/decoupling.py
"""
Проверка неравенства расцепления Pr[E]² ≤ Pr[E ∧ E'].

Переменные делятся на X (индексы I) и Y (остальные, J). E = {Q(X, Y) = z},
E' = {Q(X', Y) = z}, где X' - независимая копия X. Если c_y - число x с
Q(x, y) = z, то Pr[E] = Σ c_y / 2ⁿ и Pr[E ∧ E'] = Σ c_y² / 2^(2|I|+|J|).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import CapExceededError, DimensionMismatchError
from core.types import QuadPoly
from engine.gray import common_denominator
from engine.sampling import STREAM_BLOCK, stream_generator, wilson_interval

logger = logging.getLogger(__name__)

DEFAULT_DECOUPLING_CAP = 24
# строк в одном блоке точного перебора
CHUNK_ROWS = 1 << 16
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class DecouplingReport:
    n: int
    I: Tuple[int, ...]
    J: Tuple[int, ...]
    z: Fraction
    mode: str
    lhs: Fraction
    rhs: Fraction
    passed: bool
    samples: Optional[int] = None
    lhs_interval: Optional[Tuple[Fraction, Fraction]] = None
    rhs_interval: Optional[Tuple[Fraction, Fraction]] = None

    @property
    def lhs_squared(self) -> Fraction:
        return self.lhs * self.lhs

    def to_json(self) -> Dict:
        data = {
            "n": self.n,
            "I": list(self.I),
            "J": list(self.J),
            "z": str(self.z),
            "mode": self.mode,
            "lhs": str(self.lhs),
            "lhs_squared": str(self.lhs_squared),
            "rhs": str(self.rhs),
            "pass": self.passed,
        }
        if self.samples is not None:
            data["samples"] = self.samples
            data["lhs_interval"] = [float(v) for v in self.lhs_interval]
            data["rhs_interval"] = [float(v) for v in self.rhs_interval]
        return data


class _IntegerForm:
    """D·(Q − z) с целыми коэффициентами в порядке переменных I, затем J"""

    def __init__(self, q: QuadPoly, order: Sequence[int], z: Fraction):
        n = q.n
        D = common_denominator(list(q.A.entries) + list(q.b) + [q.c, z])
        A = [[int(q.A[i, j] * D) for j in order] for i in order]
        b = [int(q.b[i] * D) for i in order]
        self.c = int((q.c - z) * D)
        bound = sum(abs(x) for row in A for x in row) + sum(abs(x) for x in b) + abs(self.c)
        self.dtype = np.int64 if bound < _INT64_SAFE else object
        self.A = np.array(A, dtype=self.dtype).reshape(n, n)
        self.b = np.array(b, dtype=self.dtype)

    def zeros(self, X: np.ndarray) -> np.ndarray:
        X = X.astype(self.dtype)
        values = ((X @ self.A) * X).sum(axis=1) + X @ self.b + self.c
        return np.asarray(values == 0, dtype=bool)


def _split(q: QuadPoly, I: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    I = tuple(sorted(set(I)))
    if any(not 0 <= i < q.n for i in I):
        raise DimensionMismatchError(f"Индексы {list(I)} вне диапазона [0, {q.n})")
    J = tuple(i for i in range(q.n) if i not in I)
    return I, J


def _signs(indices: np.ndarray, n: int) -> np.ndarray:
    return ((indices[:, None] >> np.arange(n)) & 1) * 2 - 1


def _exact(form: _IntegerForm, n: int, size_i: int) -> Tuple[Fraction, Fraction]:
    size_j = n - size_i
    c = np.zeros(1 << size_j, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, CHUNK_ROWS):
        indices = np.arange(start, min(start + CHUNK_ROWS, total), dtype=np.int64)
        hit = form.zeros(_signs(indices, n))
        c += np.bincount(indices[hit] >> size_i, minlength=1 << size_j)
    hits = int(c.sum())
    both = sum(int(v) * int(v) for v in c)
    return Fraction(hits, total), Fraction(both, 1 << (2 * size_i + size_j))


def _sampled(form: _IntegerForm, n: int, size_i: int, samples: int, seed: int) -> Tuple[int, int]:
    hits = both = 0
    for stream in range((samples + STREAM_BLOCK - 1) // STREAM_BLOCK):
        size = min(STREAM_BLOCK, samples - stream * STREAM_BLOCK)
        rng = stream_generator(seed, stream)
        X = rng.integers(0, 2, size=(size, n), dtype=np.int64) * 2 - 1
        Xp = X.copy()
        Xp[:, :size_i] = rng.integers(0, 2, size=(size, size_i), dtype=np.int64) * 2 - 1
        first = form.zeros(X)
        second = form.zeros(Xp)
        hits += int(np.count_nonzero(first))
        both += int(np.count_nonzero(first & second))
    return hits, both


def verify_decoupling(q: QuadPoly, I: Sequence[int], trials: Union[str, int] = "exact", z=0,
                      cap: int = DEFAULT_DECOUPLING_CAP, seed: int = 0) -> DecouplingReport:
    """
    :param I: индексы переменных, заменяемых независимой копией
    :param trials: "exact" для полного перебора или число выборок
    :param cap: ограничение на 2|I| + |J| в точном режиме
    """
    z = Fraction(z)
    I, J = _split(q, I)
    form = _IntegerForm(q, I + J, z)

    if trials == "exact":
        extended = 2 * len(I) + len(J)
        if extended > cap:
            raise CapExceededError(
                f"Расширенное пространство 2^{extended} больше лимита 2^{cap}; используйте выборку",
                size=extended, cap=cap,
            )
        lhs, rhs = _exact(form, q.n, len(I))
        passed = lhs * lhs <= rhs
        logger.info(f"Расцепление при |I| = {len(I)}: Pr[E] = {lhs}, Pr[E ∧ E'] = {rhs}, выполнено: {passed}")
        return DecouplingReport(q.n, I, J, z, "exact", lhs, rhs, passed)

    samples = int(trials)
    if samples < 1:
        raise ValueError(f"Число выборок должно быть не меньше 1, получено {trials}")
    hits, both = _sampled(form, q.n, len(I), samples, seed)
    lhs, rhs = Fraction(hits, samples), Fraction(both, samples)
    lhs_center, lhs_half = wilson_interval(hits, samples)
    rhs_center, rhs_half = wilson_interval(both, samples)
    lhs_interval = (max(lhs_center - lhs_half, Fraction(0)), lhs_center + lhs_half)
    rhs_interval = (max(rhs_center - rhs_half, Fraction(0)), rhs_center + rhs_half)
    # по выборке неравенство считается выполненным, если оно не опровергается интервалами
    passed = lhs_interval[0] ** 2 <= rhs_interval[1]
    logger.info(f"Расцепление по {samples} выборкам: {hits} попаданий E, {both} попаданий E ∧ E'")
    return DecouplingReport(q.n, I, J, z, "sampled", lhs, rhs, passed, samples, lhs_interval, rhs_interval)
