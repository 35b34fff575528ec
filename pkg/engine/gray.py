# engine/gray.py
"""
Обход куба {−1,1}ⁿ отражённым кодом Грея с пошаговым пересчётом.

Коэффициенты приводятся к общему знаменателю D, и весь обход идёт
в целых числах; значения восстанавливаются делением на D в конце.
На шаге i меняется знак переменной с номером младшего единичного бита i.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from core.types import LinearConstraint, QuadPoly

logger = logging.getLogger(__name__)


def to_gray_code(i: int) -> int:
    return i ^ (i >> 1)


def flip_sequence(bits: int) -> Iterator[int]:
    """Номера переменных, меняющих знак на шагах 1 … 2^bits − 1"""
    for i in range(1, 1 << bits):
        yield (i & -i).bit_length() - 1


def common_denominator(values: Sequence[Fraction]) -> int:
    return lcm(1, *(Fraction(v).denominator for v in values))


@dataclass(frozen=True)
class ScaledQuad:
    """D·Q с целыми коэффициентами; offdiag[i][j] = D·A[i,j] при i ≠ j, 0 на диагонали"""
    n: int
    D: int
    offdiag: Tuple[Tuple[int, ...], ...]
    diag_sum: int
    b: Tuple[int, ...]
    c: int

    @classmethod
    def from_quad(cls, q: QuadPoly) -> "ScaledQuad":
        D = common_denominator(list(q.A.entries) + list(q.b) + [q.c])
        offdiag = tuple(
            tuple(0 if i == j else int(q.A[i, j] * D) for j in range(q.n))
            for i in range(q.n)
        )
        diag_sum = int(sum((q.A[i, i] for i in range(q.n)), Fraction(0)) * D)
        return cls(q.n, D, offdiag, diag_sum, tuple(int(v * D) for v in q.b), int(q.c * D))

    def value(self, signs: Sequence[int]) -> int:
        total = self.c + self.diag_sum
        for i in range(self.n):
            row = self.offdiag[i]
            total += signs[i] * (self.b[i] + sum(row[j] * signs[j] for j in range(self.n) if row[j]))
        return total


@dataclass(frozen=True)
class ScaledColumns:
    """Целочисленные столбцы матрицы M (k x n) и правая часть w, строки домножены на свои знаменатели"""
    k: int
    columns: Tuple[Tuple[int, ...], ...]
    target: Tuple[int, ...]

    @classmethod
    def from_constraint(cls, constraint: LinearConstraint) -> "ScaledColumns":
        M, w = constraint.M, constraint.w
        scales = [common_denominator(list(M.row(i)) + [w[i]]) for i in range(M.rows)]
        columns = tuple(
            tuple(int(M[i, j] * scales[i]) for i in range(M.rows))
            for j in range(M.cols)
        )
        return cls(M.rows, columns, tuple(int(w[i] * scales[i]) for i in range(M.rows)))

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[Fraction]], r: int) -> Tuple["ScaledColumns", int]:
        """
        Столбцы a_1 … a_n длины r с одним общим масштабом.

        :return: (столбцы, масштаб D); настоящая сумма равна y / D
        """
        scale = common_denominator([x for v in vectors for x in v])
        columns = tuple(tuple(int(Fraction(v[i]) * scale) for i in range(r)) for v in vectors)
        return cls(r, columns, tuple(0 for _ in range(r))), scale

    def start(self, signs: Sequence[int]) -> List[int]:
        y = [0] * self.k
        for j, s in enumerate(signs):
            col = self.columns[j]
            for i in range(self.k):
                y[i] += s * col[i]
        return y


def prefix_signs(n: int, free_bits: int, prefix: int) -> List[int]:
    """Начальная точка блока: свободные младшие биты равны −1, старшие заданы prefix"""
    signs = [-1] * n
    for t in range(n - free_bits):
        if (prefix >> t) & 1:
            signs[free_bits + t] = 1
    return signs


def quad_counts(sq: ScaledQuad, cols: Optional[ScaledColumns], free_bits: int,
                prefix: int = 0) -> Counter:
    """
    Гистограмма D·Q(ξ) на блоке куба с фиксированными старшими битами.

    :param cols: ограничение Mξ = w или None
    :return: Counter {D·значение: число точек}
    """
    n = sq.n
    signs = prefix_signs(n, free_bits, prefix)
    field = [sum(sq.offdiag[i][j] * signs[j] for j in range(n)) for i in range(n)]
    value = sq.value(signs)
    counts = Counter()
    if cols is not None and cols.k > 0:
        y = cols.start(signs)
        target = list(cols.target)
        if y == target:
            counts[value] += 1
        for j in flip_sequence(free_bits):
            s = signs[j]
            value -= 2 * s * (2 * field[j] + sq.b[j])
            step = -2 * s
            col = sq.offdiag[j]
            field = [f + step * a for f, a in zip(field, col)]
            y = [v + step * m for v, m in zip(y, cols.columns[j])]
            signs[j] = -s
            if y == target:
                counts[value] += 1
    else:
        counts[value] += 1
        for j in flip_sequence(free_bits):
            s = signs[j]
            value -= 2 * s * (2 * field[j] + sq.b[j])
            step = -2 * s
            col = sq.offdiag[j]
            field = [f + step * a for f, a in zip(field, col)]
            signs[j] = -s
            counts[value] += 1
    return counts


def vector_counts(cols: ScaledColumns, n: int, accept: Callable[[List[int]], bool],
                  free_bits: int, prefix: int = 0) -> int:
    """
    Число точек блока, для которых accept(Σ ξ_j a_j) истинно.

    Сумма векторов хранится в масштабе ScaledColumns.
    """
    signs = prefix_signs(n, free_bits, prefix)
    y = cols.start(signs)
    count = 1 if accept(y) else 0
    for j in flip_sequence(free_bits):
        step = -2 * signs[j]
        y = [v + step * m for v, m in zip(y, cols.columns[j])]
        signs[j] = -signs[j]
        if accept(y):
            count += 1
    return count
