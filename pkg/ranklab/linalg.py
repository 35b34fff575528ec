# ranklab/linalg.py
"""
Точная линейная алгебра над ℚ: ранг, ядро, обращение, решение систем.

Ранг считается бесдробным исключением Барейса по целочисленным строкам,
ядро и обратная матрица через приведённый ступенчатый вид на Fraction.
"""
import logging
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from core.errors import DimensionMismatchError
from core.types import RatMatrix, Vector

logger = logging.getLogger(__name__)


def _integer_rows(M: RatMatrix) -> List[List[int]]:
    """Домножает каждую строку на НОК знаменателей; ранг не меняется"""
    rows = []
    for i in range(M.rows):
        row = M.row(i)
        scale = lcm(*(v.denominator for v in row)) if row else 1
        rows.append([int(v * scale) for v in row])
    return rows


def rank(M: RatMatrix) -> int:
    """Точный ранг (исключение Барейса без дробей)"""
    if M.rows == 0 or M.cols == 0:
        return 0
    a = _integer_rows(M)
    n_rows, n_cols = M.rows, M.cols
    prev = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        for i in range(r + 1, n_rows):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, n_cols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
    return r


def rref(M: RatMatrix) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Приведённый ступенчатый вид.

    :return: (ненулевые строки RREF, номера ведущих столбцов)
    """
    m = M.to_rows()
    n_rows, n_cols = M.rows, M.cols
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        m[r] = [v / p for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank_and_kernel(M: RatMatrix) -> Tuple[int, List[Vector]]:
    """
    Ранг и базис правого ядра {x : Mx = 0}.

    Векторы ядра нормированы: в свободной координате стоит 1.
    """
    rows, pivots = rref(M)
    pivot_set = set(pivots)
    kernel = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * M.cols
        v[free] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[free]
        kernel.append(tuple(v))
    return len(pivots), kernel


def kernel_matrix(M: RatMatrix) -> RatMatrix:
    """Матрица cols x dim ker M, столбцы которой образуют базис ядра"""
    _, kernel = rank_and_kernel(M)
    return RatMatrix.from_rows(kernel, cols=M.cols).transpose()


def solve(M: RatMatrix, w: Sequence) -> Optional[Vector]:
    """Частное решение Mx = w или None, если система несовместна"""
    if len(w) != M.rows:
        raise DimensionMismatchError(f"Система {M.shape} и правая часть длины {len(w)}")
    augmented = M.hstack(RatMatrix.from_rows([[v] for v in w], cols=1))
    rows, pivots = rref(augmented)
    if pivots and pivots[-1] == M.cols:
        return None
    x = [Fraction(0)] * M.cols
    for row, p in zip(rows, pivots):
        x[p] = row[M.cols]
    return tuple(x)


def inverse(P: RatMatrix) -> RatMatrix:
    if P.rows != P.cols:
        raise DimensionMismatchError(f"Обращение неквадратной матрицы {P.shape}")
    n = P.rows
    if n == 0:
        return RatMatrix(0, 0, ())
    rows, pivots = rref(P.hstack(RatMatrix.identity(n)))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("Матрица вырождена")
    return RatMatrix.from_rows([row[n:] for row in rows], cols=n)
