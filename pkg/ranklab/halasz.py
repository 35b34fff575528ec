# ranklab/halasz.py
"""
Класс матриц k x n, сохраняющих ранг k после удаления любых ≤ s столбцов.

M принадлежит классу ⟺ каждый ненулевой вектор пространства строк имеет
вес Хэмминга > s. Минимальный вес равен n − (наибольшее число столбцов в
одной гиперплоскости ℚ^k), а такую гиперплоскость можно считать натянутой
на k − 1 столбцов. Перебор гиперплоскостей ограничен бюджетом.
"""
import logging
from itertools import combinations
from math import comb
from typing import List, Optional, Tuple

from core.types import RatMatrix
from ranklab.certificates import HalaszCert, Verdict
from ranklab.linalg import rank, rank_and_kernel

logger = logging.getLogger(__name__)

DEFAULT_EXACT_BUDGET = 200_000


def greedy_disjoint_bases(M: RatMatrix) -> List[Tuple[int, ...]]:
    """
    Жадная упаковка непересекающихся невырожденных k x k подматриц.

    На каждом проходе столбцы просматриваются по возрастанию номера и
    добавляются, если увеличивают ранг; найденный базис исключается.
    t найденных базисов при t > s означает принадлежность классу с параметром s.
    """
    k, n = M.rows, M.cols
    if k == 0 or k > n:
        return []
    used = set()
    bases = []
    while True:
        chosen = []
        for j in range(n):
            if j in used:
                continue
            if rank(M.columns(chosen + [j])) == len(chosen) + 1:
                chosen.append(j)
                if len(chosen) == k:
                    break
        if len(chosen) < k:
            break
        bases.append(tuple(chosen))
        used.update(chosen)
    logger.debug(f"Жадная упаковка: {len(bases)} базисов для матрицы {k}x{n}")
    return bases


def hyperplane_normal(M: RatMatrix, spanning: Tuple[int, ...]) -> Optional[Tuple]:
    """Нормаль y гиперплоскости, натянутой на столбцы spanning, или None при их зависимости"""
    k = M.rows
    if not spanning:
        return None
    r, kernel = rank_and_kernel(M.columns(spanning).transpose())
    if r != k - 1:
        return None
    return kernel[0]


def max_columns_in_hyperplane(M: RatMatrix, budget: int) -> Optional[Tuple[int, Tuple[int, ...], int]]:
    """
    Наибольшее число столбцов M в одной гиперплоскости.

    :return: (число, столбцы вне гиперплоскости, просмотрено кандидатов) или None,
             если число кандидатов C(n, k−1) превышает бюджет
    """
    k, n = M.rows, M.cols
    if k == 1:
        zero = tuple(j for j in range(n) if M[0, j] == 0)
        outside = tuple(j for j in range(n) if M[0, j] != 0)
        return len(zero), outside, 1
    if comb(n, k - 1) > budget:
        return None
    columns = [M.col(j) for j in range(n)]
    best_count, best_outside = -1, ()
    examined = 0
    for spanning in combinations(range(n), k - 1):
        examined += 1
        y = hyperplane_normal(M, spanning)
        if y is None:
            continue
        outside = tuple(j for j in range(n) if sum(a * b for a, b in zip(y, columns[j])) != 0)
        if n - len(outside) > best_count:
            best_count = n - len(outside)
            best_outside = outside
    return best_count, best_outside, examined


def halasz_membership(M: RatMatrix, s: int, budget: int = DEFAULT_EXACT_BUDGET) -> HalaszCert:
    """
    Точное решение о принадлежности M классу с параметром s.

    Порядок: пустая матрица; ранг < k; жадные базисы (t > s ⇒ member);
    перебор гиперплоскостей в пределах бюджета; иначе inconclusive.
    """
    k, n = M.rows, M.cols
    if k == 0:
        return HalaszCert(Verdict.MEMBER, s)
    if rank(M) < k:
        logger.info(f"Ранг матрицы {k}x{n} меньше {k}: не принадлежит классу")
        return HalaszCert(Verdict.NON_MEMBER, s, deletion=())
    bases = greedy_disjoint_bases(M)
    if len(bases) > s:
        logger.info(f"Найдено {len(bases)} непересекающихся базисов > s = {s}: принадлежит классу")
        return HalaszCert(Verdict.MEMBER, s, bases=tuple(bases))
    found = max_columns_in_hyperplane(M, budget)
    if found is None:
        logger.warning(
            f"Перебор C({n},{k - 1}) = {comb(n, k - 1)} гиперплоскостей превышает бюджет {budget}: "
            f"вердикт inconclusive"
        )
        return HalaszCert(Verdict.INCONCLUSIVE, s, bases=tuple(bases))
    count, outside, examined = found
    weight = n - count
    if weight > s:
        logger.info(f"Минимальный вес пространства строк {weight} > s = {s}: принадлежит классу")
        return HalaszCert(Verdict.MEMBER, s, min_weight=weight, examined=examined)
    logger.info(f"Минимальный вес пространства строк {weight} ≤ s = {s}: не принадлежит классу")
    return HalaszCert(Verdict.NON_MEMBER, s, min_weight=weight, deletion=outside, examined=examined)
