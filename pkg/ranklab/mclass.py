# ranklab/mclass.py
"""
Жадный поиск сертификата класса троек (T, U, A) с робастным рангом r.

Нужны s непересекающихся пар (I_t ⊆ [m], J_t ⊆ [n]) размера k + r, таких что
(a) rank T[·×I_t] = k, (b) rank U[·×J_t] = k,
(c) любое (T[·×I_t], U[·×J_t])-возмущение A[J_t×I_t] имеет ранг ≥ r.
Поиск лексикографический и жадный: найденный сертификат верен, но
неудача не доказывает, что тройка вне класса.
"""
import logging
from itertools import combinations
from typing import Iterator, List, Optional, Set, Tuple

from core.errors import DimensionMismatchError, ParameterError
from core.types import RatMatrix
from ranklab.certificates import MCert, Verdict
from ranklab.linalg import rank
from ranklab.perturbation import min_perturbed_rank

logger = logging.getLogger(__name__)

DEFAULT_M_BUDGET = 200_000


def check_triple(T: RatMatrix, U: RatMatrix, A: RatMatrix, r: int) -> Tuple[int, int, int]:
    """
    Проверяет размеры тройки.

    :return: (k, m, n)
    """
    k, m = T.shape
    if U.rows != k or A.shape != (U.cols, m):
        raise DimensionMismatchError(
            f"Ожидались T k x m, U k x n, A n x m; получено T {T.shape}, U {U.shape}, A {A.shape}"
        )
    n = U.cols
    if r < 0:
        raise ParameterError(f"r должно быть неотрицательным, получено {r}")
    if m < k + r or n < k + r:
        raise ParameterError(f"Множества размера k + r = {k + r} не помещаются в m = {m}, n = {n}")
    return k, m, n


def _candidates(pool: List[int], size: int, matrix: RatMatrix) -> Iterator[Tuple[int, ...]]:
    """Подмножества пула в лексикографическом порядке с полным рангом строк matrix"""
    k = matrix.rows
    for subset in combinations(pool, size):
        if k == 0 or rank(matrix.columns(subset)) == k:
            yield subset


def m_membership(T: RatMatrix, U: RatMatrix, A: RatMatrix, r: int, s: int,
                 budget: int = DEFAULT_M_BUDGET) -> MCert:
    """
    Ищет s непересекающихся пар (I_t, J_t).

    :param T: k x m
    :param U: k x n
    :param A: n x m
    :param budget: предел числа проверок условия (c)
    :return: MCert с вердиктом member или not-found
    """
    k, m, n = check_triple(T, U, A, r)
    size = k + r
    used_I: Set[int] = set()
    used_J: Set[int] = set()
    pairs = []
    examined = 0
    for t in range(s):
        found: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
        pool_I = [i for i in range(m) if i not in used_I]
        pool_J = [j for j in range(n) if j not in used_J]
        J_options = list(_candidates(pool_J, size, U))
        for I in _candidates(pool_I, size, T):
            for J in J_options:
                examined += 1
                if examined > budget:
                    logger.warning(f"Бюджет поиска {budget} исчерпан на паре {t + 1} из {s}")
                    return MCert(Verdict.NOT_FOUND, r, s, tuple(pairs), examined)
                if min_perturbed_rank(A.submatrix(J, I), T.columns(I), U.columns(J)) >= r:
                    found = (I, J)
                    break
            if found:
                break
        if found is None:
            logger.info(f"Жадный поиск нашёл {len(pairs)} пар из {s}")
            return MCert(Verdict.NOT_FOUND, r, s, tuple(pairs), examined)
        pairs.append(found)
        used_I.update(found[0])
        used_J.update(found[1])
        logger.debug(f"Пара {t + 1}: I = {found[0]}, J = {found[1]}")
    logger.info(f"Найдено {s} пар размера {size}: тройка принадлежит классу с r = {r}")
    return MCert(Verdict.MEMBER, r, s, tuple(pairs), examined)


def greedy_rank_r_pairs(A: RatMatrix, r: int, count: int, budget: int = DEFAULT_M_BUDGET) -> MCert:
    """
    Непересекающиеся блоки A[J_t × I_t] размера r x r полного ранга.

    Случай k = 0: T и U пустые, условие (c) сводится к rank A[J_t × I_t] = r.
    """
    rows, cols = A.shape
    return m_membership(RatMatrix.empty(cols), RatMatrix.empty(rows), A, r, count, budget)
