# ranklab/splitting.py
"""
Конструктивное разбиение [n] = I ∪ J для пары (M, A).

По M (k x n) из рангового класса с параметром s и симметричной A жадно
строится ℓ = ⌊s/(4k+8)⌋ непересекающихся пар (I_t, J_t) размера k + 2:
невырожденные k x k блоки M, обнуление строк и столбцов возмущением,
поиск ненулевого внедиагонального элемента, подстройка диагонали и
расширение до невырожденного блока 2 x 2. Каждая пара проверяется по
рангу блочной матрицы порядка 2k + 2.
"""
import logging
from fractions import Fraction
from math import floor
from typing import List, Optional, Sequence, Tuple

from core.errors import DimensionMismatchError, HypothesisFailure, ParameterError
from core.types import RatMatrix
from ranklab.certificates import MCert, SplitResult, Verdict
from ranklab.halasz import DEFAULT_EXACT_BUDGET, halasz_membership
from ranklab.linalg import inverse, rank
from ranklab.perturbation import block_matrix

logger = logging.getLogger(__name__)


def pair_count(k: int, s) -> int:
    """ℓ = ⌊s/(4k+8)⌋"""
    return floor(Fraction(s) / (4 * k + 8))


def _greedy_basis(M: RatMatrix, pool: Sequence[int]) -> Optional[List[int]]:
    """Первые по номеру k столбцов из pool, образующие невырожденный блок"""
    k = M.rows
    chosen: List[int] = []
    for j in pool:
        if len(chosen) == k:
            break
        if rank(M.columns(chosen + [j])) == len(chosen) + 1:
            chosen.append(j)
    return chosen if len(chosen) == k else None


def zeroing_perturbation(A: RatMatrix, M: RatMatrix, I_base: Sequence[int], J_base: Sequence[int]) -> RatMatrix:
    """
    (M, M)-возмущение A' = A + LM + MᵀR с нулевыми столбцами I_base и строками J_base.

    L = −A[·, I_base] P⁻¹ при P = M[·, I_base]; затем R = −(Qᵀ)⁻¹ B[J_base, ·]
    при Q = M[·, J_base], B = A + LM. Добавление MᵀR не трогает столбцы I_base.
    """
    if M.rows == 0:
        return A
    n = A.rows
    P = M.columns(I_base)
    L = (A.columns(I_base) @ inverse(P)).scale(-1)
    B = A + L @ M
    Q = M.columns(J_base)
    R = (inverse(Q.transpose()) @ B.submatrix(J_base, range(n))).scale(-1)
    return B + M.transpose() @ R


def _find_offdiag(Ap: RatMatrix, region: Sequence[int]) -> Optional[Tuple[int, int]]:
    """Первый по (j, i) ненулевой a'_{j,i} с i ≠ j внутри region"""
    for j in region:
        for i in region:
            if i != j and Ap[j, i] != 0:
                return j, i
    return None


def augment_pair(A: RatMatrix, M: RatMatrix, pool: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    Одна пара (I_1, J_1) размера k + 2 внутри pool.

    :raises HypothesisFailure: если нужный элемент или индекс не найден
    """
    k = M.rows
    pool = sorted(pool)
    I_base = _greedy_basis(M, pool)
    J_base = _greedy_basis(M, [h for h in pool if h not in set(I_base or [])]) if I_base is not None else None
    if I_base is None or J_base is None:
        raise HypothesisFailure(
            f"Не найдены два непересекающихся невырожденных блока M внутри {len(pool)} индексов",
            violating_set=pool,
        )
    Ap = zeroing_perturbation(A, M, I_base, J_base)
    used = set(I_base) | set(J_base)
    region = [h for h in pool if h not in used]
    found = _find_offdiag(Ap, region)
    if found is None:
        raise HypothesisFailure(
            f"Все внедиагональные элементы возмущённой матрицы на {len(region)} индексах равны нулю",
            violating_set=region,
        )
    j, i = found
    a_ji = Ap[j, i]
    rest = [h for h in region if h not in (i, j)]

    # A*: диагональ a*_{h,h} делает каждый блок A*[{j,h} x {i,h}] вырожденным
    rows = Ap.to_rows()
    for h in rest:
        rows[h][h] = Ap[j, h] * Ap[h, i] / a_ji
    A_star = RatMatrix.from_rows(rows, cols=A.cols)

    cols_without_j = [h for h in region if h != j]
    j_prime = next(
        (h for h in rest if rank(A_star.submatrix([j, h], cols_without_j)) == 2), None
    )
    if j_prime is None:
        raise HypothesisFailure(
            f"Строка {j} не дополняется до ранга 2 на подматрице без {i}, {j}",
            violating_set=rest,
        )
    i_prime = next(
        (h for h in rest if rank(A_star.submatrix([j, j_prime], [i, h])) == 2), None
    )
    if i_prime is None or i_prime == j_prime:
        raise HypothesisFailure(
            f"Для строк {j}, {j_prime} не найден второй столбец вне диагонали",
            violating_set=rest,
        )
    I_pair = tuple(sorted(I_base + [i, i_prime]))
    J_pair = tuple(sorted(J_base + [j, j_prime]))

    block = block_matrix(A.submatrix(J_pair, I_pair), M.columns(I_pair), M.columns(J_pair))
    if rank(block) != 2 * k + 2:
        raise HypothesisFailure(
            f"Блочная матрица пары I = {I_pair}, J = {J_pair} имеет ранг {rank(block)} < {2 * k + 2}",
            violating_set=I_pair + J_pair,
        )
    logger.debug(f"Пара построена: I = {I_pair}, J = {J_pair}, элемент a'[{j},{i}] = {a_ji}")
    return I_pair, J_pair


def matrix_split(M: RatMatrix, A: RatMatrix, s, budget: int = DEFAULT_EXACT_BUDGET) -> SplitResult:
    """
    Разбиение [n] = I ∪ J с |I| ≤ s и сертификатом для (M[·×I], M[·×J], A[J×I]) при r = 2.

    :param M: k x n из рангового класса с параметром s
    :param A: симметричная n x n
    :param s: рациональное s ≥ 4k + 8
    """
    k, n = M.shape
    if A.shape != (n, n):
        raise DimensionMismatchError(f"A {A.shape} при M {M.shape}")
    if not A.is_symmetric():
        raise ParameterError("Матрица A должна быть симметричной")
    s = Fraction(s)
    if s < 4 * k + 8:
        raise ParameterError(f"Нужно s ≥ 4k + 8 = {4 * k + 8}, получено s = {s}")
    cert = halasz_membership(M, floor(s), budget=budget)
    if cert.verdict == Verdict.NON_MEMBER:
        raise ParameterError(
            f"M не сохраняет ранг {k} после удаления столбцов {list(cert.deletion)} (s = {s})"
        )
    if cert.verdict == Verdict.INCONCLUSIVE:
        logger.warning("Принадлежность M ранговому классу не проверена, условие принято на веру")

    ell = pair_count(k, s)
    used: set = set()
    pairs_global = []
    for t in range(ell):
        pool = [h for h in range(n) if h not in used]
        I_pair, J_pair = augment_pair(A, M, pool)
        pairs_global.append((I_pair, J_pair))
        used.update(I_pair)
        used.update(J_pair)

    I = tuple(sorted(h for I_pair, _ in pairs_global for h in I_pair))
    J = tuple(h for h in range(n) if h not in set(I))
    pos_I = {h: p for p, h in enumerate(I)}
    pos_J = {h: p for p, h in enumerate(J)}
    local_pairs = tuple(
        (tuple(pos_I[h] for h in I_pair), tuple(pos_J[h] for h in J_pair))
        for I_pair, J_pair in pairs_global
    )
    m_cert = MCert(Verdict.MEMBER, 2, ell, local_pairs, examined=ell)
    logger.info(f"Разбиение построено: |I| = {len(I)}, |J| = {len(J)}, пар {ell}")
    return SplitResult(I, J, ell, m_cert, tuple(pairs_global))
