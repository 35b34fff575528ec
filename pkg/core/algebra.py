# core/algebra.py
"""
Алгебраические построения над квадратичными многочленами.

Вычисление значений, приращение при смене знака одной переменной,
эквивалентные возмущения, разложение в сумму квадратов, направления
трансляционной инвариантности, подстановка значений переменных.
"""
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import DimensionMismatchError
from core.types import QuadPoly, RatMatrix, SignVector, Vector, as_vector
from ranklab.linalg import rank_and_kernel

logger = logging.getLogger(__name__)


def eval_quad_at(q: QuadPoly, point: Sequence) -> Fraction:
    """
    Значение Q в произвольной рациональной точке.

    :param q: многочлен
    :param point: вектор длины q.n
    :return: xᵀAx + bᵀx + c
    """
    if len(point) != q.n:
        raise DimensionMismatchError(f"Точка длины {len(point)} для многочлена с n = {q.n}")
    x = as_vector(point)
    total = q.c
    for i in range(q.n):
        if x[i] == 0:
            continue
        row = q.A.row(i)
        acc = q.b[i]
        for j in range(q.n):
            if row[j] and x[j]:
                acc += row[j] * x[j]
        total += acc * x[i]
    return total


def eval_quad(q: QuadPoly, x: SignVector) -> Fraction:
    if x.n != q.n:
        raise DimensionMismatchError(f"Знаковый вектор длины {x.n} для многочлена с n = {q.n}")
    return eval_quad_at(q, x.signs())


def flip_delta(q: QuadPoly, x: SignVector, j: int) -> Fraction:
    """
    Q(x с инвертированным j-м знаком) − Q(x) за O(n).

    Диагональный член A[j,j]·ξ_j² не меняется, поэтому в сумму не входит.
    """
    if x.n != q.n:
        raise DimensionMismatchError(f"Знаковый вектор длины {x.n} для многочлена с n = {q.n}")
    if not 0 <= j < q.n:
        raise IndexError(f"Индекс {j} вне диапазона [0, {q.n})")
    row = q.A.row(j)
    acc = Fraction(0)
    for i in range(q.n):
        if i != j and row[i]:
            acc += row[i] * x.sign(i)
    return -2 * x.sign(j) * (2 * acc + q.b[j])


def _symmetrize(M: RatMatrix) -> RatMatrix:
    return (M + M.transpose()).scale(Fraction(1, 2))


def perturb_equivalent(q: QuadPoly, M: RatMatrix, w: Sequence, L: RatMatrix, R: RatMatrix,
                       D: Sequence) -> QuadPoly:
    """
    Многочлен Q*, совпадающий с Q на {ξ ∈ {−1,1}ⁿ : Mξ = w}.

    Квадратичная часть Q* задаётся матрицей A + LM + MᵀR + diag(D)
    (хранится её симметризация), линейная часть уменьшается на Lw + Rᵀw,
    свободный член на ΣD_i.

    :param M: k x n
    :param L: n x k
    :param R: k x n
    :param D: диагональ длины n
    """
    n, k = q.n, M.rows
    if M.cols != n or len(w) != k:
        raise DimensionMismatchError(f"Ограничение {M.shape} с w длины {len(w)} при n = {n}")
    if L.shape != (n, k) or R.shape != (k, n) or len(D) != n:
        raise DimensionMismatchError(
            f"Ожидались L {n}x{k}, R {k}x{n}, D длины {n}; получено L {L.shape}, R {R.shape}, D {len(D)}"
        )
    w = as_vector(w)
    D = as_vector(D)
    A_star = q.A + L @ M + M.transpose() @ R + RatMatrix.diagonal(D)
    shift_L = L.mat_vec(w)
    shift_R = R.transpose().mat_vec(w)
    b_star = tuple(q.b[i] - shift_L[i] - shift_R[i] for i in range(n))
    return QuadPoly(n, _symmetrize(A_star), b_star, q.c - sum(D, Fraction(0)))


def _normalized(lam: Fraction, g: List[Fraction]) -> Tuple[Fraction, Vector]:
    """Делит g на первую ненулевую координату, λ умножается на её квадрат"""
    lead = next(v for v in g if v != 0)
    return lam * lead * lead, tuple(v / lead for v in g)


def square_decompose(A: RatMatrix) -> List[Tuple[Fraction, Vector]]:
    """
    Симметричное исключение Лагранжа: xᵀAx = Σ λ_i (g_iᵀx)².

    Ведущий диагональный элемент снимает один квадрат; при нулевой диагонали
    пара (i, j) с A[i,j] ≠ 0 снимает два квадрата 2(uᵀx)(vᵀx)/A[i,j].

    :return: ровно rank(A) пар (λ_i, g_i), первая ненулевая координата g_i равна 1
    """
    if not A.is_symmetric():
        raise DimensionMismatchError("Разложение в сумму квадратов требует симметричную матрицу")
    n = A.rows
    S = A.to_rows()
    terms = []
    while True:
        pivot = next((i for i in range(n) if S[i][i] != 0), None)
        if pivot is not None:
            p = S[pivot][pivot]
            u = list(S[pivot])
            terms.append(_normalized(p, [v / p for v in u]))
            S = [[S[a][b] - u[a] * u[b] / p for b in range(n)] for a in range(n)]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if S[i][j] != 0), None)
        if pair is None:
            break
        i, j = pair
        h = S[i][j]
        u, v = list(S[i]), list(S[j])
        terms.append(_normalized(1 / (2 * h), [a + b for a, b in zip(u, v)]))
        terms.append(_normalized(-1 / (2 * h), [a - b for a, b in zip(u, v)]))
        S = [[S[a][b] - (u[a] * v[b] + v[a] * u[b]) / h for b in range(n)] for a in range(n)]
    logger.debug(f"Разложение в сумму квадратов: {len(terms)} слагаемых при n = {n}")
    return terms


def translation_directions(q: QuadPoly) -> List[Vector]:
    """Базис {v : Av = 0, bᵀv = 0}: вдоль этих направлений Q не меняется"""
    stacked = q.A.stack(RatMatrix.from_rows([q.b], cols=q.n))
    _, kernel = rank_and_kernel(stacked)
    return kernel


def low_rank_embedding(q: QuadPoly) -> Tuple[List[Vector], QuadPoly]:
    """
    Представление Q(x) = P(Σ x_i a_i) с a_i ∈ ℚ^{r+1}, r = rank(A).

    P(y) = Σ λ_j y_j² + y_{r+1} + c, последняя координата несёт линейную часть.
    """
    terms = square_decompose(q.A)
    r = len(terms)
    vectors = [
        tuple(g[i] for _, g in terms) + (q.b[i],)
        for i in range(q.n)
    ]
    diag = [lam for lam, _ in terms] + [Fraction(0)]
    lin = [Fraction(0)] * r + [Fraction(1)]
    P = QuadPoly(r + 1, RatMatrix.diagonal(diag), tuple(lin), q.c)
    return vectors, P


def restrict(q: QuadPoly, fixed: Dict[int, Fraction]) -> QuadPoly:
    """
    Подставляет значения части переменных.

    :param fixed: {индекс: значение}
    :return: многочлен от оставшихся переменных в порядке возрастания индексов
    """
    for i in fixed:
        if not 0 <= i < q.n:
            raise IndexError(f"Индекс {i} вне диапазона [0, {q.n})")
    free = [i for i in range(q.n) if i not in fixed]
    values = {i: Fraction(v) for i, v in fixed.items()}
    A = q.A.submatrix(free, free)
    b = []
    for i in free:
        cross = sum((q.A[i, f] * val for f, val in values.items()), Fraction(0))
        b.append(q.b[i] + 2 * cross)
    c = q.c
    for f, vf in values.items():
        c += q.b[f] * vf
        for g, vg in values.items():
            c += q.A[f, g] * vf * vg
    return QuadPoly(len(free), A, tuple(b), c)


def cube_constant(q: QuadPoly) -> Optional[Fraction]:
    """
    Значение Q, если Q постоянен на {−1,1}ⁿ, иначе None.

    На кубе Q = Σ_{i<j} 2A[i,j]x_ix_j + Σ b_ix_i + (c + tr A), и такое
    мультилинейное представление единственно.
    """
    n = q.n
    if any(q.b[i] for i in range(n)):
        return None
    if any(q.A[i, j] for i in range(n) for j in range(i + 1, n)):
        return None
    return q.c + sum((q.A[i, i] for i in range(n)), Fraction(0))


def simple_inequality_holds(a, b, c) -> bool:
    """
    Точная проверка импликации a² ≤ ab + c ⇒ a ≤ b + √c для a, b, c ≥ 0.

    При a > b условие a ≤ b + √c равносильно (a − b)² ≤ c.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if min(a, b, c) < 0:
        raise ValueError(f"Ожидались неотрицательные числа, получено {a}, {b}, {c}")
    if a * a > a * b + c:
        return True
    if a <= b:
        return True
    return (a - b) ** 2 <= c
