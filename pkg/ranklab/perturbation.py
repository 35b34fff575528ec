# ranklab/perturbation.py
"""
Минимальный ранг по (T, U)-возмущениям A + LT + UᵀR.

Минимум равен рангу билинейной формы xᵀAy, суженной на x ∈ ker U, y ∈ ker T.
При полном строчном ранге T и U это же число даёт блочное тождество
rank [[A, Uᵀ], [T, 0]] = rank T + rank U + результат.
"""
import logging

from core.errors import DimensionMismatchError
from core.types import RatMatrix
from ranklab.linalg import kernel_matrix, rank

logger = logging.getLogger(__name__)


def _check_shapes(A: RatMatrix, T: RatMatrix, U: RatMatrix) -> None:
    n, m = A.shape
    if T.cols != m or U.cols != n or T.rows != U.rows:
        raise DimensionMismatchError(
            f"Ожидались A n x m, T k x m, U k x n; получено A {A.shape}, T {T.shape}, U {U.shape}"
        )


def min_perturbed_rank(A: RatMatrix, T: RatMatrix, U: RatMatrix) -> int:
    """
    min rank(A + LT + UᵀR) по всем L, R.

    :param A: n x m
    :param T: k x m
    :param U: k x n
    """
    _check_shapes(A, T, U)
    if T.rows == 0:
        return rank(A)
    B_U = kernel_matrix(U)
    B_T = kernel_matrix(T)
    if B_U.cols == 0 or B_T.cols == 0:
        return 0
    return rank(B_U.transpose() @ A @ B_T)


def block_matrix(A: RatMatrix, T: RatMatrix, U: RatMatrix) -> RatMatrix:
    """[[A, Uᵀ], [T, 0]]"""
    _check_shapes(A, T, U)
    top = A.hstack(U.transpose())
    bottom = T.hstack(RatMatrix.zeros(T.rows, T.rows))
    return top.stack(bottom)


def block_identity_rank(A: RatMatrix, T: RatMatrix, U: RatMatrix) -> int:
    """rank [[A, Uᵀ], [T, 0]] − rank T − rank U"""
    return rank(block_matrix(A, T, U)) - rank(T) - rank(U)
