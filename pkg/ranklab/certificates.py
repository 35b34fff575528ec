# ranklab/certificates.py
"""
Сертификаты рангового класса и их сериализация.

Каждый сертификат содержит явные множества индексов, чтобы его можно было
перепроверить без этого пакета. Проверки verify_* опираются только на
точный ранг и не используют процедуры, построившие сертификат.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from core.types import RatMatrix
from ranklab.linalg import rank
from ranklab.perturbation import block_matrix


class Verdict(str, Enum):
    MEMBER = "member"
    NON_MEMBER = "non-member"
    INCONCLUSIVE = "inconclusive"
    NOT_FOUND = "not-found"


@dataclass(frozen=True)
class HalaszCert:
    """
    Принадлежность M классу «ранг k после удаления любых ≤ s столбцов».

    member: либо min_weight > s (точный минимальный вес пространства строк),
    либо bases из t > s непересекающихся невырожденных k x k подматриц.
    non-member: deletion из ≤ s столбцов, после удаления которых ранг < k.
    """
    verdict: Verdict
    s: int
    min_weight: Optional[int] = None
    bases: Tuple[Tuple[int, ...], ...] = ()
    deletion: Tuple[int, ...] = ()
    examined: int = 0

    def to_json(self) -> Dict:
        data = {"verdict": self.verdict.value, "s": self.s}
        if self.min_weight is not None:
            data["min_weight"] = self.min_weight
        if self.bases:
            data["bases"] = [list(b) for b in self.bases]
        if self.verdict == Verdict.NON_MEMBER:
            data["deletion"] = list(self.deletion)
        data["examined"] = self.examined
        return data


@dataclass(frozen=True)
class MCert:
    """Непересекающиеся пары (I_t, J_t) размера k + r, I_t ⊆ [m], J_t ⊆ [n]"""
    verdict: Verdict
    r: int
    s: int
    pairs: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...] = ()
    examined: int = 0

    def to_json(self) -> Dict:
        return {
            "verdict": self.verdict.value,
            "r": self.r,
            "s": self.s,
            "pairs": [{"I": list(I), "J": list(J)} for I, J in self.pairs],
            "examined": self.examined,
        }


@dataclass(frozen=True)
class SplitResult:
    """
    Разбиение [n] = I ∪ J и сертификат для (M[·×I], M[·×J], A[J×I]).

    Индексы пар в cert относятся к позициям внутри I и J.
    """
    I: Tuple[int, ...]
    J: Tuple[int, ...]
    s_prime: int
    cert: MCert
    pairs_global: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...] = field(default=())

    def to_json(self) -> Dict:
        return {
            "I": list(self.I),
            "J": list(self.J),
            "s_prime": self.s_prime,
            "pairs": [{"I": list(a), "J": list(b)} for a, b in self.pairs_global],
            "certificate": self.cert.to_json(),
        }


def is_disjoint_family(sets: List[Tuple[int, ...]]) -> bool:
    seen = set()
    for s in sets:
        if len(set(s)) != len(s) or seen & set(s):
            return False
        seen |= set(s)
    return True


def _max_in_hyperplane_by_rank(M: RatMatrix) -> int:
    """Наибольшее число столбцов в гиперплоскости, только через ранги подматриц"""
    k, n = M.shape
    if k == 1:
        return sum(1 for j in range(n) if M[0, j] == 0)
    best = 0
    for spanning in combinations(range(n), k - 1):
        if rank(M.columns(spanning)) != k - 1:
            continue
        inside = sum(1 for j in range(n) if rank(M.columns(list(spanning) + [j])) == k - 1)
        best = max(best, inside)
    return best


def verify_halasz(M: RatMatrix, s: int, cert: HalaszCert) -> bool:
    """Независимая проверка HalaszCert"""
    k, n = M.shape
    if cert.verdict == Verdict.INCONCLUSIVE:
        return False
    if cert.verdict == Verdict.NON_MEMBER:
        if len(cert.deletion) > s or len(set(cert.deletion)) != len(cert.deletion):
            return False
        kept = [j for j in range(n) if j not in set(cert.deletion)]
        return rank(M.columns(kept)) < k
    if k == 0:
        return True
    if cert.bases:
        if len(cert.bases) <= s or not is_disjoint_family(list(cert.bases)):
            return False
        return all(len(b) == k and rank(M.columns(b)) == k for b in cert.bases)
    if cert.min_weight is None or cert.min_weight <= s or rank(M) < k:
        return False
    return n - _max_in_hyperplane_by_rank(M) == cert.min_weight


def verify_m_cert(T: RatMatrix, U: RatMatrix, A: RatMatrix, cert: MCert) -> bool:
    """
    Независимая проверка MCert.

    При выполненных (a) и (b) блоки T[·×I_t], U[·×J_t] имеют полный строчный
    ранг, и (c) проверяется блочным тождеством.
    """
    if cert.verdict != Verdict.MEMBER or len(cert.pairs) < cert.s:
        return False
    k, m = T.shape
    n = U.cols
    size = k + cert.r
    Is = [I for I, _ in cert.pairs]
    Js = [J for _, J in cert.pairs]
    if not is_disjoint_family(Is) or not is_disjoint_family(Js):
        return False
    for I, J in cert.pairs:
        if len(I) != size or len(J) != size:
            return False
        if any(not 0 <= i < m for i in I) or any(not 0 <= j < n for j in J):
            return False
        T_I, U_J = T.columns(I), U.columns(J)
        if rank(T_I) != k or rank(U_J) != k:
            return False
        if rank(block_matrix(A.submatrix(J, I), T_I, U_J)) - 2 * k < cert.r:
            return False
    return True


def verify_split(M: RatMatrix, A: RatMatrix, s, result: SplitResult) -> bool:
    """Проверка разбиения: |I| ≤ s, I ∪ J = [n], сертификат и ранг 2k + 2 каждого блока"""
    k, n = M.shape
    if sorted(result.I + result.J) != list(range(n)) or len(result.I) > Fraction(s):
        return False
    T = M.columns(result.I)
    U = M.columns(result.J)
    A_JI = A.submatrix(result.J, result.I)
    if not verify_m_cert(T, U, A_JI, result.cert):
        return False
    for I_pair, J_pair in result.pairs_global:
        block = block_matrix(A.submatrix(J_pair, I_pair), M.columns(I_pair), M.columns(J_pair))
        if rank(block) != 2 * k + 2:
            return False
    return True
