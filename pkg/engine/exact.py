# engine/exact.py
"""
Точные вероятности событий для независимых знаков ξ ∈ {−1,1}ⁿ.

Все функции перебирают куб кодом Грея (engine.gray) и возвращают
точные дроби со знаменателем 2ⁿ.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import CapExceededError, DimensionMismatchError
from core.types import DyadicProb, LinearConstraint, QuadPoly, RatMatrix, as_vector
from engine.gray import ScaledColumns, ScaledQuad, common_denominator
from engine.parallel import parallel_quad_counts, parallel_vector_counts
from ranklab.linalg import solve

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 26


@dataclass(frozen=True)
class AtomHistogram:
    """
    Распределение Q(ξ) на событии ограничения.

    counts отсортированы по значению; total = 2ⁿ, сумма counts равна total
    без ограничения и 2ⁿ·Pr[Mξ = w] с ограничением.
    """
    counts: Tuple[Tuple[Fraction, int], ...]
    total: int

    def __post_init__(self):
        values = [v for v, _ in self.counts]
        if len(set(values)) != len(values):
            raise ValueError("Повторяющиеся значения в гистограмме")
        if any(c <= 0 for _, c in self.counts):
            raise ValueError("Число точек атома должно быть положительным")
        if self.mass > self.total:
            raise ValueError(f"Сумма {self.mass} больше total = {self.total}")

    @classmethod
    def from_scaled(cls, counts: Counter, scale: int, total: int) -> "AtomHistogram":
        pairs = sorted((Fraction(v, scale), c) for v, c in counts.items() if c)
        return cls(tuple(pairs), total)

    @property
    def mass(self) -> int:
        return sum(c for _, c in self.counts)

    def as_dict(self) -> Dict[Fraction, int]:
        return dict(self.counts)

    def point_prob(self, z) -> DyadicProb:
        return DyadicProb(self.as_dict().get(Fraction(z), 0), self.total)

    def sup(self) -> Tuple[Optional[Fraction], DyadicProb]:
        """Атом наибольшей массы; при равенстве наименьшее значение"""
        if not self.counts:
            return None, DyadicProb(0, self.total)
        z, c = max(self.counts, key=lambda item: (item[1], -item[0]))
        return z, DyadicProb(c, self.total)


@dataclass(frozen=True)
class QuadricSpec:
    """Z = {y ∈ ℚ^r : P(y) = 0, My = w}"""
    r: int
    P: QuadPoly
    constraints: LinearConstraint

    def __post_init__(self):
        if self.P.n != self.r or self.constraints.n != self.r:
            raise DimensionMismatchError(
                f"Квадрика в ℚ^{self.r}: P от {self.P.n} переменных, ограничение на {self.constraints.n}"
            )

    @classmethod
    def unconstrained(cls, P: QuadPoly) -> "QuadricSpec":
        return cls(P.n, P, LinearConstraint.vacuous(P.n))


def check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceededError(
            f"Перебор 2^{n} точек превышает лимит 2^{cap}; используйте monte_carlo",
            size=n, cap=cap,
        )


def histogram(q: QuadPoly, constraint: Optional[LinearConstraint] = None,
              cap: int = DEFAULT_ENUMERATION_CAP, workers: int = 1,
              partition_bits: int = 0) -> AtomHistogram:
    """
    Точное распределение Q(ξ) на {ξ : Mξ = w}.

    :param constraint: LinearConstraint или None (пустое ограничение)
    :param cap: максимальное n для перебора
    :param workers: число процессов; результат от него не зависит
    """
    if constraint is None:
        constraint = LinearConstraint.vacuous(q.n)
    if constraint.n != q.n:
        raise DimensionMismatchError(f"Ограничение на {constraint.n} переменных, многочлен от {q.n}")
    check_cap(q.n, cap)
    logger.debug(f"Перебор кодом Грея: n = {q.n}, k = {constraint.k}, процессов {workers}")
    sq = ScaledQuad.from_quad(q)
    cols = ScaledColumns.from_constraint(constraint) if constraint.k else None
    counts = parallel_quad_counts(sq, cols, workers=workers, partition_bits=partition_bits)
    return AtomHistogram.from_scaled(counts, sq.D, 1 << q.n)


def point_prob(q: QuadPoly, z, constraint: Optional[LinearConstraint] = None,
               cap: int = DEFAULT_ENUMERATION_CAP) -> DyadicProb:
    return histogram(q, constraint, cap=cap).point_prob(z)


def sup_point_prob(q: QuadPoly, cap: int = DEFAULT_ENUMERATION_CAP,
                   workers: int = 1) -> Tuple[Fraction, DyadicProb]:
    """sup_z Pr[Q(ξ) = z]: самый тяжёлый атом, при равенстве меньший z"""
    return histogram(q, cap=cap, workers=workers).sup()


def linear_system_prob(constraint: LinearConstraint, cap: int = DEFAULT_ENUMERATION_CAP,
                       workers: int = 1) -> DyadicProb:
    """Точная Pr[Mξ = w]"""
    n = constraint.n
    total = 1 << n
    if constraint.k == 0:
        return DyadicProb(total, total)
    check_cap(n, cap)
    cols = ScaledColumns.from_constraint(constraint)
    target = list(cols.target)
    count = parallel_vector_counts(cols, n, _EqualsTarget(target), workers=workers)
    return DyadicProb(count, total)


class _EqualsTarget:
    """Предикат y == target; классы, а не замыкания, чтобы переживать pickle в joblib"""

    def __init__(self, target: List[int]):
        self.target = target

    def __call__(self, y: List[int]) -> bool:
        return y == self.target


class _InQuadric:
    """
    Проверка y/D ∈ Z в целых числах.

    P(y/D) = 0 ⟺ yᵀ(E·A)y + D·(E·b)ᵀy + D²·E·c = 0, где E снимает знаменатели P;
    M(y/D) = w ⟺ (F·M)y = D·(F·w) построчно.
    """

    def __init__(self, spec: QuadricSpec, scale: int):
        P = spec.P
        E = common_denominator(list(P.A.entries) + list(P.b) + [P.c])
        r = spec.r
        self.r = r
        self.A = [[int(P.A[i, j] * E) for j in range(r)] for i in range(r)]
        self.b = [int(P.b[i] * E) * scale for i in range(r)]
        self.c = int(P.c * E) * scale * scale
        M, w = spec.constraints.M, spec.constraints.w
        self.rows = []
        for i in range(M.rows):
            F = common_denominator(list(M.row(i)) + [w[i]])
            self.rows.append(([int(v * F) for v in M.row(i)], int(w[i] * F) * scale))

    def __call__(self, y: List[int]) -> bool:
        for row, rhs in self.rows:
            if sum(a * v for a, v in zip(row, y)) != rhs:
                return False
        total = self.c
        for i in range(self.r):
            if y[i]:
                total += y[i] * (sum(a * v for a, v in zip(self.A[i], y)) + self.b[i])
        return total == 0


class _FewDifferences:
    """Число координат y ≠ v меньше threshold"""

    def __init__(self, target: List[int], threshold: int):
        self.target = target
        self.threshold = threshold

    def __call__(self, y: List[int]) -> bool:
        diff = 0
        for a, b in zip(y, self.target):
            if a != b:
                diff += 1
                if diff >= self.threshold:
                    return False
        return True


def vector_event_prob(vectors: Sequence[Sequence], spec: QuadricSpec,
                      cap: int = DEFAULT_ENUMERATION_CAP, workers: int = 1) -> DyadicProb:
    """
    Точная Pr[Σ ξ_i a_i ∈ Z].

    :param vectors: a_1 … a_n ∈ ℚ^r
    """
    vectors = [as_vector(v) for v in vectors]
    for v in vectors:
        if len(v) != spec.r:
            raise DimensionMismatchError(f"Вектор длины {len(v)} при r = {spec.r}")
    n = len(vectors)
    total = 1 << n
    if spec.constraints.k and solve(spec.constraints.M, spec.constraints.w) is None:
        logger.debug("Аффинная часть квадрики пуста")
        return DyadicProb(0, total)
    check_cap(n, cap)
    cols, scale = ScaledColumns.from_vectors(vectors, spec.r)
    count = parallel_vector_counts(cols, n, _InQuadric(spec, scale), workers=workers)
    return DyadicProb(count, total)


def hamming_event_prob(A: RatMatrix, v: Sequence, threshold: int,
                       cap: int = DEFAULT_ENUMERATION_CAP, workers: int = 1) -> DyadicProb:
    """Точная Pr[Aξ отличается от v менее чем в threshold координатах]"""
    if len(v) != A.rows:
        raise DimensionMismatchError(f"Матрица {A.shape} и вектор длины {len(v)}")
    n = A.cols
    total = 1 << n
    if threshold > A.rows:
        return DyadicProb(total, total)
    if threshold <= 0:
        return DyadicProb(0, total)
    check_cap(n, cap)
    cols = ScaledColumns.from_constraint(LinearConstraint(A, v))
    count = parallel_vector_counts(cols, n, _FewDifferences(list(cols.target), threshold), workers=workers)
    return DyadicProb(count, total)


def parallel_histogram(q: QuadPoly, constraint: Optional[LinearConstraint] = None,
                       workers: int = 0, partition_bits: int = 4,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> AtomHistogram:
    """histogram с разбиением по partition_bits старшим битам; workers = 0 берёт все ядра"""
    return histogram(q, constraint, cap=cap, workers=workers, partition_bits=partition_bits)
