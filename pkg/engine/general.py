# engine/general.py
"""Точные вероятности для произведения конечных распределений ζ_1 … ζ_n."""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm, prod
from typing import Dict, Sequence, Tuple

from core.errors import CapExceededError, DimensionMismatchError
from core.types import DiscreteDist, QuadPoly
from engine.gray import common_denominator

logger = logging.getLogger(__name__)

DEFAULT_GENERAL_CAP = 20_000_000


@dataclass(frozen=True)
class ProductDist:
    """Независимые ζ_1 … ζ_n с конечными носителями"""
    dists: Tuple[DiscreteDist, ...]

    def __post_init__(self):
        object.__setattr__(self, "dists", tuple(self.dists))

    @classmethod
    def rademacher(cls, n: int) -> "ProductDist":
        return cls(tuple(DiscreteDist.rademacher() for _ in range(n)))

    @classmethod
    def uniform_on(cls, n: int, values: Sequence) -> "ProductDist":
        return cls(tuple(DiscreteDist.uniform_on(values) for _ in range(n)))

    @classmethod
    def uniform_integers(cls, n: int, bound: int) -> "ProductDist":
        return cls(tuple(DiscreteDist.uniform_integers(bound) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.dists)

    @property
    def size(self) -> int:
        """Π |supp ζ_i|"""
        return prod(len(d.atoms) for d in self.dists)

    def is_rademacher(self) -> bool:
        return all(d == DiscreteDist.rademacher() for d in self.dists)


def check_general_cap(d: ProductDist, cap: int) -> None:
    if d.size > cap:
        raise CapExceededError(
            f"Перебор {d.size} исходов превышает лимит {cap}; используйте monte_carlo",
            size=d.size, cap=cap,
        )


def general_histogram(q: QuadPoly, d: ProductDist, cap: int = DEFAULT_GENERAL_CAP) -> Dict[Fraction, Fraction]:
    """
    Точный закон Q(ζ): {значение: вероятность}.

    Перебор идёт в целых числах: X = V·ζ, D·V²·Q(ζ) = XᵀA'X + V·b'ᵀX + V²·c',
    вес исхода равен Π p_i·L_i, где L_i - общий знаменатель вероятностей ζ_i.
    Дроби строятся один раз на каждое различное значение.
    """
    if d.n != q.n:
        raise DimensionMismatchError(f"Распределение на {d.n} переменных, многочлен от {q.n}")
    check_general_cap(d, cap)
    n = q.n
    D = common_denominator(list(q.A.entries) + list(q.b) + [q.c])
    V = common_denominator([v for dist in d.dists for v in dist.support])
    A = [[int(q.A[i, j] * D) for j in range(n)] for i in range(n)]
    b = [int(q.b[i] * D) * V for i in range(n)]
    c = int(q.c * D) * V * V
    atoms = []
    for dist in d.dists:
        L = lcm(*(p.denominator for _, p in dist.atoms))
        atoms.append([(int(v * V), int(p * L)) for v, p in dist.atoms])
    total = prod(sum(w for _, w in column) for column in atoms)

    counts = Counter()
    for outcome in product(*atoms):
        X = [x for x, _ in outcome]
        value = c
        for i in range(n):
            if X[i]:
                value += X[i] * (b[i] + sum(A[i][j] * X[j] for j in range(n) if X[j]))
        counts[value] += prod(w for _, w in outcome)
    logger.debug(f"Перебрано {d.size} исходов, различных значений {len(counts)}")
    scale = D * V * V
    return {Fraction(value, scale): Fraction(count, total) for value, count in sorted(counts.items())}


def general_point_prob(q: QuadPoly, d: ProductDist, z, cap: int = DEFAULT_GENERAL_CAP) -> Fraction:
    """Точная Pr[Q(ζ) = z]"""
    return general_histogram(q, d, cap).get(Fraction(z), Fraction(0))


def general_sup_point_prob(q: QuadPoly, d: ProductDist, cap: int = DEFAULT_GENERAL_CAP) -> Tuple[Fraction, Fraction]:
    law = general_histogram(q, d, cap)
    return max(law.items(), key=lambda item: (item[1], -item[0]))
