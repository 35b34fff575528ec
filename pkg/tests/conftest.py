"""Построители случайных экземпляров для тестов"""
import random
from fractions import Fraction

from core.types import QuadPoly, RatMatrix


def random_rational(rng: random.Random, bound: int = 3, denominators=(1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.choice(denominators))


def random_quad(rng: random.Random, n: int, bound: int = 3, density: float = 0.6,
                denominators=(1, 2, 3)) -> QuadPoly:
    """Многочлен с рациональными коэффициентами; часть мономов нулевая"""
    quad = {}
    for i in range(n):
        for j in range(i, n):
            if rng.random() < density:
                quad[(i, j)] = random_rational(rng, bound, denominators)
    lin = [random_rational(rng, bound, denominators) if rng.random() < density else 0 for _ in range(n)]
    return QuadPoly.from_monomials(n, quad, lin, random_rational(rng, bound, denominators))


def random_integer_quad(rng: random.Random, n: int, bound: int = 2) -> QuadPoly:
    """Целые коэффициенты из малого диапазона: событие Q = 0 не вырождено"""
    quad = {(i, j): rng.randint(-bound, bound) for i in range(n) for j in range(i, n)}
    lin = [rng.randint(-bound, bound) for _ in range(n)]
    return QuadPoly.from_monomials(n, quad, lin, rng.randint(-bound, bound))


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 2, zero_prob: float = 0.3) -> RatMatrix:
    return RatMatrix.from_rows(
        [[0 if rng.random() < zero_prob else rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)],
        cols=cols,
    )


def random_symmetric(rng: random.Random, n: int, bound: int = 5, zero_prob: float = 0.0) -> RatMatrix:
    entries = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            value = 0 if rng.random() < zero_prob else rng.randint(-bound, bound)
            entries[i][j] = entries[j][i] = value
    return RatMatrix.from_rows(entries, cols=n)


def distinct_offdiag_symmetric(rng: random.Random, n: int) -> RatMatrix:
    """Попарно различные ненулевые внедиагональные элементы"""
    values = rng.sample(range(1, 10 * n * n), n * (n - 1) // 2)
    entries = [[Fraction(0)] * n for _ in range(n)]
    it = iter(values)
    for i in range(n):
        entries[i][i] = Fraction(rng.randint(-5, 5))
        for j in range(i + 1, n):
            v = Fraction(next(it), rng.choice((1, 2, 3)))
            entries[i][j] = entries[j][i] = v if rng.random() < 0.5 else -v
    return RatMatrix.from_rows(entries, cols=n)
