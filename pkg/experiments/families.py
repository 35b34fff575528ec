# experiments/families.py
"""
Семейства квадратичных многочленов для прогонов.

Каждый генератор детерминирован: случайность берётся из
random.Random(f"{seed}:{family}:{size}:{replicate}").
"""
import random
from fractions import Fraction
from typing import Callable, Dict

from core.errors import ParameterError
from core.types import QuadPoly, RatMatrix

COEFFICIENT_RANGE = 3


def _rng(family: str, size: int, seed: int, replicate: int) -> random.Random:
    return random.Random(f"{seed}:{family}:{size}:{replicate}")


def _nonzero(rng: random.Random) -> int:
    value = rng.randint(1, COEFFICIENT_RANGE)
    return value if rng.random() < 0.5 else -value


def squared_sum(size: int, rng: random.Random) -> QuadPoly:
    """(x_1 + … + x_n)²"""
    return QuadPoly.square_of_linear([1] * size)


def shifted_product(size: int, rng: random.Random) -> QuadPoly:
    """(Σx)(Σx + 2)"""
    ones = [1] * size
    return QuadPoly.product_of_linear(ones, 0, ones, 2)


def difference_of_squares(size: int, rng: random.Random) -> QuadPoly:
    """(Σx + 1)(Σx − 1)"""
    ones = [1] * size
    return QuadPoly.product_of_linear(ones, 1, ones, -1)


def bilinear_split(size: int, rng: random.Random) -> QuadPoly:
    """(uᵀx)(vᵀx), u на первой половине переменных, v на второй"""
    half = size // 2
    u = [_nonzero(rng) if i < half else 0 for i in range(size)]
    v = [0 if i < half else _nonzero(rng) for i in range(size)]
    return QuadPoly.product_of_linear(u, 0, v, 0)


def random_dense(size: int, rng: random.Random) -> QuadPoly:
    """Все коэффициенты - целые из [−3, 3]"""
    quad = {(i, j): rng.randint(-COEFFICIENT_RANGE, COEFFICIENT_RANGE)
            for i in range(size) for j in range(i, size)}
    lin = [rng.randint(-COEFFICIENT_RANGE, COEFFICIENT_RANGE) for _ in range(size)]
    return QuadPoly.from_monomials(size, quad, lin, rng.randint(-COEFFICIENT_RANGE, COEFFICIENT_RANGE))


def random_matching_support(size: int, rng: random.Random) -> QuadPoly:
    """Внедиагональный носитель - случайное совершенное паросочетание"""
    order = list(range(size))
    rng.shuffle(order)
    quad = {}
    for a, b in zip(order[0::2], order[1::2]):
        quad[(a, b)] = _nonzero(rng)
    lin = [rng.randint(-COEFFICIENT_RANGE, COEFFICIENT_RANGE) for _ in range(size)]
    return QuadPoly.from_monomials(size, quad, lin)


def diagonal(size: int, rng: random.Random) -> QuadPoly:
    """Диагональная A: внедиагональный носитель пуст"""
    diag = [Fraction(rng.randint(-COEFFICIENT_RANGE, COEFFICIENT_RANGE)) for _ in range(size)]
    lin = [_nonzero(rng) for _ in range(size)]
    return QuadPoly(size, RatMatrix.diagonal(diag), tuple(Fraction(v) for v in lin))


FAMILIES: Dict[str, Callable[[int, random.Random], QuadPoly]] = {
    "squared_sum": squared_sum,
    "shifted_product": shifted_product,
    "difference_of_squares": difference_of_squares,
    "bilinear_split": bilinear_split,
    "random_dense": random_dense,
    "random_matching_support": random_matching_support,
    "diagonal": diagonal,
}


def generate(family: str, size: int, seed: int = 0, replicate: int = 0) -> QuadPoly:
    if family not in FAMILIES:
        raise ParameterError(f"Неизвестное семейство {family!r}; доступны: {', '.join(sorted(FAMILIES))}")
    if size < 1:
        raise ParameterError(f"Размер должен быть не меньше 1, получено {size}")
    return FAMILIES[family](size, _rng(family, size, seed, replicate))
