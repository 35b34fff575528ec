# bounds/recursion.py
"""
Рекурсивная оценка f(k, s), её развёртка, замкнутая форма и итоговая
оценка вида C₁/√s.

s_* = s / (k+2)^500, s_{k,i} = s / (i+2)^(500(i−k+1)). Все величины
считаются через log2 s, поэтому s порядка 2^(2^20) допустимо.
"""
import logging
from fractions import Fraction
from typing import List, Tuple

from mpmath import mp, mpf

from bounds.logbound import LogBound, log2_of, log2_sum
from core.errors import ParameterError

logger = logging.getLogger(__name__)

SHRINK_EXPONENT = 500
SERIES_TOLERANCE_BITS = 80


def sum_identity(k: int, i: int) -> Fraction:
    """
    Σ_{j=k}^{i−1} j / 2^(j−k+2) прямым суммированием со сверкой с
    (k+1)/2 − (i+1)/2^(i−k+1).
    """
    if k < 0 or k > i:
        raise ParameterError(f"Нужно 0 ≤ k ≤ i, получено k = {k}, i = {i}")
    direct = sum((Fraction(j, 2 ** (j - k + 2)) for j in range(k, i)), Fraction(0))
    closed = Fraction(k + 1, 2) - Fraction(i + 1, 2 ** (i - k + 1))
    if direct != closed:
        raise ArithmeticError(f"Прямая сумма {direct} не совпала с формулой {closed} при k = {k}, i = {i}")
    return direct


def _log2_s_ki(log2_s: mpf, k: int, i: int) -> mpf:
    return log2_s - SHRINK_EXPONENT * (i - k + 1) * mp.log(i + 2, 2)


def _step(k: int, log2_s: mpf, f_next: LogBound) -> LogBound:
    ls = log2_s - SHRINK_EXPONENT * mp.log(k + 2, 2)
    first = -mpf(k + 1) / 2 * ls
    second = log2_sum([-mpf(k + 2) / 2 * ls, -mpf(k) / 4 * ls + f_next.log2_value / 2])
    return LogBound.from_log2("recursion_step", max(first, second))


def recursion_step(k: int, s, f_next: LogBound) -> LogBound:
    """
    max{ s_*^(−(k+1)/2), s_*^(−(k+2)/2) + s_*^(−k/4) · f_next^(1/2) }.

    :param f_next: оценка f(k+1, s_*)
    """
    if k < 0:
        raise ParameterError(f"Нужно k ≥ 0, получено k = {k}")
    return _step(k, log2_of(s), f_next)


def _base(ell: int, log2_s: mpf) -> LogBound:
    """f(ℓ, σ) ≤ (σ_{ℓ,ℓ})^(−ℓ/2); при ℓ = 0 это 1"""
    return LogBound.from_log2("base", -mpf(ell) / 2 * _log2_s_ki(log2_s, ell, ell))


def _unroll(k: int, ell: int, log2_s: mpf) -> LogBound:
    if k == ell:
        return _base(ell, log2_s)
    inner = _unroll(k + 1, ell, log2_s - SHRINK_EXPONENT * mp.log(k + 2, 2))
    return _step(k, log2_s, inner)


def unrolled_recursion(k: int, ell: int, s) -> LogBound:
    """recursion_step, применённый ℓ − k раз от базы на уровне ℓ"""
    if not 0 <= k <= ell:
        raise ParameterError(f"Нужно 0 ≤ k ≤ ℓ, получено k = {k}, ℓ = {ell}")
    bound = _unroll(k, ell, log2_of(s))
    return LogBound.from_log2("unrolled_recursion", bound.raw_log2)


def _closed_terms(k: int, ell: int, log2_s: mpf) -> List[mpf]:
    ls = {i: _log2_s_ki(log2_s, k, i) for i in range(k, ell + 1)}

    def prefix(upto: int) -> mpf:
        return mp.fsum(-mpf(j) / 2 ** (j - k + 2) * ls[j] for j in range(k, upto))

    terms = [-mpf(ell) / 2 ** (ell - k + 1) * ls[ell] + prefix(ell)]
    for i in range(k, ell):
        terms.append(-mpf(i + 2) / 2 ** (i - k + 1) * ls[i] + prefix(i))
    return terms


def closed_form(k: int, ell: int, s) -> LogBound:
    """
    (s_{k,ℓ})^(−ℓ/2^(ℓ−k+1)) Π_{j=k}^{ℓ−1} (s_{k,j})^(−j/2^(j−k+2))
    + Σ_{i=k}^{ℓ−1} (s_{k,i})^(−(i+2)/2^(i−k+1)) Π_{j=k}^{i−1} (s_{k,j})^(−j/2^(j−k+2)).
    """
    if not 0 <= k <= ell:
        raise ParameterError(f"Нужно 0 ≤ k ≤ ℓ, получено k = {k}, ℓ = {ell}")
    return LogBound.from_log2("closed_form", log2_sum(_closed_terms(k, ell, log2_of(s))))


def series_sum() -> mpf:
    """
    Σ_{i≥0} (i+2)² ln(i+2) / 2^(i+1) с относительной погрешностью 2^(−80).

    При i ≥ 10 отношение соседних членов меньше 2/3, и хвост не больше
    удвоенного последнего члена.
    """
    total = mpf(0)
    i = 0
    while True:
        term = mpf(i + 2) ** 2 * mp.log(i + 2) / mp.power(2, i + 1)
        total += term
        if i >= 10 and 2 * term < mp.ldexp(total, -SERIES_TOLERANCE_BITS):
            return total
        i += 1


def series_constant() -> mpf:
    """C₁ = exp(500 · series_sum()); истинная константа - любое число не меньше"""
    return mp.exp(SHRINK_EXPONENT * series_sum())


def log2_series_constant() -> mpf:
    return mp.log(series_constant(), 2)


def main_parts(s) -> Tuple[int, mpf, mpf]:
    """
    :return: (ℓ, log2 s^(1/2^(ℓ+1)), log2 скобки s^(1/2^(ℓ+1)) + Σ_{i<ℓ} s^(−2^(ℓ−i)/2^(ℓ+1)))
    """
    s = Fraction(s)
    if s < 4:
        raise ParameterError(f"Нужно s ≥ 4, получено s = {s}")
    log2_s = log2_of(s)
    ell = int(mp.floor(mp.log(log2_s, 2))) - 1
    # точная поправка на случай округления log2 log2 s у степеней двойки
    while 2 ** (ell + 2) <= log2_s:
        ell += 1
    while ell > -1 and 2 ** (ell + 1) > log2_s:
        ell -= 1
    lead = log2_s / 2 ** (ell + 1)
    bracket = log2_sum([lead] + [-log2_s / 2 ** (i + 1) for i in range(ell)])
    return ell, lead, bracket


def main_bound(s) -> LogBound:
    """C₁ · s^(−1/2) · (s^(1/2^(ℓ+1)) + Σ_{i<ℓ} s^(−2^(ℓ−i)/2^(ℓ+1))) при ℓ = ⌊log log s⌋ − 1"""
    ell, _, bracket = main_parts(s)
    raw = log2_series_constant() - log2_of(s) / 2 + bracket
    logger.debug(f"main_bound: ℓ = {ell}, log2 скобки = {mp.nstr(bracket, 12)}")
    return LogBound.from_log2("main_bound", raw)
