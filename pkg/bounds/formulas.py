# bounds/formulas.py
"""
Замкнутые оценки точечных вероятностей.

Каждая функция проверяет условия своего утверждения и возвращает LogBound.
Там, где значение рационально и показатель невелик, LogBound несёт точную
дробь, и сравнение с точной вероятностью делается без округления.
"""
import logging
from fractions import Fraction
from math import ceil, comb
from typing import Callable, Dict, Tuple

from mpmath import mpf

from bounds.logbound import EXACT_LOG2_LIMIT, LogBound, log2_of, rational_power
from core.errors import ParameterError

logger = logging.getLogger(__name__)


def _as_int(name: str, value) -> int:
    value = Fraction(value)
    if value.denominator != 1:
        raise ParameterError(f"Параметр {name} должен быть целым, получено {value}")
    return int(value)


def _positive(name: str, value) -> Fraction:
    value = Fraction(value)
    if value <= 0:
        raise ParameterError(f"Параметр {name} должен быть положительным, получено {value}")
    return value


def _power_bound(name: str, base: Fraction, half_exponent: int, factor: Fraction = Fraction(1)) -> LogBound:
    """factor · base^(half_exponent/2)"""
    raw = log2_of(factor) + log2_of(base) * mpf(half_exponent) / 2
    exact = None
    if abs(raw) < EXACT_LOG2_LIMIT:
        power = rational_power(base, half_exponent)
        if power is not None:
            exact = min(factor * power, Fraction(1))
    return LogBound.from_log2(name, raw, exact)


def erdos_lo(n) -> LogBound:
    """C(n, ⌊n/2⌋) · 2^(−n)"""
    n = _as_int("n", n)
    if n < 0:
        raise ParameterError(f"Нужно n ≥ 0, получено n = {n}")
    return LogBound.from_fraction("erdos_lo", Fraction(comb(n, n // 2), 2 ** n))


def odlyzko(k) -> LogBound:
    """2^(−k): вектор ранга k попадает в точку с вероятностью не больше 2^(−k)"""
    k = _as_int("k", k)
    if k < 0:
        raise ParameterError(f"Нужно k ≥ 0, получено k = {k}")
    return LogBound.from_fraction("odlyzko", Fraction(1, 2 ** k))


def halasz_fjz(k, t) -> LogBound:
    """t^(−k/2) при t непересекающихся невырожденных k x k подматрицах"""
    k, t = _as_int("k", k), _as_int("t", t)
    if k < 0 or t < 1:
        raise ParameterError(f"Нужно k ≥ 0 и t ≥ 1, получено k = {k}, t = {t}")
    return _power_bound("halasz_fjz", Fraction(t), -k)


def halasz_affine(k, d, t) -> LogBound:
    """t^(−(k−d)/2) для d-мерного аффинного подпространства ℚ^k"""
    k, d, t = _as_int("k", k), _as_int("d", d), _as_int("t", t)
    if not 0 <= d <= k or t < 1:
        raise ParameterError(f"Нужно 0 ≤ d ≤ k и t ≥ 1, получено k = {k}, d = {d}, t = {t}")
    return _power_bound("halasz_affine", Fraction(t), -(k - d))


def halasz_sub(k, s) -> LogBound:
    """(s/k)^(−k/2) для M из рангового класса с параметром s"""
    k = _as_int("k", k)
    s = _positive("s", s)
    if k < 1:
        raise ParameterError(f"Нужно k ≥ 1, получено k = {k}")
    return _power_bound("halasz_sub", s / k, -k)


def geometric(d, r, t) -> LogBound:
    """2^(dr+1) / t^((r−d)/2) для квадрики на (d+1)-мерном подпространстве ℚ^r"""
    d, r, t = _as_int("d", d), _as_int("r", r), _as_int("t", t)
    if not 0 <= d < r:
        raise ParameterError(f"Нужно 0 ≤ d < r, получено d = {d}, r = {r}")
    if t < 1 or t % (2 ** d):
        raise ParameterError(f"t = {t} должно быть положительным и делиться на 2^d = {2 ** d}")
    return _power_bound("geometric", Fraction(t), -(r - d), Fraction(2 ** (d * r + 1)))


def low_rank(k, s, r) -> LogBound:
    """(s / (2^(3r²) (k+r)²))^(−(k+1)/2)"""
    k, r = _as_int("k", k), _as_int("r", r)
    s = _positive("s", s)
    if k < 0 or r < 1:
        raise ParameterError(f"Нужно k ≥ 0 и r ≥ 1, получено k = {k}, r = {r}")
    return _power_bound("low_rank", s / (2 ** (3 * r * r) * (k + r) ** 2), -(k + 1))


def key_lemma(k, r, s) -> LogBound:
    """(s / (10^60 (k+r)^20))^(−(k+r)/2)"""
    k, r = _as_int("k", k), _as_int("r", r)
    s = _positive("s", s)
    if k < 0 or r < 1:
        raise ParameterError(f"Нужно k ≥ 0 и r ≥ 1, получено k = {k}, r = {r}")
    return _power_bound("key_lemma", s / (10 ** 60 * (k + r) ** 20), -(k + r))


def key_corollary(k, s) -> LogBound:
    """(s / (10^61 (k+2)^20))^(−(k+2)/2)"""
    k = _as_int("k", k)
    s = _positive("s", s)
    if k < 0:
        raise ParameterError(f"Нужно k ≥ 0, получено k = {k}")
    return _power_bound("key_corollary", s / (10 ** 61 * (k + 2) ** 20), -(k + 2))


def hamming_threshold(r, t) -> int:
    """Событие «Aξ отличается от v менее чем в t/(6r) координатах» ⟺ отличий < ⌈t/(6r)⌉"""
    r, t = _as_int("r", r), _as_int("t", t)
    if r < 1 or t < 0:
        raise ParameterError(f"Нужно r ≥ 1 и t ≥ 0, получено r = {r}, t = {t}")
    return ceil(Fraction(t, 6 * r))


def hamming_ball(r, t) -> LogBound:
    """(10r)^(30r) · t^(−r/2), если A сохраняет ранг r после удаления любых t строк и t столбцов"""
    r, t = _as_int("r", r), _as_int("t", t)
    if r < 1 or t < 1:
        raise ParameterError(f"Нужно r ≥ 1 и t ≥ 1, получено r = {r}, t = {t}")
    return _power_bound("hamming_ball", Fraction(t), -r, Fraction((10 * r) ** (30 * r)))


BOUNDS: Dict[str, Tuple[Callable[..., LogBound], Tuple[str, ...]]] = {
    "erdos_lo": (erdos_lo, ("n",)),
    "odlyzko": (odlyzko, ("k",)),
    "halasz_fjz": (halasz_fjz, ("k", "t")),
    "halasz_affine": (halasz_affine, ("k", "d", "t")),
    "halasz_sub": (halasz_sub, ("k", "s")),
    "geometric": (geometric, ("d", "r", "t")),
    "low_rank": (low_rank, ("k", "s", "r")),
    "key_lemma": (key_lemma, ("k", "r", "s")),
    "key_corollary": (key_corollary, ("k", "s")),
    "hamming_ball": (hamming_ball, ("r", "t")),
}
