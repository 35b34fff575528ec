# bounds/logbound.py
"""
Оценки вероятностей в логарифмической шкале.

Все значения хранятся как log2 с точностью mpmath не ниже 128 бит и
обрезаются сверху единицей. Сравнение точной вероятности с оценкой ведётся
с направленным округлением: log2 вероятности сдвигается вверх, а оценка
вниз на несколько младших разрядов, поэтому проверка «p ≤ оценка» никогда
не проходит ложно.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, Iterable, Optional, Union

from mpmath import mp, mpf

from core.errors import ParameterError
from core.types import DyadicProb

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 160
MIN_PRECISION = 128
# точное рациональное значение считается только для небольших показателей
EXACT_LOG2_LIMIT = 4096

mp.prec = DEFAULT_PRECISION

Number = Union[int, Fraction]


def set_precision(bits: int) -> None:
    """Точность мантиссы в битах для всех вычислений пакета"""
    if bits < MIN_PRECISION:
        raise ParameterError(f"Точность должна быть не меньше {MIN_PRECISION} бит, получено {bits}")
    mp.prec = bits
    logger.debug(f"Точность mpmath: {bits} бит")


def log2_of(x: Number) -> mpf:
    """log2 положительного рационального числа"""
    x = Fraction(x)
    if x <= 0:
        raise ParameterError(f"Логарифм определён только для положительных чисел, получено {x}")
    return mp.log(mpf(x.numerator), 2) - mp.log(mpf(x.denominator), 2)


def log2_sum(values: Iterable[mpf]) -> mpf:
    """log2(Σ 2^v); пустая сумма и слагаемые −∞ дают −∞"""
    values = [v for v in values if v != mp.ninf]
    if not values:
        return mp.ninf
    top = max(values)
    return top + mp.log(mp.fsum(mp.power(2, v - top) for v in values), 2)


def rational_power(base: Fraction, numerator: int, denominator: int = 2) -> Optional[Fraction]:
    """base^(numerator/denominator) как дробь, если корень извлекается точно"""
    base = Fraction(base)
    if denominator == 1:
        return base ** numerator
    if denominator != 2:
        return None
    if numerator % 2 == 0:
        return base ** (numerator // 2)
    p, q = base.numerator, base.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp != p or rq * rq != q:
        return None
    return Fraction(rp, rq) ** numerator


@dataclass(frozen=True)
class LogBound:
    """
    min(raw, 1) в шкале log2.

    :param exact: точное значение min(raw, 1), если оно рационально и известно
    """
    name: str
    log2_value: mpf
    clamped: bool
    raw_log2: mpf
    exact: Optional[Fraction] = None

    @classmethod
    def from_log2(cls, name: str, raw, exact: Optional[Fraction] = None) -> "LogBound":
        raw = mpf(raw)
        clamped = raw > 0
        if clamped:
            logger.debug(f"Оценка {name} больше 1 и обрезана")
            return cls(name, mpf(0), True, raw, Fraction(1))
        return cls(name, raw, False, raw, exact)

    @classmethod
    def from_fraction(cls, name: str, value: Fraction) -> "LogBound":
        value = Fraction(value)
        if value == 0:
            return cls(name, mp.ninf, False, mp.ninf, Fraction(0))
        return cls.from_log2(name, log2_of(value), value)

    @classmethod
    def one(cls, name: str = "trivial") -> "LogBound":
        return cls(name, mpf(0), False, mpf(0), Fraction(1))

    @property
    def value(self) -> mpf:
        return mp.power(2, self.log2_value)

    def to_json(self) -> Dict:
        data = {
            "name": self.name,
            "log2": mp.nstr(self.log2_value, 40),
            "clamped": self.clamped,
            "raw_log2": mp.nstr(self.raw_log2, 40),
        }
        if self.exact is not None:
            data["value"] = str(self.exact)
        return data


def upper_log2(p: Fraction) -> mpf:
    """Верхняя граница log2 p: вычисление с 32 запасными битами плюс сдвиг вверх"""
    with mp.workprec(mp.prec + 32):
        value = log2_of(p)
        margin = mp.ldexp(max(mpf(1), abs(value)), -(mp.prec - 8))
        return value + margin


def exact_le_bound(p: Union[DyadicProb, Fraction, int], bound: LogBound) -> bool:
    """
    Точная вероятность p не превосходит оценки.

    Если у оценки есть точное рациональное значение, сравнение точное.
    Иначе сравнивается верхняя граница log2 p с log2 оценки за вычетом
    запаса в несколько младших разрядов.
    """
    value = p.value if isinstance(p, DyadicProb) else Fraction(p)
    if value < 0 or value > 1:
        raise ParameterError(f"Вероятность вне [0, 1]: {value}")
    if value == 0 or bound.clamped:
        return True
    if bound.exact is not None:
        return value <= bound.exact
    if bound.log2_value == mp.ninf:
        return False
    slack = mp.ldexp(max(mpf(1), abs(bound.log2_value)), -(mp.prec - 16))
    return upper_log2(value) <= bound.log2_value - slack
