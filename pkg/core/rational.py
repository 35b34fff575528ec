# core/rational.py
import re
from fractions import Fraction
from typing import Iterable, List, Union

from core.errors import FormatError

RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

RationalLike = Union[Fraction, int, str]


def parse_rational(value: RationalLike) -> Fraction:
    """
    Разбирает рациональное число из строки вида "p/q" или "p".

    Float не принимается: равенства в лаборатории должны быть точными.

    :param value: строка, int или Fraction
    :return: Fraction в несократимом виде
    """
    if isinstance(value, bool):
        raise FormatError(f"Ожидалось рациональное число, получено bool: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise FormatError(f"Ожидалась строка 'p/q', получено {type(value).__name__}: {value!r}")
    match = RATIONAL_RE.match(value)
    if not match:
        raise FormatError(f"Некорректная запись рационального числа: {value!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise FormatError(f"Нулевой знаменатель: {value!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction) -> str:
    """Всегда "p/q", в том числе для целых ("3/1")"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_vector(values: Iterable[RationalLike]) -> List[Fraction]:
    return [parse_rational(v) for v in values]


def format_vector(values: Iterable[Fraction]) -> List[str]:
    return [format_rational(v) for v in values]
