# core/errors.py
"""Исключения лаборатории. Вердикт "inconclusive" исключением не является."""


class LabError(Exception):
    """Базовая ошибка qlo"""


class DimensionMismatchError(LabError, ValueError):
    """Размерности входных объектов не согласованы"""


class FormatError(LabError, ValueError):
    """Некорректный JSON или строка рационального числа"""


class CapExceededError(LabError):
    """Перебор превышает установленный лимит"""

    def __init__(self, message: str, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class ParameterError(LabError, ValueError):
    """Параметры оценки не удовлетворяют условиям утверждения"""


class HypothesisFailure(LabError):
    """Условие на матрицу нарушено; violating_set указывает на множество S"""

    def __init__(self, message: str, violating_set=None):
        super().__init__(message)
        self.violating_set = sorted(violating_set) if violating_set is not None else None


class ConfigError(LabError):
    """Ошибка загрузки или валидации конфигурации"""
