"""
Исключения библиотеки.

Все ошибки предметной области наследуются от ValueError, поэтому код,
который ловит ValueError, продолжает работать.
"""


class SrfcError(ValueError):
    """Базовая ошибка предметной области (CLI завершается с кодом 1)."""


class FieldError(SrfcError):
    """Некорректные параметры поля, смешение полей, обращение нуля."""


class InterpolationError(SrfcError):
    """Точки интерполяции линейно зависимы над GF(q)."""


class DecodingError(SrfcError):
    """Недостаточный ранг доступных символов для декодирования."""


class UnrepairableError(SrfcError):
    """У узла нет пригодной локальной группы."""


class AttackError(SrfcError):
    """Некорректная спецификация атаки (пересечение S1 и S2, индексы вне диапазона)."""


class BudgetExceededError(SrfcError):
    """Перебор превышает настроенный бюджет."""


class RateError(SrfcError):
    """Параметры формулы скорости вне области определения."""


class SpecFileError(SrfcError):
    """Файл описания кода повреждён или не проходит проверку."""


class ShardFormatError(SrfcError):
    """Файл шарда повреждён или не соответствует описанию кода."""
