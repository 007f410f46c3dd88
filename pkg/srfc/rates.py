"""
Модуль достижимых защищённых скоростей: RFC, LRC (δ = 2) и MSR.

Все скорости - точные рациональные числа; n может быть дробным
(k̃ / скорость внутреннего кода), построение кодов здесь не требуется.
"""

import csv
import logging
from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction
from typing import IO, Iterable, List, Optional, Sequence, Union

from srfc.errors import RateError

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, str]

MODELS = ("secure-rfc", "secure-lrc", "secure-msr")
MODEL_ALIASES = {"rfc": "secure-rfc", "lrc": "secure-lrc", "msr": "secure-msr"}

_DECIMAL = Context(prec=15)


def canonical_model(name: str) -> str:
    model = MODEL_ALIASES.get(name.strip().lower(), name.strip().lower())
    if model not in MODELS:
        raise RateError(f"неизвестная модель {name!r}, допустимы {MODELS} или {sorted(MODEL_ALIASES)}")
    return model


def _frac(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ========== ФОРМУЛЫ ==========

def rate_secure_rfc(k_tilde: int, n: Number, l1: int, l2: int, xi: int) -> Fraction:
    """(k̃ - ℓ1 - ξ·ℓ2) / n."""
    k = k_tilde - l1 - xi * l2
    if k <= 0:
        raise RateError(f"нарушено k_tilde > l1 + xi*l2 (k_tilde={k_tilde}, l1 + xi*l2={l1 + xi * l2})")
    return Fraction(k) / _frac(n)


def rate_secure_lrc(k_tilde: int, n: Number, l1: int, l2: int, r: int, delta: int = 2) -> Fraction:
    """
    (k̃ - ℓ1 - r·ℓ2) / n для LRC с δ = 2.

    Raises:
        RateError: для δ != 2 (общий случай не поддерживается)
    """
    if delta != 2:
        raise RateError(f"скорость защищённого LRC поддерживается только для delta = 2 (delta={delta})")
    k = k_tilde - l1 - r * l2
    if k <= 0:
        raise RateError(f"нарушено k_tilde > l1 + r*l2 (k_tilde={k_tilde}, l1 + r*l2={l1 + r * l2})")
    return Fraction(k) / _frac(n)


def rate_secure_msr(k_tilde: int, n: Number, l1: int, l2: int) -> Fraction:
    """
    (k̃ - ℓ1 - ℓ2) · (1 - 1/(n - k̃))^ℓ2 / n.

    Формула восстановлена по опубликованным точкам кривых MSR и сверяется
    с ними в тестах.
    """
    n = _frac(n)
    if not n > k_tilde + 1:
        raise RateError(f"нарушено n > k_tilde + 1 (n={n}, k_tilde={k_tilde})")
    k = k_tilde - l1 - l2
    if k <= 0:
        raise RateError(f"нарушено k_tilde > l1 + l2 (k_tilde={k_tilde}, l1 + l2={l1 + l2})")
    return k * (1 - 1 / (n - k_tilde)) ** l2 / n


def msr_subpacketization(k_tilde: int, n: Number) -> Fraction:
    """α = (n - k̃)^(k̃ - 1) символов на узел (только для отчёта)."""
    return (_frac(n) - k_tilde) ** (k_tilde - 1)


# ========== ЗАПРОСЫ И ТАБЛИЦЫ ==========

@dataclass(frozen=True)
class RateQuery:
    """
    Один запрос скорости.

    Attributes:
        model: secure-rfc | secure-lrc | secure-msr
        k_tilde: Размерность внутреннего кода
        n: Длина (может быть дробной)
        l1, l2: Бюджет перехватчика
        xi: Локальность RFC
        r, delta: Параметры LRC
    """

    model: str
    k_tilde: int
    n: Fraction
    l1: int
    l2: int
    xi: int = 3
    r: int = 3
    delta: int = 2

    @classmethod
    def from_inner_rate(cls, model: str, k_tilde: int, inner_rate: Number, l1: int, l2: int,
                        xi: int = 3, r: int = 3, delta: int = 2) -> "RateQuery":
        inner_rate = _frac(inner_rate)
        if not 0 < inner_rate < 1:
            raise RateError(f"скорость внутреннего кода {inner_rate} вне (0, 1)")
        return cls(canonical_model(model), k_tilde, Fraction(k_tilde) / inner_rate, l1, l2, xi, r, delta)

    @property
    def inner_rate(self) -> Fraction:
        return Fraction(self.k_tilde) / self.n

    @property
    def alpha(self) -> Optional[Fraction]:
        return msr_subpacketization(self.k_tilde, self.n) if self.model == "secure-msr" else None

    def rate(self) -> Fraction:
        if self.model == "secure-rfc":
            return rate_secure_rfc(self.k_tilde, self.n, self.l1, self.l2, self.xi)
        if self.model == "secure-lrc":
            return rate_secure_lrc(self.k_tilde, self.n, self.l1, self.l2, self.r, self.delta)
        return rate_secure_msr(self.k_tilde, self.n, self.l1, self.l2)


@dataclass(frozen=True)
class RateRow:
    k_tilde: int
    model: str
    rate: Fraction


def render_rate(value: Fraction) -> str:
    """Десятичная запись с 15 значащими цифрами без хвостовых нулей."""
    d = _DECIMAL.divide(Decimal(value.numerator), Decimal(value.denominator))
    return format(d.normalize(_DECIMAL), "f")


def parse_k_range(text: str) -> range:
    """'a:b:step' -> a, a+step, ..., b включительно; одно число - один k̃."""
    try:
        parts = [int(x) for x in text.split(":")]
    except ValueError:
        raise RateError(f"диапазон k_tilde {text!r}: ожидались целые числа")
    if len(parts) == 1:
        return range(parts[0], parts[0] + 1)
    if len(parts) == 2:
        parts.append(1)
    if len(parts) != 3 or parts[2] <= 0 or parts[0] > parts[1]:
        raise RateError(f"диапазон k_tilde {text!r} должен иметь вид a:b:step, a <= b, step > 0")
    start, stop, step = parts
    return range(start, stop + 1, step)


def rate_sweep(models: Sequence[str], inner_rates: Sequence[Number], l1: int, l2: int,
               k_values: Iterable[int], xi: int = 3, r: int = 3, delta: int = 2) -> List[RateRow]:
    """
    Таблица скоростей: для каждой скорости внутреннего кода, каждой модели и каждого k̃.

    Строки с нарушенными условиями пропускаются с предупреждением. При нескольких
    скоростях внутреннего кода к имени модели добавляется суффикс "@rate".

    Returns:
        Список RateRow
    """
    models = [canonical_model(m) for m in models]
    inner_rates = [_frac(x) for x in inner_rates]
    k_values = list(k_values)
    rows: List[RateRow] = []
    for inner_rate in inner_rates:
        suffix = f"@{render_rate(inner_rate)}" if len(inner_rates) > 1 else ""
        for model in models:
            for k_tilde in k_values:
                try:
                    query = RateQuery.from_inner_rate(model, k_tilde, inner_rate, l1, l2, xi, r, delta)
                    rows.append(RateRow(k_tilde, model + suffix, query.rate()))
                except RateError as e:
                    logger.warning(f"Пропущена строка {model}{suffix}, k_tilde={k_tilde}: {e}")
    logger.info(f"Построена таблица скоростей: {len(rows)} строк")
    return rows


def write_csv(rows: Sequence[RateRow], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["k_tilde", "model", "rate"])
    for row in rows:
        writer.writerow([row.k_tilde, row.model, render_rate(row.rate)])
