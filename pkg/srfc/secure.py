"""
Модуль защищённого RFC: случайное дополнение, внешний код Габидулина (k̃, k̃)
и внутренний RFC (n, k̃).

Каждый хранимый символ c_i - значение одного и того же линеаризованного
многочлена f с коэффициентами m̃ = (m, r) в эффективной точке z_i:
для систематического узла z_i = y_i, для проверочного - та же
GF(q)-комбинация точек y, что и комбинация символов.
"""

import logging
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from srfc.errors import DecodingError, FieldError, UnrepairableError
from srfc.field import FieldElement, FieldParams
from srfc.gabidulin import GabidulinCode, gab_new
from srfc.linearized import LinearizedPolynomial
from srfc.rfc import RepairPolicy, RepairResult, RfcCode, rfc_generate

logger = logging.getLogger(__name__)


def compute_effective_points(inner: RfcCode, outer_points: Sequence[FieldElement]) -> Tuple[FieldElement, ...]:
    """
    Эффективные точки z_1..z_n: c_i = f(z_i).

    Args:
        inner: Внутренний RFC
        outer_points: Точки y_1..y_k̃ внешнего кода

    Returns:
        Кортеж из n точек
    """
    points = list(outer_points)
    for j in range(inner.k_tilde + 1, inner.n + 1):
        group = inner.group_of_parity(j)
        z = inner.field.zero()
        for member, coeff in zip(group.member_indices, group.coefficients):
            z = z + outer_points[member - 1] * coeff
        points.append(z)
    return tuple(points)


@dataclass(frozen=True)
class SecureRfcSystem:
    """
    Конкатенация кода Габидулина и RFC, рассчитанная на (ℓ1, ℓ2)-перехватчика.

    Attributes:
        field: GF(q^p)
        inner: RFC (n, k̃, ξ)
        outer: Код Габидулина (k̃, k̃)
        l1: Число узлов, содержимое которых видит перехватчик
        l2: Число узлов, восстановление которых он наблюдает
        strict: Проверялись ли модельные условия q > k̃ и ℓ1 + ℓ2 < k
        effective_points: z_1..z_n
    """

    field: FieldParams
    inner: RfcCode
    outer: GabidulinCode
    l1: int
    l2: int
    strict: bool
    effective_points: Tuple[FieldElement, ...]

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def k_tilde(self) -> int:
        return self.inner.k_tilde

    @property
    def xi(self) -> int:
        return self.inner.xi

    @property
    def u(self) -> int:
        """Длина случайного дополнения u = ℓ1 + ξ·ℓ2."""
        return self.l1 + self.xi * self.l2

    @property
    def k(self) -> int:
        """Длина сообщения k = k̃ - u."""
        return self.k_tilde - self.u

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    @classmethod
    def from_inner(cls, inner: RfcCode, l1: int, l2: int, strict: bool = True,
                   outer_points: Optional[Sequence[FieldElement]] = None) -> "SecureRfcSystem":
        """
        Собирает систему вокруг готового внутреннего кода.

        Raises:
            FieldError: с названием нарушенного неравенства
        """
        field = inner.field
        if l1 < 0 or l2 < 0:
            raise FieldError(f"нарушено l1 >= 0 и l2 >= 0 (l1={l1}, l2={l2})")
        if field.p < inner.k_tilde:
            raise FieldError(f"нарушено p >= k_tilde (p={field.p}, k_tilde={inner.k_tilde})")
        u = l1 + inner.xi * l2
        if inner.k_tilde <= u:
            raise FieldError(
                f"нарушено k_tilde > l1 + xi*l2 (k_tilde={inner.k_tilde}, l1 + xi*l2={u}): k было бы {inner.k_tilde - u}"
            )
        k = inner.k_tilde - u
        if field.q <= inner.k_tilde:
            if strict:
                raise FieldError(f"нарушено q > k_tilde (q={field.q}, k_tilde={inner.k_tilde})")
            logger.warning(f"Ослабленная модель: q={field.q} <= k_tilde={inner.k_tilde}")
        if l1 + l2 >= k:
            if strict:
                raise FieldError(f"нарушено l1 + l2 < k (l1 + l2={l1 + l2}, k={k})")
            logger.warning(f"Ослабленная модель: l1 + l2={l1 + l2} >= k={k}")

        outer = gab_new(field, inner.k_tilde, inner.k_tilde, outer_points)
        points = compute_effective_points(inner, outer.points)
        system = cls(field, inner, outer, l1, l2, strict, points)
        logger.info(f"Собрана защищённая система: n={inner.n}, k_tilde={inner.k_tilde}, "
                    f"xi={inner.xi}, (l1, l2)=({l1}, {l2}), u={u}, k={k}")
        return system

    def polynomial(self, message: Sequence[FieldElement], padding: Sequence[FieldElement]) -> LinearizedPolynomial:
        """f_m̃ с коэффициентами (m, r)."""
        return LinearizedPolynomial(tuple(message) + tuple(padding), self.field)


def srfc_build(field: FieldParams, n: int, k_tilde: int, xi: int, l1: int, l2: int,
               seed: int, strict: bool = True) -> SecureRfcSystem:
    """
    Строит защищённую систему: RFC по seed, внешний код на полиномиальном базисе.

    Args:
        field: GF(q^p), p >= k̃
        n, k_tilde, xi: Параметры внутреннего RFC
        l1, l2: Бюджет перехватчика
        seed: Seed генерации RFC
        strict: Проверять q > k̃ и ℓ1 + ℓ2 < k

    Returns:
        SecureRfcSystem
    """
    if field.p < k_tilde:
        raise FieldError(f"нарушено p >= k_tilde (p={field.p}, k_tilde={k_tilde})")
    if k_tilde <= l1 + xi * l2:
        raise FieldError(
            f"нарушено k_tilde > l1 + xi*l2 (k_tilde={k_tilde}, l1 + xi*l2={l1 + xi * l2}): k было бы {k_tilde - l1 - xi * l2}"
        )
    inner = rfc_generate(field, n, k_tilde, xi, seed, strict=strict)
    return SecureRfcSystem.from_inner(inner, l1, l2, strict)


# ========== КОДИРОВАНИЕ И ДЕКОДИРОВАНИЕ ==========

@dataclass(frozen=True)
class SecureCodeword:
    """
    Результат srfc_encode.

    padding - секретный материал: хранится только для аудита и оракула.
    """

    symbols: Tuple[FieldElement, ...]
    message: Tuple[FieldElement, ...]
    padding: Optional[Tuple[FieldElement, ...]]

    def discard_secret(self) -> "SecureCodeword":
        return replace(self, padding=None)


def srfc_encode(system: SecureRfcSystem, msg: Sequence[FieldElement], rng: np.random.Generator,
                keep_secret: bool = True) -> SecureCodeword:
    """
    Кодирует сообщение из k символов.

    1. Дополняет m случайным r из u равномерных символов GF(q^p)
    2. Кодирует m̃ = (m, r) кодом Габидулина (k̃, k̃)
    3. Кодирует результат RFC (n, k̃)

    Args:
        system: Защищённая система
        msg: k символов
        rng: Генератор для дополнения
        keep_secret: Сохранить r в результате

    Returns:
        SecureCodeword
    """
    if len(msg) != system.k:
        raise FieldError(f"длина сообщения {len(msg)} != k={system.k}")
    padding = tuple(system.field.random(rng) for _ in range(system.u))
    intermediate = system.outer.encode(list(msg) + list(padding))
    symbols = tuple(system.inner.encode(intermediate))
    return SecureCodeword(symbols, tuple(msg), padding if keep_secret else None)


def srfc_decode(system: SecureRfcSystem, available: Mapping[int, FieldElement]) -> List[FieldElement]:
    """
    Декодирует сообщение по доступным узлам через эффективные точки.

    Точки перебираются жадно в порядке индексов; восстановленное
    дополнение отбрасывается.

    Raises:
        DecodingError: если ранг эффективных точек меньше k̃ или узел вне [1, n]
    """
    bad = sorted(i for i in available if not 1 <= i <= system.n)
    if bad:
        raise DecodingError(f"узлы {bad} вне [1, {system.n}]")
    pairs = [(system.effective_points[i - 1], available[i]) for i in sorted(available)]
    coeffs = system.outer.decode_at_points(pairs)
    return coeffs[:system.k]


# ========== СОСТОЯНИЕ РАСПРЕДЕЛЁННОГО ХРАНИЛИЩА ==========

@dataclass(frozen=True)
class RepairEvent:
    """Запись журнала: какой узел восстанавливался и какие узлы были прочитаны."""

    failed: int
    parity_index: int
    downloaded: Tuple[int, ...]


@dataclass
class DssState:
    """
    n узлов, в каждом живом - ровно один символ; None - стёртый узел.

    Единственный писатель: параллельные восстановления не поддерживаются.
    """

    contents: List[Optional[FieldElement]]
    events: List[RepairEvent] = dc_field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.contents)

    def value(self, i: int) -> Optional[FieldElement]:
        return self.contents[i - 1]

    def is_erased(self, i: int) -> bool:
        return self.contents[i - 1] is None

    def live(self) -> Dict[int, FieldElement]:
        return {i + 1: v for i, v in enumerate(self.contents) if v is not None}

    def snapshot(self) -> "DssState":
        return DssState(list(self.contents), list(self.events))


def dss_store(system: SecureRfcSystem, codeword: Union[SecureCodeword, Sequence[FieldElement]]) -> DssState:
    symbols = codeword.symbols if isinstance(codeword, SecureCodeword) else tuple(codeword)
    if len(symbols) != system.n:
        raise FieldError(f"кодовое слово длины {len(symbols)} != n={system.n}")
    return DssState(list(symbols))


def dss_fail(state: DssState, i: int) -> DssState:
    """Стирает узел i."""
    if not 1 <= i <= state.n:
        raise FieldError(f"узел {i} вне [1, {state.n}]")
    state.contents[i - 1] = None
    logger.info(f"Узел {i} отказал")
    return state


def dss_repair(system: SecureRfcSystem, state: DssState, i: int,
               policy: Optional[RepairPolicy] = None) -> DssState:
    """
    Восстанавливает стёртый узел и дописывает набор скачанных узлов в журнал.

    Raises:
        UnrepairableError: если узел жив или у него нет доступной группы
    """
    repair_node(system, state, i, policy)
    return state


def repair_node(system: SecureRfcSystem, state: DssState, i: int,
                policy: Optional[RepairPolicy] = None) -> RepairResult:
    """Как dss_repair, но возвращает RepairResult со скачанными значениями."""
    if not 1 <= i <= state.n:
        raise FieldError(f"узел {i} вне [1, {state.n}]")
    if not state.is_erased(i):
        raise UnrepairableError(f"узел {i} жив, восстанавливать нечего")
    result = system.inner.repair(i, state.live(), policy)
    state.contents[i - 1] = result.value
    state.events.append(RepairEvent(i, result.group.parity_index, result.downloaded_indices))
    logger.info(f"Узел {i} восстановлен через группу {result.group.parity_index}, "
                f"скачаны узлы {list(result.downloaded_indices)}")
    return result
