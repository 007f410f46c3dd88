"""
Модуль систематических ремонтопригодных фонтанных кодов (RFC).

Код (n, k̃): первые k̃ символов - само сообщение, каждый из n - k̃
проверочных символов - комбинация не более ξ случайно выбранных
символов сообщения с коэффициентами из GF(q). Проверочный символ вместе
со своими членами образует локальную группу; восстановление узла
читает не более ξ символов одной группы.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Protocol, Sequence, Tuple

import numpy as np

from srfc.errors import DecodingError, FieldError, UnrepairableError
from srfc.field import FieldElement, FieldParams, rank_mod_q

logger = logging.getLogger(__name__)

ParityTerms = Tuple[Tuple[int, int], ...]


def default_xi(k_tilde: int) -> int:
    """Локальность по умолчанию: ⌈log2 k̃⌉, но не меньше 1."""
    return max(1, math.ceil(math.log2(k_tilde))) if k_tilde > 1 else 1


def philox_streams(seed: int, count: int) -> List[np.random.Generator]:
    """Независимые счётчиковые генераторы Philox, порождённые одним seed."""
    return [np.random.Generator(np.random.Philox(s)) for s in np.random.SeedSequence(seed).spawn(count)]


# ========== ЛОКАЛЬНЫЕ ГРУППЫ ==========

@dataclass(frozen=True)
class LocalGroup:
    """
    Проверочный символ и систематические символы, которые он комбинирует.

    Значение проверочного символа равно Σ coefficients[j] · c_{member_indices[j]}.
    """

    parity_index: int
    member_indices: Tuple[int, ...]
    coefficients: Tuple[int, ...]

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.member_indices) | {self.parity_index}

    def coefficient_of(self, i: int) -> int:
        for member, coeff in zip(self.member_indices, self.coefficients):
            if member == i:
                return coeff
        return 0

    def downloads_for(self, failed: int) -> Tuple[int, ...]:
        """Узлы, читаемые при восстановлении failed через эту группу."""
        if failed == self.parity_index:
            return self.member_indices
        return (self.parity_index,) + tuple(i for i in self.member_indices if i != failed)

    def combine(self, values: Mapping[int, FieldElement]) -> FieldElement:
        """Σ coeff · value по членам группы."""
        total = None
        for member, coeff in zip(self.member_indices, self.coefficients):
            term = values[member] * coeff
            total = term if total is None else total + term
        return total


# ========== ПОЛИТИКИ ВЫБОРА ГРУППЫ ==========

class RepairPolicy(Protocol):
    name: str

    def choose(self, failed: int, groups: Sequence[LocalGroup]) -> LocalGroup:
        ...


class LowestParityPolicy:
    """Группа с наименьшим индексом проверочного символа."""

    name = "default"

    def choose(self, failed: int, groups: Sequence[LocalGroup]) -> LocalGroup:
        return min(groups, key=lambda g: g.parity_index)


class FixedGroupPolicy:
    """
    Явное соответствие узел -> проверочный символ; для остальных узлов
    действует политика наименьшего индекса.
    """

    name = "fixed"

    def __init__(self, choices: Mapping[int, int]):
        self.choices = dict(choices)

    def choose(self, failed: int, groups: Sequence[LocalGroup]) -> LocalGroup:
        wanted = self.choices.get(failed)
        if wanted is not None:
            for g in groups:
                if g.parity_index == wanted:
                    return g
            raise UnrepairableError(f"группа проверочного символа {wanted} недоступна для узла {failed}")
        return LowestParityPolicy().choose(failed, groups)


DEFAULT_POLICY = LowestParityPolicy()


@dataclass(frozen=True)
class RepairResult:
    """Восстановленное значение и точный набор скачанных символов."""

    failed: int
    value: FieldElement
    downloaded: Tuple[Tuple[int, FieldElement], ...]
    group: LocalGroup

    @property
    def downloaded_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.downloaded)


# ========== КОД ==========

@dataclass(frozen=True)
class RfcCode:
    """
    Внутренний код (n, k̃) с локальностью ξ.

    Attributes:
        n: Длина кода
        k_tilde: Размерность
        xi: Параметр локальности
        field: Поле символов GF(q^p); коэффициенты лежат в GF(q)
        parities: Для каждого проверочного символа k̃+1..n - пары (индекс, коэффициент)
        seed: Seed генерации (None для фиксированной топологии)
    """

    n: int
    k_tilde: int
    xi: int
    field: FieldParams
    parities: Tuple[ParityTerms, ...]
    seed: Optional[int] = None
    _groups: Dict[int, LocalGroup] = dc_field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.xi < 1:
            raise FieldError(f"нарушено xi >= 1 (xi={self.xi})")
        if not 1 <= self.k_tilde < self.n:
            raise FieldError(f"нарушено 1 <= k_tilde < n (k_tilde={self.k_tilde}, n={self.n})")
        if len(self.parities) != self.n - self.k_tilde:
            raise FieldError(f"нужно {self.n - self.k_tilde} проверочных символов, получено {len(self.parities)}")
        for offset, terms in enumerate(self.parities):
            j = self.k_tilde + 1 + offset
            indices = [i for i, _ in terms]
            if len(terms) > self.xi:
                raise FieldError(f"проверочный символ {j} затрагивает {len(terms)} > xi={self.xi} символов")
            if len(set(indices)) != len(indices):
                raise FieldError(f"повторяющиеся индексы в проверочном символе {j}")
            for i, c in terms:
                if not 1 <= i <= self.k_tilde:
                    raise FieldError(f"индекс {i} в проверочном символе {j} вне [1, {self.k_tilde}]")
                if not 0 < c < self.field.q:
                    raise FieldError(f"коэффициент {c} в проверочном символе {j} вне GF({self.field.q})*")
            self._groups[j] = LocalGroup(j, tuple(indices), tuple(c for _, c in terms))

    @classmethod
    def from_parities(cls, field: FieldParams, n: int, k_tilde: int, xi: int,
                      parities: Iterable[Iterable[Sequence[int]]], seed: Optional[int] = None,
                      strict: bool = True) -> "RfcCode":
        """
        Код с заданной топологией (например, из фикстуры), члены сортируются по индексу.
        """
        if strict and field.q <= k_tilde:
            raise FieldError(f"нарушено q > k_tilde (q={field.q}, k_tilde={k_tilde})")
        normalized = tuple(
            tuple(sorted((int(i), int(c) % field.q) for i, c in terms)) for terms in parities
        )
        return cls(n, k_tilde, xi, field, normalized, seed)

    # ---------- Структура ----------

    @property
    def rate(self) -> float:
        return self.k_tilde / self.n

    def is_systematic(self, i: int) -> bool:
        return 1 <= i <= self.k_tilde

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise FieldError(f"индекс символа {i} вне [1, {self.n}]")

    def group_of_parity(self, j: int) -> LocalGroup:
        return self._groups[j]

    def generator_row(self, i: int) -> List[int]:
        """Строка порождающей матрицы над GF(q) для символа i."""
        self._check_index(i)
        row = [0] * self.k_tilde
        if self.is_systematic(i):
            row[i - 1] = 1
        else:
            g = self._groups[i]
            for member, coeff in zip(g.member_indices, g.coefficients):
                row[member - 1] = coeff
        return row

    def local_groups_of(self, i: int) -> List[LocalGroup]:
        """
        Локальные группы символа i.

        Для систематического i - все группы, где i входит с ненулевым
        коэффициентом; для проверочного - единственная группа, которую он задаёт.
        """
        self._check_index(i)
        if not self.is_systematic(i):
            return [self._groups[i]]
        return [g for j, g in sorted(self._groups.items()) if g.coefficient_of(i)]

    def usable_groups(self, failed: int, available: Iterable[int]) -> List[LocalGroup]:
        """Группы, все остальные узлы которых доступны."""
        live = set(available) - {failed}
        return [g for g in self.local_groups_of(failed) if (g.nodes - {failed}) <= live]

    def disjoint_group_packing(self, i: int) -> List[LocalGroup]:
        """
        Жадный (не оптимальный) набор попарно непересекающихся групп символа i.

        Группы перебираются по возрастанию индекса проверочного символа;
        сам i при проверке пересечения не учитывается.
        """
        if not self.is_systematic(i):
            raise FieldError(f"символ {i} не систематический")
        packing: List[LocalGroup] = []
        used: set = set()
        for g in self.local_groups_of(i):
            nodes = g.nodes - {i}
            if nodes.isdisjoint(used):
                packing.append(g)
                used |= nodes
        return packing

    # ---------- Кодирование, восстановление, декодирование ----------

    def encode(self, msg: Sequence[FieldElement]) -> List[FieldElement]:
        """
        Кодирует k̃ символов: систематическая часть и проверочные комбинации.

        Args:
            msg: Сообщение длины k̃

        Returns:
            Кодовое слово длины n
        """
        if len(msg) != self.k_tilde:
            raise FieldError(f"длина сообщения {len(msg)} != k_tilde={self.k_tilde}")
        values = {i + 1: m for i, m in enumerate(msg)}
        codeword = list(msg)
        for j in range(self.k_tilde + 1, self.n + 1):
            combo = self._groups[j].combine(values)
            codeword.append(combo if combo is not None else self.field.zero())
        return codeword

    def repair(self, failed: int, available: Mapping[int, FieldElement],
               policy: Optional[RepairPolicy] = None) -> RepairResult:
        """
        Восстанавливает стёртый узел по одной локальной группе.

        Args:
            failed: Индекс стёртого узла
            available: Доступные узлы: индекс -> значение
            policy: Политика выбора группы (по умолчанию - наименьший индекс)

        Returns:
            RepairResult со значением и набором скачанных символов (не более ξ)

        Raises:
            UnrepairableError: если пригодной группы нет
        """
        self._check_index(failed)
        if failed in available:
            raise UnrepairableError(f"узел {failed} не стёрт")
        groups = self.usable_groups(failed, available.keys())
        if not groups:
            raise UnrepairableError(f"у узла {failed} нет доступной локальной группы")
        group = (policy or DEFAULT_POLICY).choose(failed, groups)

        downloaded = tuple((i, available[i]) for i in group.downloads_for(failed))
        if not self.is_systematic(failed):
            value = group.combine(available)
            if value is None:
                value = self.field.zero()
        else:
            others = [(i, c) for i, c in zip(group.member_indices, group.coefficients) if i != failed]
            rest = available[group.parity_index]
            for i, c in others:
                rest = rest - available[i] * c
            value = rest * pow(group.coefficient_of(failed), -1, self.field.q)

        logger.debug(f"Узел {failed} восстановлен через группу {group.parity_index}, "
                     f"скачано {[i for i, _ in downloaded]}")
        return RepairResult(failed, value, downloaded, group)

    def decode(self, available: Mapping[int, FieldElement]) -> List[FieldElement]:
        """
        Декодирование стираний: решение системы по строкам порождающей матрицы.

        Raises:
            DecodingError: если ранг доступных строк меньше k̃
        """
        indices = sorted(available)
        if all(i in available for i in range(1, self.k_tilde + 1)):
            return [available[i] for i in range(1, self.k_tilde + 1)]
        rows = [[self.field.embed(c) for c in self.generator_row(i)] for i in indices]
        rhs = [available[i] for i in indices]
        if not rows:
            raise DecodingError("нет доступных символов")
        result = self.field.solve_linear(rows, rhs, self.k_tilde)
        if result.rank < self.k_tilde:
            raise DecodingError(f"ранг доступных символов {result.rank} < k_tilde={self.k_tilde}")
        if not result.consistent:
            raise DecodingError("доступные символы противоречат коду")
        return list(result.solution)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k_tilde": self.k_tilde,
            "xi": self.xi,
            "seed": self.seed,
            "parities": [[[i, c] for i, c in terms] for terms in self.parities],
        }


def rfc_generate(field: FieldParams, n: int, k_tilde: int, xi: int, seed: int,
                 strict: bool = True) -> RfcCode:
    """
    Генерирует случайный RFC.

    Для каждого проверочного символа: ξ индексов равномерно с возвращением,
    для каждого - коэффициент из GF(q); повторные индексы сливаются
    суммированием, нулевые члены отбрасываются. Индексы и коэффициенты берутся
    из двух независимых потоков Philox, порождённых seed.

    Args:
        field: Поле GF(q^p)
        n: Длина
        k_tilde: Размерность
        xi: Локальность
        seed: Seed генерации
        strict: Требовать q > k̃

    Returns:
        RfcCode, полностью определяемый (field, n, k̃, ξ, seed)
    """
    if strict and field.q <= k_tilde:
        raise FieldError(f"нарушено q > k_tilde (q={field.q}, k_tilde={k_tilde})")
    if not 1 <= k_tilde < n:
        raise FieldError(f"нарушено 1 <= k_tilde < n (k_tilde={k_tilde}, n={n})")
    if xi < 1:
        raise FieldError(f"нарушено xi >= 1 (xi={xi})")

    index_rng, coeff_rng = philox_streams(seed, 2)
    parities = []
    for _ in range(n - k_tilde):
        indices = index_rng.integers(1, k_tilde + 1, size=xi)
        coeffs = coeff_rng.integers(0, field.q, size=xi)
        merged: Dict[int, int] = {}
        for i, c in zip(indices, coeffs):
            merged[int(i)] = (merged.get(int(i), 0) + int(c)) % field.q
        parities.append(tuple(sorted((i, c) for i, c in merged.items() if c)))

    code = RfcCode(n, k_tilde, xi, field, tuple(parities), seed)
    logger.info(f"Сгенерирован RFC ({n}, {k_tilde}), xi={xi}, seed={seed}")
    return code


def rfc_encode(code: RfcCode, msg: Sequence[FieldElement]) -> List[FieldElement]:
    return code.encode(msg)


def local_groups_of(code: RfcCode, i: int) -> List[LocalGroup]:
    return code.local_groups_of(i)


def disjoint_group_packing(code: RfcCode, i: int) -> List[LocalGroup]:
    return code.disjoint_group_packing(i)


def rfc_repair(code: RfcCode, failed: int, available: Mapping[int, FieldElement],
               policy: Optional[RepairPolicy] = None) -> RepairResult:
    return code.repair(failed, available, policy)


def rfc_decode(code: RfcCode, available: Mapping[int, FieldElement]) -> List[FieldElement]:
    return code.decode(available)


# ========== МОНТЕ-КАРЛО ДЕКОДИРОВАНИЯ ==========

def overhead_sizes(k_tilde: int, epsilons: Sequence[float]) -> List[int]:
    """Размеры подмножеств k̃ + ⌈ε·k̃⌉."""
    return [k_tilde + math.ceil(eps * k_tilde) for eps in epsilons]


def decoding_success_curve(code: RfcCode, sizes: Sequence[int], trials: int, seed: int,
                           jobs: int = 1) -> Dict[int, float]:
    """
    Частота успешного декодирования по случайным подмножествам узлов.

    В каждом испытании берётся одна случайная перестановка узлов, и проверяются
    её префиксы всех размеров, так что подмножества вложены и частота не
    убывает по размеру. Коэффициенты лежат в GF(q), поэтому успех определяется
    рангом порождающих строк над GF(q).

    Args:
        code: Код
        sizes: Размеры подмножеств
        trials: Число испытаний
        seed: Seed; у каждого испытания свой производный поток
        jobs: Число потоков

    Returns:
        Размер -> доля успешных испытаний
    """
    sizes = sorted(set(sizes))
    if any(not 0 <= s <= code.n for s in sizes):
        raise FieldError(f"размеры подмножеств должны лежать в [0, {code.n}]")
    generator = np.array([code.generator_row(i) for i in range(1, code.n + 1)], dtype=np.int64)
    seeds = np.random.SeedSequence(seed).spawn(trials)

    def run_trial(trial_seed: np.random.SeedSequence) -> List[bool]:
        rng = np.random.Generator(np.random.Philox(trial_seed))
        perm = rng.permutation(code.n)
        return [rank_mod_q(generator[perm[:s]], code.field.q) == code.k_tilde for s in sizes]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_trial, seeds))
    else:
        outcomes = [run_trial(s) for s in seeds]

    curve = {s: sum(o[j] for o in outcomes) / trials for j, s in enumerate(sizes)}
    logger.info(f"Монте-Карло декодирования ({trials} испытаний): {curve}")
    return curve
