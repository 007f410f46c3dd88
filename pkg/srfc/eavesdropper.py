"""
Модуль (ℓ1, ℓ2)-перехватчика: моделирование атаки и аудит утечки.

Перехватчик видит содержимое узлов S1 и всё, что скачивается при
восстановлении узлов S2 (и сам восстановленный символ). Каждый
перехваченный символ - значение f_m̃ в эффективной точке, поэтому
H(e) = ν·p·log q, где ν - ранг этих точек над GF(q), а утечка
I(m; e) = max(0, ν - u)·p·log q.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_SEED, WORST_CASE_BUDGET
from srfc.errors import AttackError, SrfcError, UnrepairableError
from srfc.field import FieldElement, rank_mod_q
from srfc.linearized import moore_matrix
from srfc.rfc import DEFAULT_POLICY, FixedGroupPolicy, LocalGroup, RepairPolicy
from srfc.secure import DssState, SecureRfcSystem, repair_node

logger = logging.getLogger(__name__)

POLICIES = ("default", "worst")


# ========== ТИПЫ ==========

@dataclass(frozen=True)
class AttackSpec:
    """
    Атака: S1 - читаемые узлы, S2 - узлы, восстановление которых наблюдается.

    |S1| и |S2| могут превышать бюджет, на который рассчитана система.
    """

    s1: FrozenSet[int]
    s2: FrozenSet[int]
    policy: str = "default"

    def __post_init__(self):
        if self.s1 & self.s2:
            raise AttackError(f"нарушена непересекаемость S1 и S2: общие узлы {sorted(self.s1 & self.s2)}")
        if self.policy not in POLICIES:
            raise AttackError(f"неизвестная политика {self.policy!r}, допустимы {POLICIES}")

    @classmethod
    def create(cls, s1: Iterable[int] = (), s2: Iterable[int] = (), policy: str = "default") -> "AttackSpec":
        return cls(frozenset(int(i) for i in s1), frozenset(int(i) for i in s2), policy)

    def validate(self, n: int) -> None:
        bad = sorted(i for i in self.s1 | self.s2 if not 1 <= i <= n)
        if bad:
            raise AttackError(f"узлы {bad} вне [1, {n}]")

    def to_dict(self) -> Dict[str, Any]:
        return {"s1": sorted(self.s1), "s2": sorted(self.s2), "policy": self.policy}


@dataclass(frozen=True)
class ObservedNode:
    """Узел, символ которого видел перехватчик, и откуда он взялся."""

    node: int
    source: str  # "storage" | "download" | "repaired"
    repair_of: Optional[int] = None


@dataclass(frozen=True)
class EavesdropRecord:
    """Перехваченные символы e, их эффективные точки и происхождение."""

    observed: Tuple[ObservedNode, ...]
    symbols: Tuple[FieldElement, ...]
    points: Tuple[FieldElement, ...]

    @property
    def w(self) -> int:
        return len(self.symbols)

    @property
    def nodes(self) -> Tuple[int, ...]:
        return tuple(o.node for o in self.observed)


@dataclass(frozen=True)
class SecurityReport:
    """
    Итог аудита; энтропии - целые кратные единицы p·log2(q) бит.

    Attributes:
        nu: Ранг эффективных точек над GF(q)
        u: Длина дополнения
        unit_bits: p·log2(q)
        H_e, H_r, H_r_given_em, leakage: В единицах unit_bits
        secure: leakage == 0
    """

    nu: int
    u: int
    unit_bits: float
    H_e: int
    H_r: int
    H_r_given_em: int
    leakage: int
    secure: bool
    attack: Optional[AttackSpec] = None
    repair_choice: Optional[Tuple[Tuple[int, int], ...]] = None

    @property
    def leakage_bits(self) -> float:
        return self.leakage * self.unit_bits

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "nu": self.nu,
            "u": self.u,
            "unit_bits": self.unit_bits,
            "H_e": self.H_e,
            "H_r": self.H_r,
            "H_r_given_em": self.H_r_given_em,
            "leakage_bits": self.leakage_bits,
            "secure": self.secure,
            "attack": self.attack.to_dict() if self.attack else None,
        }
        if self.repair_choice:
            data["repair_choice"] = {str(node): parity for node, parity in self.repair_choice}
        return data


def make_report(system: SecureRfcSystem, nu: int, attack: Optional[AttackSpec] = None,
                repair_choice: Optional[Dict[int, int]] = None) -> SecurityReport:
    u = system.u
    return SecurityReport(
        nu=nu,
        u=u,
        unit_bits=system.field.unit_bits,
        H_e=nu,
        H_r=u,
        H_r_given_em=u - min(u, nu),
        leakage=max(0, nu - u),
        secure=nu <= u,
        attack=attack,
        repair_choice=tuple(sorted(repair_choice.items())) if repair_choice else None,
    )


# ========== ПЛАН АТАКИ ==========

def plan_attack(system: SecureRfcSystem, attack: AttackSpec,
                policy: Optional[RepairPolicy] = None) -> Tuple[ObservedNode, ...]:
    """
    Какие узлы увидит перехватчик (без значений).

    Узлы S2 восстанавливаются по очереди, все прочие узлы живы.
    Повторное чтение одного и того же узла учитывается один раз.

    Raises:
        UnrepairableError: если узел из S2 нельзя восстановить
    """
    attack.validate(system.n)
    policy = policy or DEFAULT_POLICY
    observed: Dict[int, ObservedNode] = {}
    for i in sorted(attack.s1):
        observed.setdefault(i, ObservedNode(i, "storage"))
    everyone = set(range(1, system.n + 1))
    for j in sorted(attack.s2):
        groups = system.inner.usable_groups(j, everyone - {j})
        if not groups:
            raise UnrepairableError(f"узел {j} из S2 невозможно восстановить")
        group = policy.choose(j, groups)
        for d in group.downloads_for(j):
            observed.setdefault(d, ObservedNode(d, "download", j))
        observed.setdefault(j, ObservedNode(j, "repaired", j))
    return tuple(observed.values())


def _repair_options(system: SecureRfcSystem, s2: Sequence[int]) -> List[List[LocalGroup]]:
    return [system.inner.local_groups_of(j) for j in s2]


def _nu_of(points_matrix: np.ndarray, nodes: Iterable[int], q: int) -> int:
    rows = sorted(set(nodes))
    if not rows:
        return 0
    return rank_mod_q(points_matrix[[i - 1 for i in rows]], q)


def _points_matrix(system: SecureRfcSystem) -> np.ndarray:
    return np.array([z.coeffs for z in system.effective_points], dtype=np.int64)


def worst_repair_choice(system: SecureRfcSystem, attack: AttackSpec) -> Dict[int, int]:
    """Выбор групп для S2, максимизирующий ν (первый из равных)."""
    s2 = sorted(attack.s2)
    matrix = _points_matrix(system)
    best: Optional[Tuple[int, Dict[int, int]]] = None
    for choice in product(*_repair_options(system, s2)):
        nodes = set(attack.s1)
        for j, g in zip(s2, choice):
            nodes |= g.nodes
        nu = _nu_of(matrix, nodes, system.field.q)
        if best is None or nu > best[0]:
            best = (nu, {j: g.parity_index for j, g in zip(s2, choice)})
    if best is None:
        raise UnrepairableError("у одного из узлов S2 нет локальных групп")
    return best[1]


def resolve_policy(system: SecureRfcSystem, attack: AttackSpec,
                policy: Optional[RepairPolicy]) -> RepairPolicy:
    if policy is not None:
        return policy
    if attack.policy == "worst":
        return FixedGroupPolicy(worst_repair_choice(system, attack))
    return DEFAULT_POLICY


# ========== ОПЕРАЦИИ ==========

def simulate_attack(system: SecureRfcSystem, state: DssState, attack: AttackSpec,
                    policy: Optional[RepairPolicy] = None) -> EavesdropRecord:
    """
    Моделирует атаку на снимке состояния хранилища.

    Сначала читаются узлы S1, затем каждый узел S2 по очереди стирается и
    восстанавливается; перехватываются все скачанные символы и результат.

    Args:
        system: Система
        state: Состояние (не изменяется)
        attack: Атака
        policy: Политика выбора групп; по умолчанию - из attack.policy

    Returns:
        EavesdropRecord
    """
    attack.validate(system.n)
    policy = resolve_policy(system, attack, policy)
    snapshot = state.snapshot()
    observed: Dict[int, ObservedNode] = {}
    values: Dict[int, FieldElement] = {}
    for i in sorted(attack.s1):
        value = snapshot.value(i)
        if value is None:
            raise AttackError(f"узел {i} из S1 стёрт")
        observed[i] = ObservedNode(i, "storage")
        values[i] = value
    for j in sorted(attack.s2):
        dummy = snapshot.value(j)
        snapshot.contents[j - 1] = None
        result = repair_node(system, snapshot, j, policy)
        if dummy is not None and result.value != dummy:
            raise SrfcError(f"восстановление узла {j} дало неверное значение")
        for d, v in result.downloaded:
            if d not in observed:
                observed[d] = ObservedNode(d, "download", j)
                values[d] = v
        if j not in observed:
            observed[j] = ObservedNode(j, "repaired", j)
            values[j] = result.value

    nodes = tuple(observed.values())
    record = EavesdropRecord(
        observed=nodes,
        symbols=tuple(values[o.node] for o in nodes),
        points=tuple(system.effective_points[o.node - 1] for o in nodes),
    )
    logger.info(f"Атака S1={sorted(attack.s1)}, S2={sorted(attack.s2)}: "
                f"перехвачены узлы {list(record.nodes)}")
    return record


def audit(system: SecureRfcSystem, record: EavesdropRecord,
          attack: Optional[AttackSpec] = None) -> SecurityReport:
    """
    Точный аудит утечки по рангу эффективных точек.

    Returns:
        SecurityReport: H_e = ν, H_r = u, H(r|e,m) = u - min(u, ν), утечка max(0, ν - u)
    """
    nu = system.field.subfield_rank(list(record.points))
    report = make_report(system, nu, attack)
    logger.info(f"Аудит: nu={nu}, u={system.u}, утечка={report.leakage_bits:.3f} бит, "
                f"{'защищено' if report.secure else 'УТЕЧКА'}")
    return report


def audit_solution_count(system: SecureRfcSystem, record: EavesdropRecord,
                         msg: Sequence[FieldElement]) -> int:
    """
    Показатель d числа решений (q^p)^d системы e = b(z, m) + r·A(z) относительно r.

    Проверка «белого ящика»: сообщение известно. Должно быть d = u - min(u, ν).

    Raises:
        SrfcError: если система несовместна (ошибка реализации)
    """
    k, u = system.k, system.u
    if len(msg) != k:
        raise SrfcError(f"длина сообщения {len(msg)} != k={k}")
    field = system.field
    rows: List[List[FieldElement]] = []
    rhs: List[FieldElement] = []
    if record.w:
        moore = moore_matrix(list(record.points), system.k_tilde)
        for i, e in enumerate(record.symbols):
            known = field.zero()
            for j in range(k):
                known = known + msg[j] * moore[j][i]
            rows.append([moore[k + j][i] for j in range(u)])
            rhs.append(e - known)
    result = field.solve_linear(rows, rhs, num_unknowns=u)
    if not result.consistent:
        raise SrfcError("система для r несовместна: перехваченные символы не согласуются с сообщением")
    logger.debug(f"Число решений (q^p)^{result.dimension}, ранг A = {result.rank}")
    return result.dimension


def audit_attack(system: SecureRfcSystem, state: DssState, attack: AttackSpec) -> SecurityReport:
    """simulate_attack + audit с учётом политики из атаки."""
    policy = resolve_policy(system, attack, None)
    record = simulate_attack(system, state, attack, policy)
    report = audit(system, record, attack)
    if isinstance(policy, FixedGroupPolicy):
        return make_report(system, report.nu, attack, policy.choices)
    return report


# ========== АУДИТ ХУДШЕГО СЛУЧАЯ ==========

@dataclass(frozen=True)
class WorstCaseResult:
    """
    Атака с максимальной утечкой.

    Attributes:
        attack: Худшая атака
        report: Её отчёт
        evaluated: Сколько атак (с выбором групп) проверено
        skipped: Сколько отброшено из-за невосстановимых узлов S2
        exhaustive: Полный перебор или выборка
        max_nu: Наибольший ν среди проверенных атак
    """

    attack: AttackSpec
    report: SecurityReport
    evaluated: int
    skipped: int
    exhaustive: bool
    max_nu: int

    def to_dict(self) -> Dict[str, Any]:
        data = self.report.to_dict()
        data.update({
            "evaluated": self.evaluated,
            "skipped": self.skipped,
            "mode": "exhaustive" if self.exhaustive else "sampled",
            "max_nu": self.max_nu,
        })
        return data


def count_attacks(system: SecureRfcSystem, l1: int, l2: int) -> int:
    """Точное число пар (S1, S2) с учётом всех вариантов групп."""
    sizes = [len(system.inner.local_groups_of(j)) for j in range(1, system.n + 1)]
    # элементарный симметрический многочлен e_{l2}(sizes)
    elementary = [1] + [0] * l2
    for s in sizes:
        for t in range(l2, 0, -1):
            elementary[t] += elementary[t - 1] * s
    return elementary[l2] * math.comb(system.n - l2, l1)


def worst_case_audit(system: SecureRfcSystem, l1: int, l2: int,
                     budget: int = WORST_CASE_BUDGET, seed: int = DEFAULT_SEED,
                     jobs: int = 1) -> WorstCaseResult:
    """
    Максимальная утечка по всем атакам с |S1| = l1, |S2| = l2 и всем выборам групп.

    Если число вариантов больше budget, проверяется budget случайных атак.

    Args:
        system: Система
        l1, l2: Размеры S1 и S2 (могут превышать расчётные)
        budget: Предел полного перебора
        seed: Seed режима выборки
        jobs: Число потоков полного перебора

    Returns:
        WorstCaseResult
    """
    n, q = system.n, system.field.q
    if l1 < 0 or l2 < 0 or l1 + l2 > n:
        raise AttackError(f"нарушено 0 <= l1 + l2 <= n (l1={l1}, l2={l2}, n={n})")
    matrix = _points_matrix(system)
    groups = {j: system.inner.local_groups_of(j) for j in range(1, n + 1)}
    total = count_attacks(system, l1, l2)

    def evaluate(s1: Tuple[int, ...], s2: Tuple[int, ...], choice: Sequence[LocalGroup]) -> int:
        nodes = set(s1)
        for g in choice:
            nodes |= g.nodes
        nodes |= set(s2)
        return _nu_of(matrix, nodes, q)

    if total <= budget:
        s1_all = list(combinations(range(1, n + 1), l1))

        def run_chunk(chunk: Sequence[Tuple[int, Tuple[int, ...]]]):
            best = None
            evaluated = skipped = max_nu = 0
            for ordinal, s1 in chunk:
                rest = [i for i in range(1, n + 1) if i not in s1]
                for s2 in combinations(rest, l2):
                    options = [groups[j] for j in s2]
                    if any(not o for o in options):
                        skipped += 1
                        continue
                    for choice in product(*options):
                        nu = evaluate(s1, s2, choice)
                        evaluated += 1
                        max_nu = max(max_nu, nu)
                        key = (nu, -ordinal)
                        if best is None or key > best[0]:
                            best = (key, s1, s2, {j: g.parity_index for j, g in zip(s2, choice)})
            return best, evaluated, skipped, max_nu

        indexed = list(enumerate(s1_all))
        if jobs > 1:
            chunks = [indexed[i::jobs] for i in range(jobs)]
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(run_chunk, chunks))
        else:
            parts = [run_chunk(indexed)]
        exhaustive = True
    else:
        logger.warning(f"Вариантов атак {total} > бюджета {budget}: режим выборки")
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
        best = None
        evaluated = skipped = max_nu = 0
        for ordinal in range(budget):
            picked = [int(i) + 1 for i in rng.permutation(n)[:l1 + l2]]
            s1, s2 = tuple(sorted(picked[:l1])), tuple(sorted(picked[l1:]))
            options = [groups[j] for j in s2]
            if any(not o for o in options):
                skipped += 1
                continue
            choice = [o[int(rng.integers(len(o)))] for o in options]
            nu = evaluate(s1, s2, choice)
            evaluated += 1
            max_nu = max(max_nu, nu)
            key = (nu, -ordinal)
            if best is None or key > best[0]:
                best = (key, s1, s2, {j: g.parity_index for j, g in zip(s2, choice)})
        parts = [(best, evaluated, skipped, max_nu)]
        exhaustive = False

    winners = [p[0] for p in parts if p[0] is not None]
    evaluated = sum(p[1] for p in parts)
    skipped = sum(p[2] for p in parts)
    max_nu = max((p[3] for p in parts), default=0)
    if not winners:
        attack = AttackSpec.create(policy="worst")
        report = make_report(system, 0, attack)
        return WorstCaseResult(attack, report, evaluated, skipped, exhaustive, max_nu)

    best_key, s1, s2, choice = max(winners, key=lambda b: b[0])
    attack = AttackSpec.create(s1, s2, "worst")
    report = make_report(system, best_key[0], attack, choice)
    logger.info(f"Худший случай ({l1}, {l2}): nu={report.nu}, утечка={report.leakage_bits:.3f} бит, "
                f"проверено {evaluated}, режим {'полный' if exhaustive else 'выборка'}")
    return WorstCaseResult(attack, report, evaluated, skipped, exhaustive, max_nu)
