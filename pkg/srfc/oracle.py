"""
Независимый оракул взаимной информации I(m; e) полным перебором.

Перебираются все q^(p·k̃) векторов m̃ = (m, r); для каждого вычисляются
перехваченные символы через таблицы сложения и умножения поля, без
эффективных точек. Совместное распределение (m, e) считается точно,
в биты переводится только итоговая сумма.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from config import MI_ORACLE_BUDGET
from srfc.eavesdropper import AttackSpec, resolve_policy, plan_attack
from srfc.errors import BudgetExceededError
from srfc.linearized import moore_matrix
from srfc.rfc import RepairPolicy
from srfc.secure import SecureRfcSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    """
    Результат перебора.

    Attributes:
        bits: I(m; e) в битах
        H_e_bits: H(e) в битах
        states: Число перебранных векторов m̃
        nodes: Перехваченные узлы в порядке записи
        marginals: Узел -> гистограмма значений его символа (длины q^p)
    """

    bits: float
    H_e_bits: float
    states: int
    nodes: Tuple[int, ...]
    marginals: Dict[int, np.ndarray]

    def is_uniform(self, node: int) -> bool:
        """Равномерно ли распределён символ узла по GF(q^p)."""
        hist = self.marginals[node]
        return bool(np.all(hist == hist[0]))


def oracle_states(system: SecureRfcSystem) -> int:
    return system.field.order ** system.k_tilde


def _log2_ratio(ratio: Fraction) -> float:
    if ratio == 1:
        return 0.0
    return math.log2(ratio.numerator) - math.log2(ratio.denominator)


def mi_oracle(system: SecureRfcSystem, attack: AttackSpec,
              policy: Optional[RepairPolicy] = None,
              budget: int = MI_ORACLE_BUDGET) -> OracleResult:
    """
    Точная I(m; e) для равномерных m и r.

    Args:
        system: Система (q^p не больше FIELD_TABLE_LIMIT)
        attack: Атака
        policy: Политика восстановления; по умолчанию - из attack.policy
        budget: Предел числа перебираемых векторов m̃

    Returns:
        OracleResult

    Raises:
        BudgetExceededError: если (q^p)^k̃ > budget или поле слишком велико для таблиц
    """
    field = system.field
    Q, k_tilde, k = field.order, system.k_tilde, system.k
    states = oracle_states(system)
    if states > budget:
        raise BudgetExceededError(f"перебор (q^p)^k_tilde={states} превышает бюджет {budget}")

    observed = plan_attack(system, attack, resolve_policy(system, attack, policy))
    nodes = tuple(o.node for o in observed)
    if not nodes:
        return OracleResult(0.0, 0.0, states, nodes, {})

    add_table, mul_table = field.tables
    idx = np.arange(states, dtype=np.int64)
    digits = [(idx // Q ** j) % Q for j in range(k_tilde)]

    # промежуточный символ x_i = Σ_j m̃_j · y_i^(q^j)
    moore = moore_matrix(list(system.outer.points), k_tilde)
    intermediate = []
    for i in range(k_tilde):
        acc = np.zeros(states, dtype=np.int64)
        for j in range(k_tilde):
            acc = add_table[acc, mul_table[digits[j], moore[j][i].to_int()]]
        intermediate.append(acc)

    columns = []
    for node in nodes:
        if system.inner.is_systematic(node):
            columns.append(intermediate[node - 1])
            continue
        group = system.inner.group_of_parity(node)
        acc = np.zeros(states, dtype=np.int64)
        for member, coeff in zip(group.member_indices, group.coefficients):
            acc = add_table[acc, mul_table[intermediate[member - 1], field.embed(coeff).to_int()]]
        columns.append(acc)
    e = np.stack(columns, axis=1)

    _, e_ids, e_counts = np.unique(e, axis=0, return_inverse=True, return_counts=True)
    e_ids = e_ids.reshape(-1)
    m_key = idx % Q ** k
    joint_keys, joint_counts = np.unique(m_key * len(e_counts) + e_ids, return_counts=True)
    c_e = e_counts[joint_keys % len(e_counts)]

    # P(m) = Q^u / states для каждого m
    per_message = states // Q ** k
    bits = 0.0
    for (cnt, ce), times in Counter(zip(joint_counts.tolist(), c_e.tolist())).items():
        ratio = Fraction(cnt * states, per_message * ce)
        bits += cnt * times / states * _log2_ratio(ratio)

    h_e = 0.0
    for ce, times in Counter(e_counts.tolist()).items():
        h_e += ce * times / states * _log2_ratio(Fraction(states, ce))

    marginals = {node: np.bincount(e[:, t], minlength=Q) for t, node in enumerate(nodes)}
    logger.info(f"Оракул: {states} состояний, узлы {list(nodes)}, I(m;e)={bits:.6f} бит, H(e)={h_e:.6f} бит")
    return OracleResult(bits, h_e, states, nodes, marginals)
