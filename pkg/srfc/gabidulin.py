"""
Модуль кодов Габидулина (N, K) над GF(q^p).

Кодирование - вычисление линеаризованного многочлена с коэффициентами-
сообщением в N линейно независимых над GF(q) точках. Декодирование стираний -
интерполяция по любым K значениям в независимых точках.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple, TypeVar

from srfc.errors import DecodingError, FieldError, InterpolationError
from srfc.field import FieldElement, FieldParams
from srfc.linearized import LinearizedPolynomial, interpolate

logger = logging.getLogger(__name__)

K_ = TypeVar("K_", bound=Hashable)


def select_independent(candidates: Sequence[Tuple[K_, FieldElement]], target: int) -> List[Tuple[K_, FieldElement]]:
    """
    Жадно выбирает точки, наращивающие ранг над GF(q), в порядке следования.

    Args:
        candidates: Пары (ключ, точка)
        target: Нужный ранг

    Returns:
        Не более target пар, точки которых независимы над GF(q)
    """
    chosen: List[Tuple[K_, FieldElement]] = []
    for key, point in candidates:
        if len(chosen) == target:
            break
        if point.field.subfield_rank([z for _, z in chosen] + [point]) > len(chosen):
            chosen.append((key, point))
    return chosen


@dataclass(frozen=True)
class GabidulinCode:
    """
    Код Габидулина (N, K).

    Attributes:
        N: Длина
        K: Размерность
        field: Поле GF(q^p)
        points: Точки вычисления y_1, ..., y_N (ранг N над GF(q))
    """

    N: int
    K: int
    field: FieldParams
    points: Tuple[FieldElement, ...]

    def __post_init__(self):
        if not 1 <= self.K <= self.N:
            raise FieldError(f"нарушено 1 <= K <= N (K={self.K}, N={self.N})")
        if self.N > self.field.p:
            raise FieldError(f"нарушено N <= p (N={self.N}, p={self.field.p})")
        if len(self.points) != self.N:
            raise FieldError(f"нужно {self.N} точек, получено {len(self.points)}")
        if self.field.subfield_rank(self.points) != self.N:
            raise FieldError("точки кода Габидулина линейно зависимы над GF(q)")

    @property
    def min_rank_distance(self) -> int:
        """D_min = N - K + 1 (код достигает границы Синглтона)."""
        return self.N - self.K + 1

    def polynomial(self, msg: Sequence[FieldElement]) -> LinearizedPolynomial:
        if len(msg) != self.K:
            raise FieldError(f"длина сообщения {len(msg)} != K={self.K}")
        return LinearizedPolynomial(tuple(msg), self.field)

    def encode(self, msg: Sequence[FieldElement]) -> List[FieldElement]:
        """
        Кодирует сообщение: codeword[i] = f(y_i), f(y) = Σ m_i · y^(q^(i-1)).

        Args:
            msg: K символов

        Returns:
            N символов кодового слова
        """
        f = self.polynomial(msg)
        return [f.evaluate(y) for y in self.points]

    def decode_at_points(self, pairs: Sequence[Tuple[FieldElement, FieldElement]]) -> List[FieldElement]:
        """
        Декодирует по значениям в произвольных точках (эффективные точки).

        Args:
            pairs: Пары (точка z, значение f(z))

        Returns:
            K коэффициентов f

        Raises:
            DecodingError: если среди точек нет K независимых
        """
        chosen = select_independent([(i, z) for i, (z, _) in enumerate(pairs)], self.K)
        if len(chosen) < self.K:
            logger.warning(f"Декодирование невозможно: ранг точек {len(chosen)} < K={self.K}")
            raise DecodingError(f"доступно только {len(chosen)} независимых точек из {self.K}")
        points = [pairs[i][0] for i, _ in chosen]
        values = [pairs[i][1] for i, _ in chosen]
        try:
            f = interpolate(points, values, self.K)
        except InterpolationError as e:
            raise DecodingError(str(e)) from e
        return list(f.coeffs)

    def decode(self, available: Sequence[Tuple[int, FieldElement]]) -> List[FieldElement]:
        """
        Декодирование стираний по доступным позициям кода.

        Args:
            available: Пары (позиция 1..N, значение)

        Returns:
            Исходное сообщение из K символов
        """
        pairs = []
        for index, value in available:
            if not 1 <= index <= self.N:
                raise DecodingError(f"позиция {index} вне [1, {self.N}]")
            pairs.append((self.points[index - 1], value))
        return self.decode_at_points(pairs)

    def to_dict(self) -> Dict[str, Any]:
        return {"N": self.N, "K": self.K, "points": [y.to_list() for y in self.points]}


def gab_new(field: FieldParams, N: int, K: int,
            points: Optional[Sequence[FieldElement]] = None) -> GabidulinCode:
    """
    Создаёт код (N, K); по умолчанию точки - полиномиальный базис 1, x, ..., x^(N-1).
    """
    if N > field.p:
        raise FieldError(f"нарушено N <= p (N={N}, p={field.p})")
    if points is None:
        points = [field.basis(i) for i in range(N)]
    code = GabidulinCode(N, K, field, tuple(points))
    logger.debug(f"Создан код Габидулина ({N}, {K}) над {field}")
    return code


def gab_encode(code: GabidulinCode, msg: Sequence[FieldElement]) -> List[FieldElement]:
    return code.encode(msg)


def gab_decode(code: GabidulinCode, available: Sequence[Tuple[int, FieldElement]]) -> List[FieldElement]:
    return code.decode(available)
