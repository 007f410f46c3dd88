"""
Модуль линеаризованных многочленов f(y) = Σ a_i · y^(q^i) над GF(q^p).

Такие многочлены GF(q)-линейны как отображения GF(q^p) -> GF(q^p):
линейная комбинация значений с коэффициентами из GF(q) есть значение
в соответствующей комбинации точек. На этом держатся коды Габидулина
и расчёт эффективных точек хранимых символов.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from srfc.errors import FieldError, InterpolationError
from srfc.field import FieldElement, FieldParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearizedPolynomial:
    """
    Линеаризованный многочлен, заданный вектором коэффициентов (a_0, ..., a_t).

    Нулевой многочлен допустим (пустой или нулевой вектор); нормализация
    (отбрасывание старших нулей) - отдельная явная операция.
    """

    coeffs: Tuple[FieldElement, ...]
    field: FieldParams

    def __post_init__(self):
        for a in self.coeffs:
            if a.field != self.field:
                raise FieldError("коэффициенты многочлена из другого поля")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[FieldElement], field: FieldParams) -> "LinearizedPolynomial":
        return cls(tuple(coeffs), field)

    @classmethod
    def identity(cls, field: FieldParams) -> "LinearizedPolynomial":
        """f(y) = y."""
        return cls((field.one(),), field)

    @property
    def degree(self) -> int:
        """Параметр t = len(coeffs) - 1 (до нормализации)."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def normalized(self) -> "LinearizedPolynomial":
        """Копия без старших нулевых коэффициентов, так что a_t != 0."""
        coeffs = list(self.coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        return LinearizedPolynomial(tuple(coeffs), self.field)

    def evaluate(self, y: FieldElement) -> FieldElement:
        """
        Вычисляет f(y) = Σ a_i · y^(q^i).

        Степени y^(q^i) получаются лесенкой Фробениуса: каждая следующая -
        q-я степень предыдущей.

        Args:
            y: Точка из поля многочлена

        Returns:
            Значение f(y)
        """
        if y.field != self.field:
            raise FieldError("точка из другого поля")
        result = self.field.zero()
        power = y
        for i, a in enumerate(self.coeffs):
            if i:
                power = self.field.frobenius(power, 1)
            if a:
                result = result + a * power
        return result

    __call__ = evaluate

    def roots(self) -> List[FieldElement]:
        """Все корни перебором (только для маленьких полей)."""
        return [y for y in self.field.elements() if not self.evaluate(y)]

    def to_lists(self) -> List[List[int]]:
        return [a.to_list() for a in self.coeffs]


def evaluate(f: LinearizedPolynomial, y: FieldElement) -> FieldElement:
    return f.evaluate(y)


def moore_matrix(points: Sequence[FieldElement], rows: int) -> List[List[FieldElement]]:
    """
    Матрица Мура: M[j][i] = points[i]^(q^j), j = 0..rows-1.

    Args:
        points: Точки z_1, ..., z_w
        rows: Число строк (>= 1)

    Returns:
        Матрица rows x len(points)
    """
    if rows < 1:
        raise FieldError("матрица Мура должна иметь хотя бы одну строку")
    matrix = [list(points)]
    for _ in range(1, rows):
        matrix.append([z.frobenius(1) for z in matrix[-1]])
    return matrix


def interpolate(points: Sequence[FieldElement], values: Sequence[FieldElement],
                num_coeffs: int) -> LinearizedPolynomial:
    """
    Интерполяция: единственный f с num_coeffs коэффициентами, f(points[i]) = values[i].

    Решает систему Мура через solve_linear.

    Args:
        points: num_coeffs точек, линейно независимых над GF(q)
        values: Значения в этих точках
        num_coeffs: Число коэффициентов K

    Returns:
        Восстановленный многочлен

    Raises:
        InterpolationError: если точки зависимы над GF(q)
    """
    if len(points) != num_coeffs or len(values) != num_coeffs:
        raise InterpolationError(
            f"нужно ровно {num_coeffs} точек и значений, получено {len(points)} и {len(values)}"
        )
    if num_coeffs == 0:
        raise InterpolationError("интерполяция по пустому набору точек")
    field = points[0].field
    rank = field.subfield_rank(points)
    if rank < num_coeffs:
        logger.warning(f"Интерполяция невозможна: ранг точек {rank} < {num_coeffs}")
        raise InterpolationError(f"точки линейно зависимы над GF({field.q}): ранг {rank} < {num_coeffs}")

    moore = moore_matrix(points, num_coeffs)
    # строка i системы: Σ_j a_j · points[i]^(q^j) = values[i]
    system = [[moore[j][i] for j in range(num_coeffs)] for i in range(num_coeffs)]
    result = field.solve_linear(system, list(values))
    if not result.consistent or result.dimension != 0:
        raise InterpolationError("система Мура вырождена")
    logger.debug(f"Интерполирован многочлен с {num_coeffs} коэффициентами")
    return LinearizedPolynomial(result.solution, field)
