"""
Модуль конечных полей GF(q) и GF(q^p) поверх библиотеки galois.

Элемент GF(q^p) хранится как целый номер в представлении galois:
номер = Σ a_i·q^i, где a_0, ..., a_(p-1) - координаты в полиномиальном
базисе {1, x, ..., x^(p-1)} (свободный член первым). Поле задаётся
унитарным неприводимым многочленом степени p - модулем.

Помимо арифметики здесь живёт линейная алгебра:
- ранг набора элементов над подполем GF(q) (subfield_rank)
- решение линейных систем над GF(q^p) (solve_linear)
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Type

import galois
import numpy as np

from config import FIELD_TABLE_LIMIT
from srfc.errors import BudgetExceededError, FieldError

# Настраиваем логирование
logger = logging.getLogger(__name__)


# ========== ПРОСТЫЕ ПОЛЯ И МНОГОЧЛЕНЫ НАД НИМИ ==========

def is_prime(n: int) -> bool:
    return n >= 2 and bool(galois.is_prime(int(n)))


@lru_cache(maxsize=None)
def prime_field(q: int) -> Type[galois.FieldArray]:
    """Класс galois для GF(q)."""
    if not is_prime(q):
        raise FieldError(f"q={q} должно быть простым")
    return galois.GF(q)


def _poly(coeffs: Sequence[int], q: int) -> galois.Poly:
    # galois хранит коэффициенты от старшего к свободному
    return galois.Poly([int(c) % q for c in reversed(coeffs)], field=prime_field(q))


def is_irreducible(modulus: Sequence[int], q: int) -> bool:
    """
    Проверяет неприводимость многочлена над GF(q).

    Args:
        modulus: Коэффициенты, свободный член первым
        q: Характеристика

    Returns:
        True если многочлен неприводим
    """
    poly = _poly(modulus, q)
    if poly.degree < 1:
        return False
    return bool(poly.is_irreducible())


def rank_mod_q(matrix: Any, q: int) -> int:
    """
    Ранг целочисленной матрицы над GF(q).

    Args:
        matrix: Двумерный массив (строки - векторы над GF(q))
        q: Простой модуль

    Returns:
        Ранг над GF(q)
    """
    m = np.array(matrix, dtype=np.int64) % q
    if m.ndim != 2 or m.size == 0:
        return 0
    return int(np.linalg.matrix_rank(prime_field(q)(m)))


# ========== ПОЛЕ И ЕГО ЭЛЕМЕНТЫ ==========

@dataclass(frozen=True, repr=False)
class FieldElement:
    """
    Элемент GF(q^p) по номеру в представлении galois.

    Поддерживает операторы +, -, *, /, ** и умножение на целое число
    (элемент подполя GF(q)).
    """

    value: int
    field: "FieldParams"

    def _other(self, other: Any) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, np.integer)):
            return self.field.embed(int(other))
        return NotImplemented

    def __add__(self, other: Any) -> "FieldElement":
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.field.add(self, other)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "FieldElement":
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.field.sub(self, other)

    def __rsub__(self, other: Any) -> "FieldElement":
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.field.sub(other, self)

    def __neg__(self) -> "FieldElement":
        return self.field.neg(self)

    def __mul__(self, other: Any) -> "FieldElement":
        if isinstance(other, (int, np.integer)):
            return self.field.scale(self, int(other))
        if isinstance(other, FieldElement):
            return self.field.mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "FieldElement":
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.field.mul(self, self.field.inv(other))

    def __pow__(self, exponent: int) -> "FieldElement":
        return self.field.pow(self, exponent)

    def __bool__(self) -> bool:
        return self.value != 0

    def inverse(self) -> "FieldElement":
        return self.field.inv(self)

    def frobenius(self, e: int = 1) -> "FieldElement":
        return self.field.frobenius(self, e)

    def to_int(self) -> int:
        return self.value

    @property
    def coeffs(self) -> Tuple[int, ...]:
        """p координат над GF(q), свободный член первым."""
        return self.field.coordinates(self)

    @property
    def in_subfield(self) -> bool:
        """Лежит ли элемент во вложенном подполе GF(q)."""
        return self.value < self.field.q

    def to_list(self) -> List[int]:
        return list(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            if power == 0:
                terms.append(str(c))
            else:
                mono = "x" if power == 1 else f"x^{power}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class LinearSolution:
    """
    Результат solve_linear.

    Attributes:
        rank: Ранг матрицы системы над GF(q^p)
        consistent: Совместна ли система
        solution: Одно частное решение (None для несовместной системы)
        dimension: Размерность пространства решений; решений (q^p)^dimension
        num_unknowns: Число неизвестных
    """

    rank: int
    consistent: bool
    solution: Optional[Tuple[FieldElement, ...]]
    dimension: int
    num_unknowns: int
    order: int

    @property
    def solution_count(self) -> int:
        return self.order ** self.dimension if self.consistent else 0


@dataclass(frozen=True)
class FieldParams:
    """
    Поле GF(q^p) вместе со структурой подполя GF(q).

    Attributes:
        q: Простая характеристика
        p: Степень расширения
        modulus: p+1 коэффициентов унитарного неприводимого многочлена,
            свободный член первым
    """

    q: int
    p: int
    modulus: Tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.q):
            raise FieldError(f"q={self.q} должно быть простым")
        if self.p < 1:
            raise FieldError(f"нарушено p >= 1 (p={self.p})")
        if len(self.modulus) != self.p + 1 or self.modulus[-1] != 1:
            raise FieldError(f"модуль должен быть унитарным многочленом степени {self.p}")
        if any(not 0 <= c < self.q for c in self.modulus):
            raise FieldError(f"коэффициенты модуля должны лежать в [0, {self.q})")
        if not is_irreducible(self.modulus, self.q):
            raise FieldError(f"модуль {list(self.modulus)} приводим над GF({self.q})")

    # ---------- Служебные величины ----------

    @cached_property
    def order(self) -> int:
        return self.q ** self.p

    @cached_property
    def unit_bits(self) -> float:
        """Энтропия одного равномерного символа: p·log2(q) бит."""
        return self.p * float(np.log2(self.q))

    @cached_property
    def GF(self) -> Type[galois.FieldArray]:
        """Класс массивов galois для GF(q^p) с нашим модулем."""
        if self.p == 1:
            return prime_field(self.q)
        cls = galois.GF(self.order, irreducible_poly=_poly(self.modulus, self.q))
        logger.debug(f"Построен класс galois {cls.name} для модуля {list(self.modulus)}")
        return cls

    def _make(self, value: Any) -> FieldElement:
        return FieldElement(int(value), self)

    def _array(self, *elems: FieldElement) -> galois.FieldArray:
        self._check(*elems)
        return self.GF([e.value for e in elems])

    def _check(self, *elems: FieldElement) -> None:
        for e in elems:
            if not isinstance(e, FieldElement) or e.field != self:
                raise FieldError("операнды принадлежат разным полям")

    def _vectors(self, elems: Sequence[FieldElement]) -> galois.FieldArray:
        # строки - координаты над GF(q) (старшая первой, как в galois)
        values = self._array(*elems)
        if self.p == 1:
            return values.reshape(-1, 1)
        return values.vector()

    # ---------- Конструкторы элементов ----------

    def element(self, coeffs: Sequence[int]) -> FieldElement:
        """
        Создаёт элемент из координат в полиномиальном базисе.

        Args:
            coeffs: Не более p целых чисел, свободный член первым

        Returns:
            Элемент поля (координаты приводятся по модулю q)
        """
        coeffs = [int(c) % self.q for c in coeffs]
        if len(coeffs) > self.p:
            raise FieldError(f"у элемента GF({self.q}^{self.p}) не больше {self.p} координат")
        coeffs += [0] * (self.p - len(coeffs))
        if self.p == 1:
            return self._make(coeffs[0])
        return self._make(self.GF.Vector(coeffs[::-1]))

    def zero(self) -> FieldElement:
        return self._make(0)

    def one(self) -> FieldElement:
        return self._make(1)

    def embed(self, c: int) -> FieldElement:
        """Вложение GF(q) -> GF(q^p)."""
        return self._make(c % self.q)

    def basis(self, i: int) -> FieldElement:
        """Элемент x^i полиномиального базиса, 0 <= i < p."""
        if not 0 <= i < self.p:
            raise FieldError(f"базисный индекс {i} вне [0, {self.p})")
        return self._make(self.q ** i)

    def from_int(self, n: int) -> FieldElement:
        """Элемент по номеру в представлении galois."""
        if not 0 <= n < self.order:
            raise FieldError(f"номер элемента {n} вне [0, {self.order})")
        return self._make(n)

    def to_int(self, a: FieldElement) -> int:
        self._check(a)
        return a.value

    def coordinates(self, a: FieldElement) -> Tuple[int, ...]:
        """Координаты над GF(q), свободный член первым."""
        self._check(a)
        if self.p == 1:
            return (a.value,)
        return tuple(int(c) for c in self.GF(a.value).vector()[::-1])

    def random(self, rng: np.random.Generator) -> FieldElement:
        """Равномерно случайный элемент GF(q^p)."""
        return self.element(rng.integers(0, self.q, size=self.p))

    def elements(self) -> Iterator[FieldElement]:
        """Все q^p элементов в порядке номеров (только для маленьких полей)."""
        for n in range(self.order):
            yield self._make(n)

    # ---------- Арифметика ----------

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        x, y = self._array(a, b)
        return self._make(x + y)

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        x, y = self._array(a, b)
        return self._make(x - y)

    def neg(self, a: FieldElement) -> FieldElement:
        return self._make(-self._array(a)[0])

    def scale(self, a: FieldElement, c: int) -> FieldElement:
        """Умножение на скаляр из GF(q)."""
        # целочисленный множитель в galois - кратное сложение, то есть элемент GF(q)
        return self._make(self._array(a)[0] * (c % self.q))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        x, y = self._array(a, b)
        return self._make(x * y)

    def pow(self, a: FieldElement, exponent: int) -> FieldElement:
        if exponent < 0:
            return self.pow(self.inv(a), -exponent)
        return self._make(self._array(a)[0] ** exponent)

    def inv(self, a: FieldElement) -> FieldElement:
        self._check(a)
        if not a:
            raise FieldError("обращение нулевого элемента")
        return self._make(np.reciprocal(self._array(a))[0])

    def frobenius(self, a: FieldElement, e: int = 1) -> FieldElement:
        """
        Отображение Фробениуса a -> a^(q^e).

        Args:
            a: Элемент поля
            e: Неотрицательный показатель (берётся по модулю p, так как a^(q^p) = a)

        Returns:
            a^(q^e)
        """
        self._check(a)
        if e < 0:
            raise FieldError("показатель Фробениуса должен быть неотрицательным")
        return self.pow(a, self.q ** (e % self.p))

    # ---------- Линейная алгебра ----------

    def subfield_rank(self, elems: Sequence[FieldElement]) -> int:
        """
        Размерность над GF(q) линейной оболочки элементов.

        Каждый элемент рассматривается как вектор длины p над GF(q).

        Args:
            elems: Элементы этого поля

        Returns:
            0 <= ранг <= min(len(elems), p)
        """
        if not elems:
            return 0
        return int(np.linalg.matrix_rank(self._vectors(elems)))

    def solve_linear(self, matrix: Sequence[Sequence[FieldElement]],
                     rhs: Sequence[FieldElement],
                     num_unknowns: Optional[int] = None) -> LinearSolution:
        """
        Решает A·x = b над GF(q^p) приведением [A | b] к ступенчатому виду.

        Несовместность - допустимое состояние результата, а не ошибка.

        Args:
            matrix: Строки матрицы A
            rhs: Правая часть b
            num_unknowns: Число неизвестных (обязательно, если строк нет)

        Returns:
            LinearSolution с рангом, частным решением и размерностью
        """
        rows = len(matrix)
        if len(rhs) != rows:
            raise FieldError(f"число строк {rows} не совпадает с длиной правой части {len(rhs)}")
        if num_unknowns is None:
            num_unknowns = len(matrix[0]) if rows else 0
        for row, b in zip(matrix, rhs):
            if len(row) != num_unknowns:
                raise FieldError("строки матрицы разной длины")
            self._check(*row, b)

        def result(rank: int, solution: Optional[List[int]]) -> LinearSolution:
            return LinearSolution(
                rank=rank,
                consistent=solution is not None,
                solution=tuple(self._make(v) for v in solution) if solution is not None else None,
                dimension=num_unknowns - rank,
                num_unknowns=num_unknowns,
                order=self.order,
            )

        if rows == 0:
            return result(0, [0] * num_unknowns)
        if num_unknowns == 0:
            return result(0, [] if not any(rhs) else None)

        aug = self.GF([[v.value for v in row] + [b.value] for row, b in zip(matrix, rhs)])
        reduced = aug.row_reduce().view(np.ndarray)
        solution = [0] * num_unknowns
        rank = 0
        for line in reduced:
            nonzero = np.flatnonzero(line)
            if nonzero.size == 0:
                break
            pivot = int(nonzero[0])
            if pivot == num_unknowns:
                logger.debug(f"Система несовместна: ранг {rank}, ведущий элемент в правой части")
                return result(rank, None)
            solution[pivot] = int(line[num_unknowns])
            rank += 1
        return result(rank, solution)

    # ---------- Таблицы для векторизованного перебора ----------

    @cached_property
    def tables(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Плотные таблицы сложения и умножения по номерам элементов.

        Returns:
            (add_table, mul_table), обе формы (q^p, q^p)
        """
        size = self.order
        if size > FIELD_TABLE_LIMIT:
            raise BudgetExceededError(
                f"q^p={size} превышает FIELD_TABLE_LIMIT={FIELD_TABLE_LIMIT}"
            )
        elems = self.GF(np.arange(size))
        add_table = (elems[:, None] + elems[None, :]).view(np.ndarray).astype(np.int64)
        mul_table = (elems[:, None] * elems[None, :]).view(np.ndarray).astype(np.int64)
        logger.info(f"Построены таблицы GF({self.q}^{self.p}): {size}x{size}")
        return add_table, mul_table

    # ---------- Сериализация ----------

    def to_dict(self) -> Dict[str, Any]:
        return {"q": self.q, "p": self.p, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FieldParams":
        return cls(int(data["q"]), int(data["p"]), tuple(int(c) for c in data["modulus"]))

    def __repr__(self) -> str:
        return f"GF({self.q}^{self.p})"


@lru_cache(maxsize=None)
def make_field(q: int, p: int) -> FieldParams:
    """
    Детерминированно строит GF(q^p).

    Модуль - лексикографически наименьший унитарный неприводимый многочлен
    степени p (коэффициенты сравниваются от старшего к свободному члену).
    Для p = 1 это x.

    Args:
        q: Простое основание
        p: Степень расширения

    Returns:
        FieldParams
    """
    if not is_prime(q):
        raise FieldError(f"q={q} должно быть простым")
    if p < 1:
        raise FieldError(f"нарушено p >= 1 (p={p})")
    if p == 1:
        coeffs: Tuple[int, ...] = (0, 1)
    else:
        poly = galois.irreducible_poly(q, p, method="min")
        coeffs = tuple(int(c) for c in poly.coeffs[::-1])
    field = FieldParams(q, p, coeffs)
    logger.info(f"Выбран модуль для {field}: {list(coeffs)}")
    return field


# ========== ФУНКЦИИ-ОБЁРТКИ ==========

def frobenius(a: FieldElement, e: int = 1) -> FieldElement:
    return a.field.frobenius(a, e)


def subfield_rank(elems: Sequence[FieldElement]) -> int:
    if not elems:
        return 0
    return elems[0].field.subfield_rank(elems)


def solve_linear(matrix: Sequence[Sequence[FieldElement]], rhs: Sequence[FieldElement],
                 field: Optional[FieldParams] = None,
                 num_unknowns: Optional[int] = None) -> LinearSolution:
    """Обёртка над FieldParams.solve_linear, поле берётся из элементов."""
    if field is None:
        source = list(rhs) or [v for row in matrix for v in row]
        if not source:
            raise FieldError("пустая система: укажите поле явно")
        field = source[0].field
    return field.solve_linear(matrix, rhs, num_unknowns)
