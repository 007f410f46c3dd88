import galois
import numpy as np
import pytest
from hypothesis import given, strategies as st

from srfc.errors import BudgetExceededError, FieldError
from srfc.field import (
    FieldParams,
    is_irreducible,
    is_prime,
    make_field,
    rank_mod_q,
    solve_linear,
    subfield_rank,
)

GF11_3 = make_field(11, 3)


def elements_of(field):
    return st.integers(0, field.order - 1).map(field.from_int)


# ---------------------------------------------------------
# Выбор модуля
# ---------------------------------------------------------

def test_modulus_is_smallest_irreducible():
    assert make_field(2, 3).modulus == (1, 1, 0, 1)      # x^3 + x + 1
    assert make_field(3, 2).modulus == (1, 0, 1)         # x^2 + 1
    assert make_field(2, 8).modulus == (1, 1, 0, 1, 1, 0, 0, 0, 1)  # x^8 + x^4 + x^3 + x + 1


def test_make_field_is_deterministic():
    assert make_field(5, 4) == make_field(5, 4)
    assert make_field(5, 4).modulus == FieldParams(5, 4, make_field(5, 4).modulus).modulus


def test_irreducibility_small_cases():
    assert is_irreducible([1, 1, 1], 2)          # x^2 + x + 1
    assert not is_irreducible([1, 0, 1], 2)      # (x + 1)^2
    assert not is_irreducible([0, 1, 1], 2)      # x(x + 1)
    assert not is_irreducible([1, 0, 1, 0, 1], 2)  # (x^2 + x + 1)^2


def test_invalid_parameters():
    assert not is_prime(9)
    with pytest.raises(FieldError):
        make_field(4, 2)
    with pytest.raises(FieldError):
        make_field(3, 0)
    with pytest.raises(FieldError, match="приводим"):
        FieldParams(2, 2, (1, 0, 1))
    with pytest.raises(FieldError):
        FieldParams(2, 2, (1, 1, 0))


# ---------------------------------------------------------
# Аксиомы поля (перебор)
# ---------------------------------------------------------

@pytest.mark.parametrize("q,p", [(2, 3), (3, 2)])
def test_field_axioms_exhaustive(q, p):
    field = make_field(q, p)
    elems = list(field.elements())
    assert len(elems) == field.order
    zero, one = field.zero(), field.one()
    for a in elems:
        assert a + zero == a
        assert a * one == a
        assert a * zero == zero
        assert a - a == zero
        if a:
            assert a * a.inverse() == one
        for b in elems:
            assert a + b == b + a
            assert a * b == b * a
            for c in elems:
                assert a * (b + c) == a * b + a * c
                assert (a * b) * c == a * (b * c)


def test_inverse_of_zero_raises(gf8):
    with pytest.raises(FieldError):
        gf8.zero().inverse()


def test_mixing_fields_raises(gf8, gf9):
    with pytest.raises(FieldError):
        gf8.one() + gf9.one()


def test_numbering_follows_galois_representation(gf9, gf256):
    a = gf9.element([2, 1])          # 2 + x
    assert a.to_int() == 2 + 1 * 3
    assert a.coeffs == (2, 1)
    assert gf9.GF(a.to_int()).vector().tolist() == [1, 2]
    assert gf256.GF.irreducible_poly == galois.Poly.Int(0x11B)
    assert gf256.basis(7).to_int() == 128


def test_int_numbering_roundtrip(gf9):
    assert [gf9.from_int(i).to_int() for i in range(gf9.order)] == list(range(gf9.order))
    with pytest.raises(FieldError):
        gf9.from_int(gf9.order)


@given(elements_of(GF11_3), elements_of(GF11_3), elements_of(GF11_3))
def test_distributivity_gf11_3(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(elements_of(GF11_3), st.integers(0, 10))
def test_scalar_multiplication_matches_embedding(a, c):
    assert a * c == a * GF11_3.embed(c)


# ---------------------------------------------------------
# Фробениус
# ---------------------------------------------------------

@given(elements_of(GF11_3), elements_of(GF11_3))
def test_frobenius_is_additive_and_multiplicative(a, b):
    assert (a + b).frobenius(1) == a.frobenius(1) + b.frobenius(1)
    assert (a * b).frobenius(1) == a.frobenius(1) * b.frobenius(1)


@given(elements_of(GF11_3))
def test_frobenius_has_order_p(a):
    assert a.frobenius(GF11_3.p) == a
    assert a.frobenius(2) == a ** (11 ** 2)


def test_frobenius_fixes_subfield(gf9):
    for c in range(gf9.q):
        assert gf9.embed(c).frobenius(1) == gf9.embed(c)


def test_negative_frobenius_exponent(gf8):
    with pytest.raises(FieldError):
        gf8.frobenius(gf8.one(), -1)


# ---------------------------------------------------------
# Линейная алгебра
# ---------------------------------------------------------

def test_rank_mod_q():
    assert rank_mod_q([[1, 2], [2, 4]], 5) == 1
    assert rank_mod_q([[1, 2], [2, 4]], 3) == 1
    assert rank_mod_q([[1, 0, 0], [0, 1, 0], [1, 1, 0]], 2) == 2
    assert rank_mod_q(np.zeros((0, 3)), 2) == 0


def test_subfield_rank(gf256):
    basis = [gf256.basis(i) for i in range(8)]
    assert subfield_rank(basis) == 8
    assert subfield_rank(basis + [basis[0] + basis[1]]) == 8
    assert subfield_rank([gf256.embed(1), gf256.one()]) == 1
    assert subfield_rank([basis[2], basis[5], basis[2] + basis[5]]) == 2
    assert subfield_rank([]) == 0


def test_solve_linear_unique(gf9, rng):
    a = [[gf9.random(rng) for _ in range(3)] for _ in range(3)]
    while gf9.solve_linear(a, [gf9.zero()] * 3).rank < 3:
        a = [[gf9.random(rng) for _ in range(3)] for _ in range(3)]
    x = [gf9.random(rng) for _ in range(3)]
    b = [sum((row[j] * x[j] for j in range(3)), gf9.zero()) for row in a]
    result = solve_linear(a, b)
    assert result.consistent and result.rank == 3 and result.dimension == 0
    assert list(result.solution) == x
    assert result.solution_count == 1


def test_solve_linear_inconsistent_and_underdetermined(gf9):
    one, zero = gf9.one(), gf9.zero()
    inconsistent = gf9.solve_linear([[one, one], [one, one]], [one, zero])
    assert not inconsistent.consistent
    assert inconsistent.solution is None
    assert inconsistent.solution_count == 0

    free = gf9.solve_linear([[one, one]], [one])
    assert free.consistent and free.dimension == 1
    assert free.solution_count == gf9.order
    x = free.solution
    assert x[0] + x[1] == one


def test_solve_linear_with_free_leading_unknown(gf9):
    one, zero = gf9.one(), gf9.zero()
    a = gf9.basis(1)
    # x1 свободна, x2 = a, x3 = 1
    result = gf9.solve_linear([[zero, one, zero], [zero, zero, one], [zero, one, one]], [a, one, a + one])
    assert result.consistent and result.rank == 2 and result.dimension == 1
    assert result.solution == (zero, a, one)


def test_solve_linear_without_rows(gf9):
    result = solve_linear([], [], field=gf9, num_unknowns=4)
    assert result.consistent and result.dimension == 4
    with pytest.raises(FieldError):
        solve_linear([], [])


# ---------------------------------------------------------
# Таблицы
# ---------------------------------------------------------

def test_tables_match_arithmetic(gf9):
    add_table, mul_table = gf9.tables
    for a in gf9.elements():
        for b in gf9.elements():
            assert add_table[a.to_int(), b.to_int()] == (a + b).to_int()
            assert mul_table[a.to_int(), b.to_int()] == (a * b).to_int()


def test_tables_refuse_large_fields():
    with pytest.raises(BudgetExceededError):
        make_field(11, 10).tables


def test_serialization_roundtrip(gf256):
    assert FieldParams.from_dict(gf256.to_dict()) == gf256
    assert repr(gf256) == "GF(2^8)"
