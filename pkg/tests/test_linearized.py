import pytest
from hypothesis import given, strategies as st

from srfc.errors import FieldError, InterpolationError
from srfc.field import make_field
from srfc.linearized import LinearizedPolynomial, evaluate, interpolate, moore_matrix

GF5_4 = make_field(5, 4)


def elements():
    return st.integers(0, GF5_4.order - 1).map(GF5_4.from_int)


def polynomials(max_coeffs=4):
    return st.lists(elements(), min_size=1, max_size=max_coeffs).map(
        lambda cs: LinearizedPolynomial.from_coeffs(cs, GF5_4)
    )


@given(polynomials(), elements(), elements(), st.integers(0, 4), st.integers(0, 4))
def test_evaluation_is_subfield_linear(f, x, y, a, b):
    assert f(x * a + y * b) == f(x) * a + f(y) * b


@given(elements())
def test_identity_polynomial(y):
    assert LinearizedPolynomial.identity(GF5_4)(y) == y


def test_evaluate_matches_definition(gf9):
    a0, a1 = gf9.basis(1), gf9.embed(2)
    f = LinearizedPolynomial((a0, a1), gf9)
    for y in gf9.elements():
        assert evaluate(f, y) == a0 * y + a1 * y ** gf9.q


def test_normalization_drops_leading_zeros(gf9):
    f = LinearizedPolynomial((gf9.one(), gf9.zero(), gf9.zero()), gf9)
    assert f.degree == 2
    g = f.normalized()
    assert g.degree == 0
    assert not LinearizedPolynomial((gf9.zero(),), gf9).normalized().coeffs
    assert LinearizedPolynomial((), gf9).is_zero


def test_coefficients_from_other_field(gf8, gf9):
    with pytest.raises(FieldError):
        LinearizedPolynomial((gf8.one(),), gf9)


def test_moore_matrix_rows_are_frobenius_powers():
    points = [GF5_4.basis(1), GF5_4.basis(2) + GF5_4.one()]
    m = moore_matrix(points, 3)
    assert len(m) == 3 and all(len(row) == 2 for row in m)
    for j in range(3):
        for i, z in enumerate(points):
            assert m[j][i] == z ** (5 ** j)
    with pytest.raises(FieldError):
        moore_matrix(points, 0)


@given(polynomials(max_coeffs=4), st.data())
def test_interpolation_recovers_polynomial(f, data):
    k = len(f.coeffs)
    # независимые точки: образ базиса под случайной обратимой заменой
    offset = data.draw(st.integers(1, 4))
    points = [GF5_4.basis(i) + GF5_4.basis((i + 1) % 4) * offset for i in range(k)]
    if GF5_4.subfield_rank(points) < k:
        points = [GF5_4.basis(i) for i in range(k)]
    g = interpolate(points, [f(z) for z in points], k)
    assert g.coeffs == f.coeffs


def test_interpolation_rejects_dependent_points():
    z = GF5_4.basis(1)
    with pytest.raises(InterpolationError):
        interpolate([z, z * 2], [GF5_4.one(), GF5_4.one()], 2)
    with pytest.raises(InterpolationError):
        interpolate([z], [GF5_4.one(), GF5_4.one()], 2)


def test_roots_form_subfield_subspace(gf8):
    # y^2 - y: корни - ровно GF(2)
    f = LinearizedPolynomial((-gf8.one(), gf8.one()), gf8)
    roots = f.roots()
    assert sorted(r.to_int() for r in roots) == [0, 1]


def test_roots_closed_under_addition(gf9):
    f = LinearizedPolynomial((gf9.basis(1), gf9.one()), gf9)
    roots = f.roots()
    assert len(roots) in (1, 3, 9)
    for a in roots:
        for b in roots:
            assert not f(a + b)
