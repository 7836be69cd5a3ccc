from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from simfactor import _solve
from simfactor.arith import squarefree_part
from simfactor.local import is_isotropic_ints

sqf = st.integers(-60, 60).filter(lambda n: n != 0).map(squarefree_part)


def test_split_square():
    k, s = _solve.split_square(Fraction(-50, 9))
    assert k == -2 and s == Fraction(5, 3)


@pytest.mark.parametrize("A, B", [(2, 7), (-1, 2), (5, 11), (13, -3), (-7, 2), (3, 1)])
def test_legendre_descent(A, B):
    if not is_isotropic_ints([1, -A, -B]):
        pytest.skip("no solution")
    x, y, z = _solve._legendre(A, B)
    assert (x, y, z) != (0, 0, 0)
    assert x * x == A * y * y + B * z * z


@given(sqf, sqf, sqf)
def test_ternary_zero_on_isotropic_ternaries(a, b, c):
    assume(is_isotropic_ints([a, b, c]))
    v = _solve.ternary_zero(a, b, c)
    assert any(v) and a * v[0] ** 2 + b * v[1] ** 2 + c * v[2] ** 2 == 0


@given(st.lists(sqf, min_size=3, max_size=7))
def test_integer_zero_any_dimension(k):
    assume(is_isotropic_ints(k))
    v = _solve.integer_zero(k)
    assert any(v)
    assert sum(ki * vi * vi for ki, vi in zip(k, v)) == 0


def test_isotropic_vector_with_rational_coefficients():
    coeffs = [Fraction(1, 2), Fraction(-9, 8), Fraction(3)]
    v = _solve.isotropic_vector(coeffs)
    assert any(v) and sum(c * x * x for c, x in zip(coeffs, v)) == 0


def test_sqrt_mod_squarefree():
    mod = 3 * 5 * 7 * 11
    r = _solve._sqrt_mod_squarefree(4, mod)
    assert (r * r - 4) % mod == 0
    assert _solve._sqrt_mod_squarefree(2, 3) is None


def test_nullspace_and_orthogonal_complement():
    ns = _solve.nullspace([[1, 1, 0]], 3)
    assert len(ns) == 2
    for v in ns:
        assert v[0] + v[1] == 0
    coeffs = [1, 1, -2, -3]
    vals, vecs = _solve.orthogonal_complement(coeffs, [[1, 2, 0, 1]])
    assert len(vals) == 3
    for val, v in zip(vals, vecs):
        assert _solve.diag_bilinear(coeffs, v, [1, 2, 0, 1]) == 0
        assert _solve.diag_bilinear(coeffs, v, v) == val


def test_diagonalize_handles_isotropic_start():
    coeffs = [1, -1, 2]
    vals, vecs = _solve.diagonalize(coeffs, [[1, 1, 0], [1, -1, 0], [0, 0, 1]])
    assert all(v != 0 for v in vals)
    for i in range(3):
        for j in range(i):
            assert _solve.diag_bilinear(coeffs, vecs[i], vecs[j]) == 0


def test_complement_of_isotropic_line_is_degenerate():
    with pytest.raises(ValueError):
        _solve.orthogonal_complement([1, 1, -2, -3], [[1, 1, 1, 0]])


def test_diagonalize_rejects_degenerate_span():
    with pytest.raises(ValueError):
        _solve.diagonalize([1, -1], [[1, 1]])
