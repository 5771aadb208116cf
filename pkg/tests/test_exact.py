from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborlab import exact
from gaborlab.errors import ParseError


@pytest.mark.parametrize("text, value", [
    ("1/2", Fraction(1, 2)),
    ("-3/6", Fraction(-1, 2)),
    ("0.7", Fraction(7, 10)),
    ("2", Fraction(2)),
    (" 0.125 ", Fraction(1, 8)),
    ("0.000000000001", Fraction(1, 10 ** 12)),
])
def test_parse_rational(text, value):
    assert exact.parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1e-3", "0.1234567890123", "1/2/3", "nan"])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        exact.parse_rational(text)


def test_format_round_trip():
    for x in [Fraction(1, 3), Fraction(-7, 2), Fraction(5)]:
        assert exact.parse_rational(exact.format_rational(x)) == x


small_ints = st.integers(min_value=-6, max_value=6)


def square(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)


@settings(max_examples=60, deadline=None)
@given(square(3))
def test_det_matches_sympy(m):
    assert exact.det(m) == sympy.Matrix(m).det()


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_hnf_is_unimodular_transform(m):
    h, u, rank = exact.column_hnf(m)
    assert exact.matmul(m, u) == exact.as_matrix(h)
    assert abs(exact.det(u)) == 1
    assert rank == sympy.Matrix(m).rank()


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_smith_form_matches_sympy(m):
    if sympy.Matrix(m).det() == 0:
        return
    diag, u, v = exact.smith_normal_form(m)
    d = exact.matmul(exact.matmul(u, m), v)
    n = len(m)
    assert all(d[i][j] == (diag[i] if i == j else 0) for i in range(n) for j in range(n))
    assert all(diag[i + 1] % diag[i] == 0 for i in range(n - 1))
    from sympy.matrices.normalforms import smith_normal_form
    ref = smith_normal_form(sympy.Matrix(m), domain=sympy.ZZ)
    assert [abs(int(ref[i, i])) for i in range(n)] == [abs(x) for x in diag]


def test_integer_kernel():
    k = exact.integer_kernel([[1, 2, 3]], 3)
    assert len(k) == 3 and len(k[0]) == 2
    for j in range(2):
        assert sum([1, 2, 3][i] * k[i][j] for i in range(3)) == 0


def test_inverse():
    m = exact.as_matrix([[2, 1], [7, 4]])
    assert exact.matmul(m, exact.inverse(m)) == exact.identity(2)
