from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treesearch import closed_forms as cf
from treesearch.enumeration import oracle_xy_sum
from treesearch.series import (
    Polynomial, TruncSeries, b_series, c_pow_coeff, catalan_series, d_series,
    d_series_product_form, f_eval_series, fib_poly, geometric_4z, series_to_csv, verify_lemmas,
)


def test_catalan_series():
    assert list(catalan_series(4)) == [1, 1, 2, 5, 14]
    c = catalan_series(64)
    assert c == 1 + (c * c).shift(1)
    assert (1 - c.shift(1)) * c == TruncSeries.constant(1, 64)


def test_catalan_derivative_identity():
    c = catalan_series(40)
    z = TruncSeries.monomial(1, 40)
    rhs = ((2 * z - 1) * c + 1) * geometric_4z(40)
    assert c.zderiv() == rhs


def test_fib_poly_table():
    assert fib_poly(0) == Polynomial((1,))
    assert fib_poly(4) == Polynomial((1, 3, 1))
    assert fib_poly(5) == Polynomial((1, 4, 3))
    assert fib_poly(9) == Polynomial((1, 8, 21, 20, 5))
    assert fib_poly(-1) == Polynomial()
    fib = [1, 1]
    for _ in range(30):
        fib.append(fib[-1] + fib[-2])
    for n in range(30):
        assert fib_poly(n)(1) == fib[n]


def test_c_pow_coeff():
    assert c_pow_coeff(2, 2) == 5
    assert c_pow_coeff(7, 1) == 7
    c = catalan_series(40)
    power = TruncSeries.constant(1, 40)
    for m in range(1, 21):
        power = power * c
        assert all(power[n] == c_pow_coeff(m, n) for n in range(41))
    for n in range(20):
        assert c_pow_coeff(1, n) == c[n]


def test_series_arithmetic():
    a = TruncSeries([1, 2, 3], 4)
    b = TruncSeries([1, -1], 4)
    assert list(a * b) == [1, 1, 1, -3, 0]
    assert (a / b) * b == a
    assert a.derivative().order == 3
    assert list(a.zderiv()) == [0, 2, 6, 0, 0]
    with pytest.raises(ZeroDivisionError):
        a / TruncSeries([2, 1], 4)
    assert a ** 3 == a * a * a


@settings(max_examples=50)
@given(st.lists(st.fractions(max_denominator=20), min_size=1, max_size=8),
       st.lists(st.fractions(max_denominator=20), min_size=1, max_size=8))
def test_division_inverts_multiplication(xs, ys):
    a = TruncSeries(xs, 7)
    b = TruncSeries([1] + ys, 7)
    assert (a * b) / b == a


def test_b_series():
    assert b_series(2, 10)[3] == 13
    assert b_series(1, 5)[1] == 1
    assert all(b_series(3, 10)[k] == 0 for k in range(3))
    for l in range(1, 11):
        s = b_series(l, 30)
        assert all(s[n] == cf.total_b(n, l) for n in range(31))


def test_d_series():
    assert d_series(1, 10)[3] == 2
    assert d_series(2, 10)[3] == 0
    s1 = d_series(1, 20)
    assert all(s1[n] == 2 * cf.binom(2 * n, n - 3) for n in range(21))
    for l in range(1, 9):
        s = d_series(l, 30)
        for n in range(31):
            want = 2 * (cf.total_d(n, l) - cf.total_d_trunc(n, l)) if n >= l else 0
            assert s[n] == want
        assert s == d_series_product_form(l, 30)


def test_f_eval_series():
    c = catalan_series(12)
    assert f_eval_series(3, 1, 1, 12) == c
    assert f_eval_series(0, 5, 2, 12) == 2 * c
    grid = [(Fraction(1, 2), Fraction(3)), (Fraction(-2, 3), Fraction(1, 5)), (Fraction(2), Fraction(-1))]
    for l in range(5):
        for x0, y0 in grid:
            s = f_eval_series(l, x0, y0, 10)
            assert all(s[n] == oracle_xy_sum(n, l, x0, y0) for n in range(11))


def test_lemmas():
    rep = verify_lemmas(40)
    assert rep.passed
    assert rep.fderiv2_sign == "-"
    # the "+" variant breaks immediately, at index 0
    assert rep.first_failure["derivative2_plus"] == 0
    for name in ("recurrence", "cassini", "denominator", "derivative", "derivative2_minus"):
        assert rep.first_failure[name] is None


def test_lemma_examples():
    z = Polynomial((0, 1))
    assert fib_poly(5) == fib_poly(4) + z * fib_poly(3)
    assert fib_poly(2) * fib_poly(2) - fib_poly(1) * fib_poly(3) == Polynomial((0, 0, 1))


def test_csv_dump():
    text = series_to_csv(TruncSeries([1, Fraction(-1, 2)]))
    assert text == "k,numerator,denominator\n0,1,1\n1,-1,2\n"
