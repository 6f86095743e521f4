from fractions import Fraction

import pytest

from treesearch import closed_forms as cf
from treesearch.combinatorics import binom, catalan
from treesearch.enumeration import enumerate_totals


def test_spot_values():
    assert cf.level_count(3, 2) == 5
    assert cf.level_count(3, 1) == 9
    assert cf.total_d(3, 2) == 12
    assert cf.total_d(4, 1) == 56
    assert cf.total_b(3, 2) == 13
    assert cf.total_b(4, 1) == 48
    assert cf.total_b_alt(3, 2) == 13
    assert cf.total_b_alt(3, 1) == 14
    assert cf.total_d_trunc(3, 1) == 14
    assert cf.total_d_trunc(3, 2) == 12
    assert cf.expected_dfs(3, 2) == Fraction(12, 5)
    assert cf.expected_dfs(3, 1) == Fraction(5, 3)
    assert cf.takacs_moment(3, 1, 1) == 15
    assert cf.takacs_moment(3, 1, 2) == 15
    assert cf.paths_identity_lhs(3, 1) == 15
    assert cf.paths_identity_lhs(5, 2) == 120
    assert cf.average_level_exact(3) == Fraction(11, 10)
    assert cf.average_level_exact(1) == Fraction(1, 2)
    assert cf.level_mass(3) == 22 == (4 ** 3 - 20) // 2


def test_boundaries():
    for n in range(1, 15):
        assert cf.level_count(n, 0) == catalan(n)
        assert cf.total_d(n, 0) == cf.total_b(n, 0) == cf.total_d_trunc(n, 0) == 0
        assert cf.expected_dfs(n, n) == n
        assert cf.total_b_alt(n, n) == n
        assert cf.total_d_trunc(n, n) == n
        assert cf.paths_identity_lhs(n, n) == 1
        assert cf.takacs_moment(n, 0, 1) == binom(2 * n, n) == (n + 1) * catalan(n)


def test_against_enumeration():
    for n in range(11):
        t = enumerate_totals(n)
        for l in range(n + 1):
            assert t.total_d[l] == cf.total_d(n, l)
            assert t.total_b[l] == cf.total_b(n, l) == cf.total_b_alt(n, l)
            assert t.total_d_trunc[l] == cf.total_d_trunc(n, l)
            assert t.level_count[l] == cf.level_count(n, l)
            assert t.moment_v1[l] == cf.takacs_moment(n, l, 1)
            assert t.moment_v2[l] == cf.takacs_moment(n, l, 2)
            assert t.total_d_trunc[l] <= min(t.total_d[l], t.total_b[l])


def test_total_b_second_form():
    # the leading term equals totalD(n, l) + totalD(n, l + 1)
    for n in range(201):
        for l in range(0, n + 1, max(1, n // 25)):
            assert cf.total_b_via_total_d(n, l) == cf.total_b(n, l)


def test_total_b_second_form_with_n_plus_one_is_wrong():
    # written with totalD(n + 1, l) the identity already fails at (3, 2)
    n, l = 3, 2
    literal = (cf.total_d(n, l) + cf.total_d(n + 1, l) - binom(2 * n, n - 2 * l - 1)
               - 2 * sum(binom(2 * n, n - j) for j in range(l + 1, 2 * l + 1)))
    assert literal == 66
    assert cf.total_b(n, l) == 13


def test_paths_identity():
    for n in range(51):
        for l in range(n + 1):
            assert cf.paths_identity_lhs(n, l) == binom(2 * n, n - l)


def test_average_level_identity():
    for n in range(1, 501):
        assert Fraction(cf.level_mass(n), (n + 1) * catalan(n)) == cf.average_level_exact(n)


def test_errors():
    with pytest.raises(ValueError):
        cf.takacs_moment(3, 1, 3)
    with pytest.raises(ValueError):
        cf.trunc_difference(3, 4)
    with pytest.raises(ValueError):
        cf.expected_dfs(3, 4)


def test_conjecture_readings():
    for l in (2, 4, 5):
        rep = cf.conjecture_check(l, range(l, 41))
        assert rep.reading == "rising"
        assert rep.matches["falling"] == (False, False)
    rep1 = cf.conjecture_check(1, range(1, 41))
    assert rep1.degenerate and rep1.reading is None
    assert rep1.matches == {"rising": (True, True), "falling": (True, True)}


def test_conjecture_row_three():
    # the odd row matches; the even row only matches with 1133 n^2 in place of 113 n^2
    rep = cf.conjecture_check(3, range(3, 41))
    assert rep.matches["rising"] == (True, False)
    assert rep.first_failure["rising"] == (None, 8)
    assert cf.fit_conjecture_polynomial(3, "odd") == cf.A_TABLE[3]
    assert cf.fit_conjecture_polynomial(3, "even") == (3, 16, 1133, 1792, 36312)
    assert cf.B_TABLE[3] == (3, 16, 113, 1792, 36312)


def test_fitted_polynomials_reproduce_other_rows():
    for l in (1, 2, 4, 5):
        assert cf.fit_conjecture_polynomial(l, "odd") == cf.A_TABLE[l]
        assert cf.fit_conjecture_polynomial(l, "even") == cf.B_TABLE[l]
        assert cf.fit_conjecture_polynomial(l, "odd", "falling") in (None, cf.A_TABLE[l])


def test_conjecture_leading_coefficients():
    for l in range(1, 6):
        a = cf.fit_conjecture_polynomial(l, "odd")
        b = cf.fit_conjecture_polynomial(l, "even")
        assert len(a) == len(b) == 2 * l - 1
        assert a[0] == 2 * l - 1 and b[0] == l
        assert min(a) > 0 and min(b) > 0
