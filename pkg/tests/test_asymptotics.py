import math

import pytest

from treesearch import asymptotics as asy
from treesearch.closed_forms import total_b, total_d


def _erf_series(x, terms=60):
    # Maclaurin series, independent of math.erf
    acc = 0.0
    term = x
    for k in range(terms):
        acc += term / (2 * k + 1)
        term *= -x * x / (k + 1)
    return 2 / math.sqrt(math.pi) * acc


def test_normal_cdf():
    assert asy.std_normal_cdf(0) == 0.5
    for i in range(-60, 61):
        x = i / 10
        assert abs(asy.std_normal_cdf(x) + asy.std_normal_cdf(-x) - 1) <= 1e-14
    assert abs(asy.std_normal_cdf(1.0) - 0.5 * (1 + _erf_series(1 / math.sqrt(2)))) <= 1e-13
    for x in (0.1, 0.5, 1.5, 2.5):
        assert abs(asy.std_normal_cdf(x) - 0.5 * (1 + _erf_series(x / math.sqrt(2)))) <= 1e-13


def test_crossover_function():
    assert asy.crossover_function(0) == 0
    # the function dips below zero before the root and is positive after it
    assert asy.crossover_function(0.5) < 0 < asy.crossover_function(1.2)
    grid = [0.1 + 1.9 * i / 10_000 for i in range(10_001)]
    vals = [asy.crossover_function(x) for x in grid]
    changes = sum(1 for a, b in zip(vals, vals[1:]) if (a < 0) != (b < 0))
    assert changes == 1


def test_lambda():
    lam = asy.solve_lambda(1e-9)
    assert f"{lam:.6f}" == "0.789004"
    lam = asy.solve_lambda(1e-14)
    assert abs(asy.crossover_function(lam)) <= 1e-12
    assert abs(asy.k_const(lam) - lam * math.exp(-lam * lam)) <= 1e-12
    assert abs(asy.k_const(lam) - 0.4234) <= 1e-4
    with pytest.raises(ValueError):
        asy.solve_lambda(1e-16)


def test_k_and_totalb_asymptotic():
    assert asy.k_const(0) == 0 == asy.totalb_asymptotic(0)
    for i in range(1, 40):
        s = i / 10
        assert abs(math.sqrt(math.pi) * asy.totalb_asymptotic(s) - asy.k_const(s)) <= 1e-14


def test_threshold_small():
    r = asy.lambda_n(4)
    assert r.lstar == 1 and r.unique
    assert total_b(4, 1) - total_d(4, 1) == -8
    assert total_b(4, 2) - total_d(4, 2) == 6
    assert asy.lambda_n(3).lstar == 1
    assert total_b(3, 2) - total_d(3, 2) == 1


def test_threshold_values_stream():
    for n in range(40):
        assert [f for _, f in asy.threshold_values(n)] == [total_b(n, l) - total_d(n, l) for l in range(n + 1)]


def test_threshold_invariants():
    for n in range(1, 501):
        r = asy.lambda_n(n)
        assert r.unique, n
        if r.lstar < n:
            assert total_b(n, r.lstar) <= total_d(n, r.lstar)
            assert total_b(n, r.lstar + 1) > total_d(n, r.lstar + 1)


def test_threshold_paths_agree():
    for n in (3000, 20000):
        full = asy.lambda_n(n)
        quick = asy.lambda_n(n, exact_max=0)
        assert full.lstar == quick.lstar
        assert full.exact_scan and not quick.exact_scan


def test_threshold_ratios():
    for n in (10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5):
        assert 0.70 <= asy.lambda_n(n).ratio <= 0.88


@pytest.mark.slow
def test_threshold_million():
    r = asy.lambda_n(10 ** 6)
    assert r.lstar == 788
    assert abs(r.ratio - 0.789004) <= 0.02


def test_average_level():
    exact, approx = asy.average_level_pair(3)
    assert float(exact) == 1.1
    assert abs(approx - 1.535) < 1e-3
    exact, approx = asy.average_level_pair(10 ** 4)
    assert abs(float(exact) - approx) <= 1
    assert 0.5 * math.sqrt(math.pi) > asy.solve_lambda()


def test_asymptotic_error_scale():
    n = 10 ** 4
    worst = max(abs(asy.scaled_total_b(n, 20 * i) - asy.totalb_asymptotic(0.2 * i)) for i in range(1, 9))
    assert worst <= 10 / math.sqrt(n)


def test_exp_bound():
    l, lhs, rhs = asy.exp_bound_check(10 ** 4, 0.2)
    assert l == 630
    assert 0 < lhs <= rhs


def test_local_limit_constant_stable():
    a, b = asy.local_limit_constant(10 ** 3), asy.local_limit_constant(10 ** 4)
    assert 0 < a < 1 and 0 < b < 1
    assert abs(a - b) / b < 0.05


def test_plot_csv():
    text = asy.plot_csv(100, [0.0, 0.5])
    lines = text.splitlines()
    assert lines[0] == "s,totalB_scaled_exact,totalb_asymptotic,k_const"
    assert lines[1] == "0.0,0.0,0.0,0.0"
    assert len(lines) == 3
