"""Large-n behaviour: the normal CDF, the crossover constant lambda, integer
thresholds lambda_n, and checks of the asymptotic formula for totalB.

Float helpers are for scanning and plotting. Any claim about a specific
(n, l) is settled with exact integers.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import gmpy2

from .combinatorics import log_binom
from .closed_forms import average_level_exact, total_b

__all__ = [
    "std_normal_cdf",
    "crossover_function",
    "solve_lambda",
    "totalb_asymptotic",
    "k_const",
    "ThresholdReport",
    "threshold_values",
    "lambda_n",
    "average_level_asymptotic",
    "scaled_total_b",
    "local_limit_constant",
    "exp_bound_check",
    "plot_rows",
    "plot_csv",
    "EXACT_SCAN_MAX_N",
    "average_level_pair",
]

SQRT_PI = math.sqrt(math.pi)
SQRT2 = math.sqrt(2.0)

EXACT_SCAN_MAX_N = 50_000


def std_normal_cdf(x: float) -> float:
    # erfc keeps full relative accuracy in the lower tail, unlike 1 + erf
    return 0.5 * math.erfc(-x / SQRT2)


def _phi_gap(s: float) -> float:
    """Phi(2 s sqrt 2) - Phi(s sqrt 2), computed without cancelling two numbers near 1."""
    a, b = s * SQRT2, 2 * s * SQRT2
    if s >= 0:
        return 0.5 * (math.erfc(a / SQRT2) - math.erfc(b / SQRT2))
    return std_normal_cdf(b) - std_normal_cdf(a)


def crossover_function(x: float) -> float:
    return x * math.exp(-x * x) - 2 * SQRT_PI * _phi_gap(x)


def solve_lambda(tol: float = 1e-12) -> float:
    """Positive root of :func:`crossover_function` by bisection on [0.1, 2]."""
    if not tol >= 1e-14:
        raise ValueError("tol must be at least 1e-14")
    lo, hi = 0.1, 2.0
    flo = crossover_function(lo)
    if flo * crossover_function(hi) >= 0:
        raise RuntimeError("crossover function does not change sign on [0.1, 2]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = crossover_function(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def k_const(s: float) -> float:
    return 2 * s * math.exp(-s * s) - 2 * SQRT_PI * _phi_gap(s)


def totalb_asymptotic(s: float) -> float:
    """Leading term of totalB(n, s sqrt n) / 4^n."""
    return 2 * s / SQRT_PI * math.exp(-s * s) - 2 * _phi_gap(s)


def average_level_asymptotic(n: int) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    return 0.5 * math.sqrt(math.pi * n)


def average_level_pair(n: int) -> tuple[Fraction, float]:
    """(exact average level, its leading-order approximation)."""
    return average_level_exact(n), average_level_asymptotic(n)


def scaled_total_b(n: int, level: int) -> float:
    """totalB(n, level) / 4^n, from the exact integer."""
    return float(Fraction(total_b(n, level), 4 ** n))


# --- integer thresholds ---------------------------------------------------

class _Row:
    """Walks C(2n, n - j) for j = 0, 1, ... by exact ratio steps."""

    __slots__ = ("n", "j", "value")

    def __init__(self, n: int):
        self.n, self.j, self.value = n, 0, gmpy2.comb(2 * n, n)

    def advance(self) -> int:
        n, j = self.n, self.j
        if j >= n:
            self.value = 0
        else:
            self.value = self.value * (n - j) // (n + j + 1)
        self.j = j + 1
        return self.value


def threshold_values(n: int, stop: Optional[int] = None):
    """Yield (l, f_n(l)) with f_n(l) = totalB(n, l) - totalD(n, l), l = 0..stop.

    f_n(l) = (l+1) C(2n, n-l-1) - C(2n, n-2l-1) - 2 W(l), where W(l) sums
    C(2n, n-j) over l < j <= 2l. Two cursors along the binomial row keep
    only a handful of big integers alive at once.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    stop = n if stop is None else min(stop, n)
    low = _Row(n)   # sits at j = l + 1
    low.advance()
    high = _Row(n)  # sits at j = 2l + 1
    high.advance()
    window = gmpy2.mpz(0)
    for l in range(stop + 1):
        yield l, int((l + 1) * low.value - high.value - 2 * window)
        # W(l+1) = W(l) - C(2n, n-l-1) + C(2n, n-2l-1) + C(2n, n-2l-2)
        window += high.value - low.value
        window += high.advance()
        high.advance()
        low.advance()


@dataclass
class ThresholdReport:
    """Integer threshold for one n.

    lstar is the last level of the leading run where totalB <= totalD; the
    real threshold of the crossover statement lies in [lstar, lstar + 1).
    ``unique`` is True only when a full exact scan confirmed the sign
    pattern (<= 0)* (> 0)* followed by f_n(n) = 0 at the boundary level.
    """

    n: int
    lstar: int
    unique: bool
    ratio: float
    exact_scan: bool = True

    def as_dict(self) -> dict:
        return {"n": self.n, "lstar": self.lstar, "unique": self.unique,
                "ratio": self.ratio, "exact_scan": self.exact_scan}


def _f_exact(n: int, l: int) -> int:
    """f_n(l) from one big binomial and exact ratio steps along the row."""
    if not 0 <= l <= n:
        raise ValueError(f"level must lie in 0..{n}")
    j = l + 1
    b = gmpy2.comb(2 * n, n - j) if j <= n else gmpy2.mpz(0)
    first = b
    window = gmpy2.mpz(0)
    while j <= 2 * l and b:
        window += b
        b = b * (n - j) // (n + j + 1)
        j += 1
    # b is now C(2n, n - 2l - 1)
    return int((l + 1) * first - b - 2 * window)


def _scan(n: int) -> ThresholdReport:
    lstar = None
    unique = True
    for l, f in threshold_values(n):
        if lstar is None:
            if f > 0:
                lstar = l - 1
            continue
        if l < n and f <= 0:
            unique = False
        elif l == n and f != 0:
            unique = False
    if lstar is None:
        # f_n vanishes identically for n <= 2, and never turns positive
        lstar = n
    return ThresholdReport(n, lstar, unique, lstar / math.sqrt(n))


def _f_scaled_float(n: int, l: int, logc: list[float]) -> float:
    """f_n(l) / C(2n, n) in floating point; logc[j] = log C(2n, n-j) - log C(2n, n)."""
    def r(j):
        return math.exp(logc[j]) if j < len(logc) else 0.0
    return (l + 1) * r(l + 1) - r(2 * l + 1) - 2 * math.fsum(r(j) for j in range(l + 1, 2 * l + 1))


def _prefilter(n: int) -> int:
    base = log_binom(2 * n, n)
    # beyond ~40 sqrt(n) the terms underflow to exactly 0.0
    top = min(n, int(40 * math.sqrt(n)) + 10)
    logc = [log_binom(2 * n, n - j) - base for j in range(top + 1)]
    lo, hi = 1, int(2 * math.sqrt(n)) + 2
    # f is <= 0 below the threshold and > 0 above it on this range
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _f_scaled_float(n, mid, logc) > 0:
            hi = mid
        else:
            lo = mid
    return lo


def lambda_n(n: int, exact_max: int = EXACT_SCAN_MAX_N) -> ThresholdReport:
    """Largest l in the leading run with totalB(n, l) <= totalD(n, l)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n <= exact_max:
        return _scan(n)
    guess = _prefilter(n)
    # confirm exactly; step if the float guess landed one off
    lstar = guess
    while _f_exact(n, lstar) > 0:
        lstar -= 1
    while _f_exact(n, lstar + 1) <= 0:
        lstar += 1
    return ThresholdReport(n, lstar, False, lstar / math.sqrt(n), exact_scan=False)


# --- error terms ------------------------------------------------------------

def local_limit_constant(n: int) -> float:
    """max over l of n^{3/2} |C(2n, n-l)/4^n - exp(-l^2/n)/sqrt(pi n)|."""
    if n < 1:
        raise ValueError("n must be at least 1")
    base = -2 * n * math.log(2)
    top = min(n, int(12 * math.sqrt(n)) + 2)
    worst = 0.0
    for l in range(top + 1):
        p = math.exp(log_binom(2 * n, n - l) + base)
        q = math.exp(-l * l / n) / math.sqrt(math.pi * n)
        worst = max(worst, abs(p - q))
    return worst * n ** 1.5


def exp_bound_check(n: int, eps: float) -> tuple[int, float, float]:
    """(l, totalB(n, l)/4^n, 2 s sqrt(n) e^{-n^{2 eps}}) at l = floor(n^{1/2 + eps})."""
    l = min(n, int(n ** (0.5 + eps)))
    s = l / math.sqrt(n)
    lhs = scaled_total_b(n, l)
    rhs = 2 * s * math.sqrt(n) * math.exp(-n ** (2 * eps))
    return l, lhs, rhs


def plot_rows(n: int, s_values: Iterable[float]) -> list[tuple[float, float, float, float]]:
    rows = []
    root = math.sqrt(n)
    for s in s_values:
        l = min(n, math.floor(s * root + 1e-9))
        rows.append((s, scaled_total_b(n, l), totalb_asymptotic(s), k_const(s)))
    return rows


def plot_csv(n: int, s_values: Iterable[float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "totalB_scaled_exact", "totalb_asymptotic", "k_const"])
    for s, a, b, c in plot_rows(n, s_values):
        w.writerow([repr(round(s, 12)), repr(a), repr(b), repr(c)])
    return buf.getvalue()
