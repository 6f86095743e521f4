"""Exact integer combinatorics: binomials, Catalan and ballot numbers.

Every function here returns a Python ``int`` (exact, unbounded) except
:func:`log_binom`, which is a float helper for scanning large rows.
"""

from __future__ import annotations

import math
from fractions import Fraction

import gmpy2

ExactInt = int
ExactRat = Fraction

__all__ = ["ExactInt", "ExactRat", "binom", "catalan", "ballot", "log_binom", "exact_div"]


# math.comb is quadratic on huge rows; GMP is far faster past a few thousand
_GMP_CUTOVER = 4000


def exact_div(num: int, den: int) -> int:
    """Divide ``num`` by ``den``, refusing to round."""
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{num} is not divisible by {den}")
    return q


def binom(n: int, k: int) -> int:
    """C(n, k) with the convention C(n, k) = 0 for k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binom: n must be non-negative, got {n}")
    if k < 0 or k > n:
        return 0
    if n > _GMP_CUTOVER:
        return int(gmpy2.comb(n, k))
    return math.comb(n, k)


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError(f"catalan: n must be non-negative, got {n}")
    return exact_div(math.comb(2 * n, n), n + 1)


def ballot(i: int, j: int) -> int:
    """Number of monotone lattice paths (0,0) -> (i,j) staying weakly above y = x."""
    if i < 0 or i > j:
        raise ValueError(f"ballot: need 0 <= i <= j, got ({i}, {j})")
    return exact_div((j + 1 - i) * math.comb(j + i + 1, i), j + i + 1)


def log_binom(n: int, k: int) -> float:
    """Natural log of C(n, k) via log-gamma. For scans only, never for exact output."""
    if k < 0 or k > n:
        raise ValueError(f"log_binom: need 0 <= k <= n, got ({n}, {k})")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
