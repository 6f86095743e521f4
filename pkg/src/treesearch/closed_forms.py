"""Exact closed forms for level counts and the three search totals.

All arithmetic is on ``int`` and ``Fraction``. Binomials use the
C(n, k) = 0 outside 0 <= k <= n convention, which several of the sums
rely on when a lower index runs negative. Any division a formula asks for
is checked to be exact instead of being rounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .combinatorics import ballot, binom, exact_div

__all__ = [
    "level_count",
    "total_d",
    "expected_dfs",
    "expected_bfs",
    "total_b",
    "total_b_via_total_d",
    "total_b_alt",
    "takacs_moment",
    "trunc_difference",
    "total_d_trunc",
    "paths_identity_lhs",
    "average_level_exact",
    "level_mass",
    "A_TABLE",
    "B_TABLE",
    "ConjectureReport",
    "conjecture_check",
    "fit_conjecture_polynomial",
]


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"expected an integer, got {x}")
    return x.numerator


def level_count(n: int, level: int) -> int:
    """Nodes at ``level`` summed over all trees with n edges."""
    if not 0 <= level <= n:
        return 0
    return exact_div((2 * level + 1) * binom(2 * n + 1, n - level), 2 * n + 1)


def total_d(n: int, level: int) -> int:
    if not 0 <= level <= n:
        return 0
    return level * binom(2 * n, n - level)


def expected_dfs(n: int, level: int) -> Fraction:
    if level == 0:
        return Fraction(0)
    if not 1 <= level <= n:
        raise ValueError(f"level must lie in 1..{n}")
    return Fraction(level * (n + level + 1), 2 * level + 1)


def _window(n: int, lo: int, hi: int) -> int:
    """Sum of C(2n, n - j) for lo <= j <= hi."""
    return sum(binom(2 * n, n - j) for j in range(lo, hi + 1))


def total_b(n: int, level: int) -> int:
    if not 0 <= level <= n:
        return 0
    l = level
    lead = exact_div(n * (2 * l + 1) * binom(2 * n, n - l), n + l + 1)
    return lead - binom(2 * n, n - 2 * l - 1) - 2 * _window(n, l + 1, 2 * l)


def total_b_via_total_d(n: int, level: int) -> int:
    """Same value, with the leading term written as totalD(n, l) + totalD(n, l + 1)."""
    l = level
    return (total_d(n, l) + (l + 1) * binom(2 * n, n - l - 1)
            - binom(2 * n, n - 2 * l - 1) - 2 * _window(n, l + 1, 2 * l))


def _cpow(m: int, k: int) -> Fraction:
    """[z^k] C(z)^m as a Fraction; zero for k < 0."""
    if k < 0:
        return Fraction(0)
    return Fraction(m * binom(2 * k + m - 1, k), k + m)


def total_b_alt(n: int, level: int) -> int:
    """totalB from the alternating sums obtained by coefficient extraction."""
    if not 0 <= level <= n:
        return 0
    l = level
    acc = Fraction(0)
    for k in range(1, (l + 1) // 2 + 1):
        sign = 1 if k % 2 else -1
        acc += sign * k * binom(l - k + 1, k) * _cpow(3 * l + 1, n - l - k + 1)
    for k in range(1, l // 2 + 1):
        sign = 1 if k % 2 else -1
        acc -= sign * k * binom(l - k, k) * _cpow(3 * l + 2, n - l - k)
    return _as_int(acc)


def takacs_moment(n: int, level: int, order: int) -> int:
    """Sum over trees of v(level) (order 1) or C(v(level), 2) (order 2)."""
    if not 0 <= level <= n:
        raise ValueError(f"level must lie in 0..{n}")
    l = level
    if order == 1:
        return binom(2 * n, n - l)
    if order != 2:
        raise ValueError(f"order must be 1 or 2, got {order}")
    val = ((n + l) * binom(2 * n, n - l)
           - Fraction((n + 2 * l) * binom(2 * n, n - 2 * l), 2)
           - 2 * l * _window(n, l, 2 * l - 1))
    return _as_int(Fraction(val))


def trunc_difference(n: int, level: int) -> int:
    """totalD - totalDTrunc from the closed triple sum (level >= 1)."""
    l = level
    if l == 0:
        return 0
    if not 1 <= l <= n:
        raise ValueError(f"level must lie in 1..{n}")
    acc = Fraction(0)
    for k in range(0, (l - 1) // 2 + 1):
        nk = n - k
        term = (Fraction(l * binom(2 * nk + l - 1, nk), nk + l)
                - Fraction((6 * l + 4) * binom(2 * nk + l - 1, nk - l - 1), nk + 2 * l + 1))
        acc += (-1) ** k * binom(l - 1 - k, k) * term
    for k in range(0, l // 2 + 1):
        nk = n - k
        term = (Fraction((3 * l + 1) * (2 * k - l + 1) * binom(2 * nk + l, nk - l), nk + 2 * l + 1)
                - Fraction((3 * l + 2) * k * binom(2 * nk + l + 1, nk - l), nk + 2 * l + 2))
        acc += (-1) ** k * binom(l - k, k) * term
    for k in range(0, n - l + 1):
        nk = n - k
        acc += (Fraction(l * (4 ** (k + 1) * (l + 1) - 2 * binom(2 * k, k))
                         * binom(2 * nk - 1, nk - l), nk + l)
                - Fraction(4 ** k * (2 * l + 1) * (l + 1) * binom(2 * nk, nk - l), nk + l + 1))
    acc -= binom(2 * n, n)
    return _as_int(acc / 2)


def total_d_trunc(n: int, level: int) -> int:
    if level == 0:
        return 0
    if not 1 <= level <= n:
        raise ValueError(f"level must lie in 0..{n}")
    return total_d(n, level) - trunc_difference(n, level)


def expected_bfs(n: int, level: int) -> Fraction:
    return Fraction(total_b(n, level), level_count(n, level))


def paths_identity_lhs(n: int, level: int) -> int:
    """Left side of the lattice-path identity; equals C(2n, n - level)."""
    if not 0 <= level <= n:
        raise ValueError(f"level must lie in 0..{n}")
    l = level
    acc = 0
    for j in range(l, n + 1):
        # C(2j-l-1, j-1) is read as 1 at j = l = 0
        head = 1 if j == 0 else binom(2 * j - l - 1, j - 1)
        acc += head * ballot(n - j, n - j + l)
    return acc


def level_mass(n: int) -> int:
    """Sum of levels over all nodes of all trees in T_n."""
    return sum(l * level_count(n, l) for l in range(n + 1))


def average_level_exact(n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be at least 1")
    c = binom(2 * n, n)
    return Fraction(4 ** n - c, 2 * c)


# Coefficients listed from the leading power down to the constant term.
A_TABLE: dict[int, tuple[int, ...]] = {
    1: (1,),
    2: (3, 4, 37),
    3: (5, 20, 837, 988, 6646),
    4: (7, 56, 5222, 16456, 446751, 499008, 2946420),
    5: (9, 120, 19614, 115968, 6593985, 18449640, 411932616, 445776672, 2451690576),
}
B_TABLE: dict[int, tuple[int, ...]] = {
    1: (1,),
    2: (2, 4, 114),
    3: (3, 16, 113, 1792, 36312),
    4: (4, 40, 5272, 20824, 947764, 1334176, 23465040),
    5: (5, 80, 16922, 120272, 9620645, 32459360, 1207925628, 1584695808, 25795264320),
}


def _poly_at(coeffs: tuple[int, ...], x: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def rising(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x + i
    return out


def falling(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


READINGS = {"rising": rising, "falling": falling}


def _delta(n: int, level: int) -> int:
    if level > n:
        return 0
    return trunc_difference(n, level)


@dataclass
class ConjectureReport:
    l: int
    n_values: list[int]
    # reading -> (odd-level rows all match, even-level rows all match)
    matches: dict[str, tuple[bool, bool]] = field(default_factory=dict)
    # reading -> first n that failed, per parity; None when nothing failed
    first_failure: dict[str, tuple[int | None, int | None]] = field(default_factory=dict)

    @property
    def consistent(self) -> list[str]:
        return [r for r, (a, b) in self.matches.items() if a and b]

    @property
    def degenerate(self) -> bool:
        """At l = 1 the shifted factorial is empty, so the readings cannot differ."""
        return self.l == 1

    @property
    def reading(self) -> str | None:
        ok = self.consistent
        return ok[0] if len(ok) == 1 else None


def _ratio(l: int, n: int, parity: str, fact) -> Fraction:
    """Delta times the shifted factorial, over the binomial: the tabulated polynomial at n."""
    k = 2 * l - 2
    if parity == "odd":
        return Fraction(_delta(n, 2 * l - 1) * fact(n + 2 * l + 2, k), binom(2 * n, n - 2 * l - 1))
    return Fraction(_delta(n, 2 * l) * fact(n + 2 * l + 4, k), binom(2 * n + 1, n - 2 * l - 2))


def _interpolate(points: list[tuple[int, Fraction]]) -> list[Fraction]:
    """Coefficients (constant term first) of the polynomial through ``points``."""
    coeffs = [Fraction(0)] * len(points)
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        for t, b in enumerate(basis):
            coeffs[t] += yi * b / denom
    return coeffs


def fit_conjecture_polynomial(l: int, parity: str, reading: str = "rising",
                              checks: int = 12) -> tuple[int, ...] | None:
    """Recover the degree 2l-2 polynomial from exact differences.

    Interpolates on the first 2l-1 values of n where the binomial is nonzero,
    then confirms on ``checks`` further values. Returns the coefficients from
    the leading power down, or None if the data are not such a polynomial
    with integer coefficients.
    """
    if parity not in ("odd", "even"):
        raise ValueError("parity must be 'odd' or 'even'")
    fact = READINGS[reading]
    start = 2 * l + 1 if parity == "odd" else 2 * l + 2
    pts = [(n, _ratio(l, n, parity, fact)) for n in range(start, start + 2 * l - 1)]
    poly = _interpolate(pts)
    for n in range(start + 2 * l - 1, start + 2 * l - 1 + checks):
        val = sum(c * n ** t for t, c in enumerate(poly))
        if val != _ratio(l, n, parity, fact):
            return None
    if any(c.denominator != 1 for c in poly):
        return None
    return tuple(int(c) for c in reversed(poly))


def conjecture_check(l: int, n_values: Iterable[int]) -> ConjectureReport:
    """Compare the tabulated polynomials with exact differences at levels 2l-1 and 2l.

    The shifted factorial in the denominator is evaluated both as a rising
    and as a falling factorial of length 2l-2; the report says which reading
    held for every n tried.
    """
    if l not in A_TABLE:
        raise ValueError(f"tables cover l = 1..{max(A_TABLE)}, got {l}")
    ns = sorted(set(n_values))
    rep = ConjectureReport(l, ns)
    a, b = A_TABLE[l], B_TABLE[l]
    k = 2 * l - 2
    odd = [(n, _delta(n, 2 * l - 1), binom(2 * n, n - 2 * l - 1)) for n in ns]
    even = [(n, _delta(n, 2 * l), binom(2 * n + 1, n - 2 * l - 2)) for n in ns]
    for name, fact in READINGS.items():
        fail_a = next((n for n, d, c in odd if d * fact(n + 2 * l + 2, k) != _poly_at(a, n) * c), None)
        fail_b = next((n for n, d, c in even if d * fact(n + 2 * l + 4, k) != _poly_at(b, n) * c), None)
        rep.matches[name] = (fail_a is None, fail_b is None)
        rep.first_failure[name] = (fail_a, fail_b)
    return rep
