"""Brute-force ground truth: walk every ordered tree with n edges.

Words are produced in lexicographic order with U < D by a successor step
on the word itself. The range splits cleanly by prefix, so a worker pool
can take one prefix each and the per-prefix totals are summed back in
prefix order; integer addition makes the result independent of how the
work was split.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .combinatorics import binom, catalan
from .trees import DyckWord, OrderedTree, score_tree, tree_from_dyck

__all__ = [
    "MAX_EXHAUSTIVE_N",
    "EnumerationTooLarge",
    "iterate_dyck",
    "dyck_prefixes",
    "LevelTotals",
    "enumerate_totals",
    "oracle_totals",
    "oracle_moment_v",
    "oracle_xy_sum",
    "oracle_trunc_diff_pairs",
]

MAX_EXHAUSTIVE_N = 14


class EnumerationTooLarge(ValueError):
    pass


def _check_size(n: int, limit: int = MAX_EXHAUSTIVE_N) -> None:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n > limit:
        raise EnumerationTooLarge(f"exhaustive enumeration is capped at n = {limit}, got {n}")


def _prefix_ok(n: int, prefix: str) -> bool:
    h = ups = 0
    for c in prefix:
        if c == "U":
            h += 1
            ups += 1
        elif c == "D":
            h -= 1
        else:
            return False
        if h < 0:
            return False
    return ups <= n and len(prefix) - ups <= n


def iterate_dyck(n: int, prefix: str = "") -> Iterator[DyckWord]:
    """Yield every Dyck word of semilength n starting with ``prefix``.

    Words come out in lexicographic order with U < D, so the first full
    word is U^n D^n and the last is (UD)^n.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if not _prefix_ok(n, prefix):
        return
    p = len(prefix)
    ups = prefix.count("U")
    w = list(prefix) + ["U"] * (n - ups) + ["D"] * (n + ups - p)
    size = 2 * n
    while True:
        yield str.__new__(DyckWord, "".join(w))
        # Rightmost U (outside the fixed prefix) that can flip to D.
        h_after = 0
        suffix_ups = 0
        j = size - 1
        while j >= p:
            if w[j] == "U":
                h_before = h_after - 1
                suffix_ups += 1
                if h_before >= 1:
                    break
            else:
                h_before = h_after + 1
            h_after = h_before
            j -= 1
        if j < p:
            return
        w[j] = "D"
        tail = size - j - 1
        w[j + 1:] = ["U"] * suffix_ups + ["D"] * (tail - suffix_ups)


def dyck_prefixes(n: int, depth: int) -> list[str]:
    """All extendable prefixes of length ``depth``, in the iteration order."""
    depth = min(depth, 2 * n)
    out = [""]
    for _ in range(depth):
        out = [q + c for q in out for c in "UD" if _prefix_ok(n, q + c) and _room(n, q + c)]
    return out


def _room(n: int, prefix: str) -> bool:
    # the remaining steps must be able to close the current height
    h = prefix.count("U") * 2 - len(prefix)
    return h <= 2 * n - len(prefix)


@dataclass
class LevelTotals:
    """Sums over all trees with n edges, each list indexed by level 0..n."""

    n: int
    trees: int = 0
    total_d: list[int] = field(default_factory=list)
    total_b: list[int] = field(default_factory=list)
    total_d_trunc: list[int] = field(default_factory=list)
    level_count: list[int] = field(default_factory=list)
    moment_v1: list[int] = field(default_factory=list)
    moment_v2: list[int] = field(default_factory=list)
    # sum over trees of (m - 1)(n - k - m)
    trunc_pair_weight: list[int] = field(default_factory=list)

    def __post_init__(self):
        w = self.n + 1
        for name in ("total_d", "total_b", "total_d_trunc", "level_count",
                     "moment_v1", "moment_v2", "trunc_pair_weight"):
            if not getattr(self, name):
                setattr(self, name, [0] * w)

    def merge(self, other: "LevelTotals") -> None:
        self.trees += other.trees
        for name in ("total_d", "total_b", "total_d_trunc", "level_count",
                     "moment_v1", "moment_v2", "trunc_pair_weight"):
            mine = getattr(self, name)
            for i, x in enumerate(getattr(other, name)):
                mine[i] += x


def _accumulate(acc: LevelTotals, word: str) -> None:
    """Add one tree, read straight off its Dyck word.

    Pre-order visits the nodes in word order; BFS visits level by level and,
    within a level, in the same left-to-right order as pre-order.
    """
    n = acc.n
    width = n + 1
    h = [0] * width
    dfs = [0] * width
    trunc = [0] * width
    within = [0] * width
    h[0] = 1
    level = 0
    rank = 0
    for c in word:
        if c == "U":
            level += 1
            rank += 1
            dfs[level] += rank
            trunc[level] += sum(h[:level + 1])
            within[level] += h[level]
            h[level] += 1
        else:
            level -= 1
    acc.trees += 1
    below = 0  # nodes at levels < l
    for l in range(width):
        m = h[l]
        v = width - below
        acc.total_d[l] += dfs[l]
        acc.total_d_trunc[l] += trunc[l]
        acc.total_b[l] += m * below + within[l]
        acc.level_count[l] += m
        acc.moment_v1[l] += v
        acc.moment_v2[l] += v * (v - 1) // 2
        k = below - 1 if l else 0
        acc.trunc_pair_weight[l] += (m - 1) * (n - k - m)
        below += m


def _totals_for_prefix(args: tuple[int, str]) -> LevelTotals:
    n, prefix = args
    acc = LevelTotals(n)
    for w in iterate_dyck(n, prefix):
        _accumulate(acc, w)
    return acc


def enumerate_totals(n: int, workers: int = 1, split_depth: int = 6) -> LevelTotals:
    """Aggregate every tree in T_n. ``workers > 1`` fans out over prefixes."""
    _check_size(n)
    if workers <= 1:
        return _totals_for_prefix((n, ""))
    jobs = [(n, q) for q in dyck_prefixes(n, split_depth)]
    acc = LevelTotals(n)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_totals_for_prefix, jobs):
            acc.merge(part)
    return acc


@lru_cache(maxsize=32)
def _cached_totals(n: int) -> LevelTotals:
    return enumerate_totals(n)


def _check_level(n: int, level: int) -> None:
    if not 0 <= level <= n:
        raise ValueError(f"level must lie in 0..{n}, got {level}")


def oracle_totals(n: int, level: int) -> tuple[int, int, int, int]:
    """(totalD, totalB, totalDTrunc, level count) by exhaustive enumeration."""
    _check_size(n)
    _check_level(n, level)
    t = _cached_totals(n)
    return t.total_d[level], t.total_b[level], t.total_d_trunc[level], t.level_count[level]


def oracle_moment_v(n: int, level: int, order: int) -> int:
    """Sum over trees of v(level) (order 1) or C(v(level), 2) (order 2)."""
    _check_size(n)
    _check_level(n, level)
    t = _cached_totals(n)
    if order == 1:
        return t.moment_v1[level]
    if order == 2:
        return t.moment_v2[level]
    raise ValueError(f"order must be 1 or 2, got {order}")


@lru_cache(maxsize=8)
def _km_counts(n: int) -> tuple[Counter, ...]:
    """Per level l: how many trees have (k, m) = (non-root nodes above l, nodes at l)."""
    _check_size(n)
    counts = tuple(Counter() for _ in range(n + 2))
    for w in iterate_dyck(n):
        h = [0] * (n + 2)
        h[0] = 1
        level = 0
        for c in w:
            if c == "U":
                level += 1
                h[level] += 1
            else:
                level -= 1
        below = 0
        for l in range(n + 2):
            k = below - 1 if l else 0
            counts[l][k, h[l]] += 1
            below += h[l]
    return counts


def oracle_xy_sum(n: int, level: int, x0, y0) -> Fraction:
    """Sum over trees of x0**k(T) * y0**m(T), evaluated exactly."""
    if level < 0:
        raise ValueError("level must be non-negative")
    x0, y0 = Fraction(x0), Fraction(y0)
    counts = _km_counts(n)
    if level > n:
        # no tree reaches that deep: every non-root node is above it
        return catalan(n) * x0 ** n
    return sum((c * x0 ** k * y0 ** m for (k, m), c in counts[level].items()), Fraction(0))


def trunc_diff_pairs_in_tree(t: OrderedTree) -> list[int]:
    """Per level l, the pairs (x, y) in ``t`` that truncated DFS skips.

    x sits at level l, y deeper than l, y is visited before x by DFS and y
    is not a descendant of x.
    """
    sc = score_tree(t, 0)
    out = [0] * (t.n + 1)
    for x in range(t.size):
        lx, px, cx = sc.level[x], sc.dfs[x], sc.descendants[x]
        for y in range(t.size):
            if sc.level[y] <= lx or sc.dfs[y] >= px:
                continue
            if px < sc.dfs[y] <= px + cx:
                continue
            out[lx] += 1
    return out


@lru_cache(maxsize=8)
def _pair_counts(n: int) -> tuple[int, ...]:
    _check_size(n, 12)
    out = [0] * (n + 1)
    for w in iterate_dyck(n):
        for l, c in enumerate(trunc_diff_pairs_in_tree(tree_from_dyck(w))):
            out[l] += c
    return tuple(out)


def oracle_trunc_diff_pairs(n: int, level: int) -> int:
    """Pairs skipped by truncated DFS, counted pair by pair (n <= 12)."""
    _check_level(n, level)
    return _pair_counts(n)[level]


def oracle_totals_from_scores(n: int) -> LevelTotals:
    """Slow path through :func:`score_tree`; cross-checks the word reader."""
    _check_size(n, 10)
    acc = LevelTotals(n)
    for w in iterate_dyck(n):
        t = tree_from_dyck(w)
        acc.trees += 1
        lev = t.levels()
        h = [0] * (n + 1)
        for x in lev:
            h[x] += 1
        for l in range(n + 1):
            sc = score_tree(t, l)
            for v in range(t.size):
                if lev[v] == l:
                    acc.total_d[l] += sc.dfs[v]
                    acc.total_b[l] += sc.bfs[v]
                    acc.total_d_trunc[l] += sc.trunc[v]
                    acc.level_count[l] += 1
            vl = sum(1 for x in lev if x >= l)
            acc.moment_v1[l] += vl
            acc.moment_v2[l] += binom(vl, 2)
            k = sum(1 for x in lev if 0 < x < l)
            acc.trunc_pair_weight[l] += (h[l] - 1) * (n - k - h[l])
    return acc
