"""Ordered trees, their Dyck-word encoding, and the three search orders.

Nodes are integers ``0..n`` with an ordered child list each; node 0 is the
root. Trees built from Dyck words are indexed in pre-order, but nothing
relies on that: :func:`mirror` keeps node ids and only reverses child
lists, so ``x`` in ``t`` and ``x`` in ``mirror(t)`` are corresponding nodes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

__all__ = [
    "DyckWord",
    "OrderedTree",
    "ScoreTable",
    "LevelProfile",
    "tree_from_dyck",
    "dyck_from_tree",
    "score_tree",
    "level_profile",
    "mirror",
    "path_tree",
    "tree_from_bfs_degrees",
]


class DyckWord(str):
    """An ASCII word over {U, D} whose prefixes never have more D than U."""

    def __new__(cls, steps: str = ""):
        height = 0
        for i, c in enumerate(steps):
            if c == "U":
                height += 1
            elif c == "D":
                height -= 1
                if height < 0:
                    raise ValueError(f"prefix of length {i + 1} dips below zero: {steps!r}")
            else:
                raise ValueError(f"invalid step {c!r} in {steps!r}")
        if height:
            raise ValueError(f"unbalanced word (final height {height}): {steps!r}")
        return super().__new__(cls, steps)

    @property
    def semilength(self) -> int:
        return len(self) // 2


@dataclass(frozen=True)
class OrderedTree:
    children: tuple[tuple[int, ...], ...]
    root: int = 0

    def __post_init__(self):
        size = len(self.children)
        seen = [False] * size
        seen[self.root] = True
        stack = [self.root]
        count = 1
        while stack:
            v = stack.pop()
            for c in self.children[v]:
                if not 0 <= c < size or seen[c]:
                    raise ValueError(f"node {c} is out of range or has two parents")
                seen[c] = True
                count += 1
                stack.append(c)
        if count != size:
            raise ValueError("tree is not connected")

    @property
    def n(self) -> int:
        """Edge count."""
        return len(self.children) - 1

    @property
    def size(self) -> int:
        return len(self.children)

    def parents(self) -> list[int]:
        par = [-1] * self.size
        for v, kids in enumerate(self.children):
            for c in kids:
                par[c] = v
        return par

    def preorder(self) -> list[int]:
        order = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(self.children[v]))
        return order

    def levels(self) -> list[int]:
        lev = [0] * self.size
        for v in self.preorder():
            for c in self.children[v]:
                lev[c] = lev[v] + 1
        return lev

    def canonical(self) -> "OrderedTree":
        """Same shape, nodes renumbered in pre-order."""
        return tree_from_dyck(dyck_from_tree(self))


def path_tree(n: int) -> OrderedTree:
    return OrderedTree(tuple((i + 1,) for i in range(n)) + ((),))


def tree_from_dyck(w: str) -> OrderedTree:
    w = w if isinstance(w, DyckWord) else DyckWord(w)
    kids: list[list[int]] = [[]]
    stack = [0]
    for c in w:
        if c == "U":
            v = len(kids)
            kids.append([])
            kids[stack[-1]].append(v)
            stack.append(v)
        else:
            stack.pop()
    return OrderedTree(tuple(tuple(k) for k in kids))


def dyck_from_tree(t: OrderedTree) -> DyckWord:
    out = []
    # (node, index of next child to descend into)
    stack = [(t.root, 0)]
    while stack:
        v, i = stack[-1]
        kids = t.children[v]
        if i < len(kids):
            stack[-1] = (v, i + 1)
            out.append("U")
            stack.append((kids[i], 0))
        else:
            stack.pop()
            if stack:
                out.append("D")
    return DyckWord("".join(out))


def tree_from_bfs_degrees(degrees: Sequence[int]) -> OrderedTree:
    """Decode child counts listed in breadth-first order."""
    kids: list[tuple[int, ...]] = []
    nxt = 1
    for d in degrees:
        d = int(d)
        kids.append(tuple(range(nxt, nxt + d)))
        nxt += d
    if nxt != len(kids):
        raise ValueError("degree sequence does not describe a single tree")
    return OrderedTree(tuple(kids))


def mirror(t: OrderedTree) -> OrderedTree:
    return OrderedTree(tuple(k[::-1] for k in t.children), t.root)


@dataclass(frozen=True)
class ScoreTable:
    """Per-node search ranks for one tree and one query level.

    ``trunc`` is ``None`` for nodes deeper than ``query_level``; truncated
    DFS never visits them.
    """

    query_level: int
    level: tuple[int, ...]
    bfs: tuple[int, ...]
    dfs: tuple[int, ...]
    trunc: tuple[Optional[int], ...]
    descendants: tuple[int, ...]


def score_tree(t: OrderedTree, level: int) -> ScoreTable:
    if not 0 <= level <= t.n:
        raise ValueError(f"query level {level} outside 0..{t.n}")
    size = t.size
    lev = [0] * size
    bfs = [0] * size
    queue = deque([t.root])
    rank = 0
    while queue:
        v = queue.popleft()
        bfs[v] = rank
        rank += 1
        for c in t.children[v]:
            lev[c] = lev[v] + 1
            queue.append(c)

    order = t.preorder()
    dfs = [0] * size
    trunc: list[Optional[int]] = [None] * size
    seen_shallow = 0
    for r, v in enumerate(order):
        dfs[v] = r
        if lev[v] <= level:
            trunc[v] = seen_shallow
            seen_shallow += 1

    desc = [0] * size
    for v in reversed(order):
        desc[v] = sum(desc[c] + 1 for c in t.children[v])

    return ScoreTable(level, tuple(lev), tuple(bfs), tuple(dfs), tuple(trunc), tuple(desc))


@dataclass(frozen=True)
class LevelProfile:
    """Occupancy statistics indexed by level ``0..n``.

    h[l]: nodes at level l; H[l]: nodes at levels <= l; v[l]: nodes at
    levels >= l; S_bfs[l]: sum of BFS ranks of the level-l nodes.
    """

    h: tuple[int, ...]
    H: tuple[int, ...]
    v: tuple[int, ...]
    S_bfs: tuple[int, ...]


def level_profile(t: OrderedTree, scores: ScoreTable) -> LevelProfile:
    width = t.n + 1
    h = [0] * width
    s = [0] * width
    for lv, b in zip(scores.level, scores.bfs):
        h[lv] += 1
        s[lv] += b
    cum = []
    total = 0
    for x in h:
        total += x
        cum.append(total)
    tail = [t.size - (cum[l - 1] if l else 0) for l in range(width)]
    return LevelProfile(tuple(h), tuple(cum), tuple(tail), tuple(s))
