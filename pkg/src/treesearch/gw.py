"""Conditioned Galton-Watson trees and Monte Carlo estimates of level statistics.

A sample is the list of child counts of the n+1 nodes in breadth-first
order. It is drawn in two steps: an exchangeable vector of offspring counts
conditioned on summing to n, then the cyclic rotation that turns it into a
valid breadth-first degree sequence (the cycle lemma).

Randomness comes from numpy's Philox counter generator. Samples are cut
into blocks whose size depends only on n; block b of a run with seed s uses
the key (s, tag) and starts its counter at (0, 0, b, 0), so every block owns
a disjoint stretch of the Philox stream. Blocks are reduced in index order,
which makes every report independent of the number of threads.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .asymptotics import k_const
from .closed_forms import level_count, takacs_moment, total_b
from .combinatorics import catalan
from .trees import OrderedTree, tree_from_bfs_degrees

__all__ = [
    "OffspringLaw",
    "parse_law",
    "SimConfig",
    "EstimateReport",
    "substream",
    "default_threads",
    "block_size",
    "sample_degrees",
    "sample_degrees_rejection",
    "cycle_rotate",
    "sample_conditioned_tree",
    "level_stats",
    "mc_estimate_S",
    "mc_estimate_occupation",
    "scaling_sweep",
    "sweep_csv",
    "SWEEP_COLUMNS",
    "exact_mean_S",
]

_MASK64 = (1 << 64) - 1
_TAG_EXACT = 0
_TAG_REJECTION = 1

# elements per block: keeps a block of samples within a few tens of MB
_BLOCK_ELEMS = 1 << 20


@dataclass(frozen=True)
class OffspringLaw:
    """Mean-one offspring law. ``kind`` is geometric, poisson, binomial or mary."""

    kind: str
    m: int = 0

    def __post_init__(self):
        if self.kind not in ("geometric", "poisson", "binomial", "mary"):
            raise ValueError(f"unknown offspring law {self.kind!r}")
        if self.kind in ("binomial", "mary") and self.m < 2:
            raise ValueError(f"{self.kind} law needs m >= 2")

    @property
    def name(self) -> str:
        return self.kind if self.kind in ("geometric", "poisson") else f"{self.kind}:{self.m}"

    def pmf(self, k: int):
        """P(Z = k): a Fraction where the law is rational, a float for Poisson."""
        if k < 0:
            return Fraction(0)
        if self.kind == "geometric":
            return Fraction(1, 2 ** (k + 1))
        if self.kind == "binomial":
            m = self.m
            if k > m:
                return Fraction(0)
            return math.comb(m, k) * Fraction(1, m) ** k * Fraction(m - 1, m) ** (m - k)
        if self.kind == "mary":
            return {0: Fraction(self.m - 1, self.m), self.m: Fraction(1, self.m)}.get(k, Fraction(0))
        return math.exp(-1.0 - math.lgamma(k + 1))

    def support_max(self) -> Optional[int]:
        return {"binomial": self.m, "mary": self.m}.get(self.kind)

    @property
    def mean(self) -> Fraction:
        return self._moment(1)

    @property
    def variance(self) -> Fraction:
        return self._moment(2) - self._moment(1) ** 2

    def _moment(self, r: int) -> Fraction:
        if self.kind == "poisson":
            # weights w_k = 1/k! satisfy k w_k = w_{k-1}, so the factorial
            # moments E[Z(Z-1)...(Z-j+1)] all equal 1
            return Fraction({1: 1, 2: 2}[r])
        if self.kind == "geometric":
            # closed sums of k^r / 2^(k+1)
            return Fraction({1: 1, 2: 3}[r])
        return sum((Fraction(k) ** r * self.pmf(k) for k in range(self.support_max() + 1)), Fraction(0))

    def feasible(self, n: int) -> bool:
        if n < 0:
            return False
        if self.kind == "mary":
            return n % self.m == 0
        return True


def parse_law(text: str) -> OffspringLaw:
    """``geometric``, ``poisson``, ``binomial:M`` or ``mary:M``."""
    kind, _, arg = text.strip().partition(":")
    aliases = {"geometric-half": "geometric", "poisson-one": "poisson", "strict-m-ary": "mary"}
    kind = aliases.get(kind, kind)
    if kind in ("binomial", "mary"):
        if not arg.isdigit():
            raise ValueError(f"law {text!r} needs an integer parameter, e.g. {kind}:2")
        return OffspringLaw(kind, int(arg))
    if arg:
        raise ValueError(f"law {kind!r} takes no parameter")
    return OffspringLaw(kind)


@dataclass(frozen=True)
class SimConfig:
    n: int
    law: OffspringLaw
    samples: int
    seed: int
    level: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if not 0 <= self.level <= self.n:
            raise ValueError(f"level must lie in 0..{self.n}")
        if not self.law.feasible(self.n):
            raise ValueError(f"no tree with {self.n} edges under law {self.law.name}")


@dataclass(frozen=True)
class EstimateReport:
    mean: float
    stderr: float
    samples: int
    target: Optional[float] = None

    def as_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "samples": self.samples, "target": self.target}


def default_threads() -> int:
    raw = os.environ.get("TREESEARCH_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def substream(seed: int, block: int, tag: int = _TAG_EXACT) -> np.random.Generator:
    key = (seed & _MASK64) | (tag << 64)
    return np.random.Generator(np.random.Philox(key=key, counter=[0, 0, block, 0]))


def block_size(n: int) -> int:
    return max(16, _BLOCK_ELEMS // (2 * n + 2))


def _subset_rows(rng: np.random.Generator, rows: int, pool: int, k: int) -> np.ndarray:
    """Each row: a uniform k-subset of range(pool), sorted ascending."""
    if k == 0:
        return np.empty((rows, 0), dtype=np.int64)
    keys = rng.random((rows, pool))
    if k < pool:
        pick = np.argpartition(keys, k - 1, axis=1)[:, :k]
    else:
        pick = np.broadcast_to(np.arange(pool), (rows, pool))
    return np.sort(pick, axis=1).astype(np.int64)


def _row_counts(labels: np.ndarray, width: int) -> np.ndarray:
    """Per row, how often each of 0..width-1 appears."""
    rows = labels.shape[0]
    flat = (labels + width * np.arange(rows, dtype=np.int64)[:, None]).ravel()
    return np.bincount(flat, minlength=rows * width).reshape(rows, width)


def _exchangeable(law: OffspringLaw, n: int, rows: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. offspring counts for n+1 nodes, conditioned on summing to n."""
    width = n + 1
    if law.kind == "geometric":
        # uniform weak composition: n stars among 2n slots, the rest are bars
        stars = _subset_rows(rng, rows, 2 * n, n)
        node = stars - np.arange(n, dtype=np.int64)
        return _row_counts(node, width)
    if law.kind == "poisson":
        return _row_counts(rng.integers(0, width, size=(rows, n)), width)
    if law.kind == "binomial":
        # each node owns m slots; a uniform n-subset of all slots
        slots = _subset_rows(rng, rows, law.m * width, n)
        return _row_counts(slots // law.m, width)
    # mary: n/m nodes get m children
    parents = _subset_rows(rng, rows, width, n // law.m)
    return _row_counts(parents, width) * law.m


def cycle_rotate(xi: np.ndarray) -> np.ndarray:
    """Rotate each row so that its walk sum(xi - 1) first hits -1 at the last node."""
    xi = np.asarray(xi, dtype=np.int64)
    if xi.ndim == 1:
        return cycle_rotate(xi[None, :])[0]
    width = xi.shape[1]
    walk = np.cumsum(xi - 1, axis=1)
    start = (np.argmin(walk, axis=1) + 1) % width
    idx = (start[:, None] + np.arange(width)) % width
    return np.take_along_axis(xi, idx, axis=1)


def sample_degrees(cfg: SimConfig, block: int, rows: Optional[int] = None) -> np.ndarray:
    """Breadth-first degree sequences for one block of samples."""
    rows = block_size(cfg.n) if rows is None else rows
    rng = substream(cfg.seed, block)
    return cycle_rotate(_exchangeable(cfg.law, cfg.n, rows, rng))


def sample_degrees_rejection(cfg: SimConfig, rows: int, block: int = 0,
                             max_tries: int = 10_000_000) -> np.ndarray:
    """Reference sampler: i.i.d. draws from the pmf, kept only when they sum to n."""
    n = cfg.n
    rng = substream(cfg.seed, block, _TAG_REJECTION)
    cap = cfg.law.support_max()
    top = n if cap is None else min(cap, n)
    probs = np.array([float(cfg.law.pmf(k)) for k in range(top + 1)])
    # the leftover mass stands for draws above n, which can never be kept
    tail = max(0.0, 1.0 - probs.sum())
    probs = np.append(probs, tail)
    probs /= probs.sum()
    out = []
    tries = 0
    while len(out) < rows:
        batch = rng.choice(top + 2, size=(4096, n + 1), p=probs)
        ok = (batch <= top).all(axis=1) & (batch.sum(axis=1) == n)
        out.extend(batch[ok])
        tries += 4096
        if tries > max_tries:
            raise RuntimeError("rejection sampler exceeded its budget")
    return cycle_rotate(np.array(out[:rows], dtype=np.int64))


def sample_conditioned_tree(cfg: SimConfig, rng: np.random.Generator) -> OrderedTree:
    """One tree drawn with the caller's generator."""
    xi = cycle_rotate(_exchangeable(cfg.law, cfg.n, 1, rng))[0]
    return tree_from_bfs_degrees(xi.tolist())


def level_stats(deg: np.ndarray, level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(S, v, h) at ``level`` for each breadth-first degree row.

    Nodes at levels <= j occupy the first H(j) breadth-first slots, with
    H(0) = 1 and H(j+1) = 1 + (children of the first H(j) nodes). The level-l
    nodes hold ranks H(l-1)..H(l)-1, so S is a difference of triangular numbers.
    """
    rows, width = deg.shape
    cum = np.cumsum(deg, axis=1)
    r = np.arange(rows)
    h_prev = np.zeros(rows, dtype=np.int64)
    h_cur = np.ones(rows, dtype=np.int64)
    for _ in range(level):
        h_prev, h_cur = h_cur, 1 + cum[r, h_cur - 1]
    s = h_cur * (h_cur - 1) // 2 - h_prev * (h_prev - 1) // 2
    v = width - h_prev
    h = h_cur - h_prev
    return s, v, h


def _block_moments(x: np.ndarray) -> tuple[int, float, float]:
    x = x.astype(np.float64)
    mean = float(x.mean())
    return len(x), mean, float(((x - mean) ** 2).sum())


def _combine(a: tuple[int, float, float], b: tuple[int, float, float]) -> tuple[int, float, float]:
    na, ma, qa = a
    nb, mb, qb = b
    if na == 0:
        return b
    tot = na + nb
    delta = mb - ma
    return tot, ma + delta * nb / tot, qa + qb + delta * delta * na * nb / tot


def _run_blocks(cfg: SimConfig, fn: Callable[[np.ndarray], tuple], threads: int) -> list:
    size = block_size(cfg.n)
    nblocks = -(-cfg.samples // size)

    def job(b: int):
        rows = min(size, cfg.samples - b * size)
        return fn(sample_degrees(cfg, b, rows))

    if threads <= 1:
        return [job(b) for b in range(nblocks)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(job, range(nblocks)))


def _report(parts: Iterable[tuple[int, float, float]], target: Optional[float]) -> EstimateReport:
    acc = (0, 0.0, 0.0)
    for p in parts:
        acc = _combine(acc, p)
    count, mean, m2 = acc
    stderr = math.sqrt(m2 / (count - 1) / count) if count > 1 else float("nan")
    return EstimateReport(mean, stderr, count, target)


def exact_mean_S(n: int, level: int) -> float:
    """E[S_n(level)] for uniform ordered trees: totalB / catalan(n)."""
    return float(Fraction(total_b(n, level), catalan(n)))


def mc_estimate_S(cfg: SimConfig, threads: Optional[int] = None) -> EstimateReport:
    threads = default_threads() if threads is None else threads
    parts = _run_blocks(cfg, lambda d: _block_moments(level_stats(d, cfg.level)[0]), threads)
    target = exact_mean_S(cfg.n, cfg.level) if cfg.law.kind == "geometric" else None
    return _report(parts, target)


def mc_estimate_occupation(cfg: SimConfig, threads: Optional[int] = None) -> tuple[EstimateReport, EstimateReport]:
    """Estimates of E[v_n(level)] and E[h_n(level)]."""
    threads = default_threads() if threads is None else threads

    def fn(d):
        _, v, h = level_stats(d, cfg.level)
        return _block_moments(v), _block_moments(h)

    parts = _run_blocks(cfg, fn, threads)
    v_target = h_target = None
    if cfg.law.kind == "geometric":
        c = catalan(cfg.n)
        v_target = float(Fraction(takacs_moment(cfg.n, cfg.level, 1), c))
        h_target = float(Fraction(level_count(cfg.n, cfg.level), c))
    return _report((p[0] for p in parts), v_target), _report((p[1] for p in parts), h_target)


SWEEP_COLUMNS = ["law", "n", "l", "s", "samples", "mean_S", "stderr", "scaled_mean",
                 "exact_if_available", "theory_sigmaKs", "theory_sigmaKs_half", "theory_Ks",
                 "theory_sigma_over_root2"]


def scaling_sweep(law: OffspringLaw, s_grid: Sequence[float], n_list: Sequence[int],
                  samples: int, seed: int, threads: Optional[int] = None) -> list[dict]:
    """E[S_n(floor(s sqrt n))] / n^{3/2} over a grid, next to the candidate limits.

    The stated limit sigma K_{sigma s}, the variant sigma K_{sigma s / 2}
    and K_s are listed as printed. The last column, (sigma/sqrt 2) K_{sigma s / sqrt 2},
    is the normalisation that reproduces the exact geometric limit K_s when
    the geometric variance is taken as 2.
    """
    sigma = math.sqrt(law.variance)
    rows = []
    for n in n_list:
        for s in s_grid:
            level = min(n, math.floor(s * math.sqrt(n) + 1e-9))
            cfg = SimConfig(n, law, samples, seed, level)
            est = mc_estimate_S(cfg, threads)
            scale = n ** 1.5
            exact = est.target / scale if est.target is not None else None
            rows.append({
                "law": law.name, "n": n, "l": level, "s": s, "samples": samples,
                "mean_S": est.mean, "stderr": est.stderr, "scaled_mean": est.mean / scale,
                "exact_if_available": exact,
                "theory_sigmaKs": sigma * k_const(sigma * s),
                "theory_sigmaKs_half": sigma * k_const(sigma * s / 2),
                "theory_Ks": k_const(s),
                "theory_sigma_over_root2": sigma / math.sqrt(2) * k_const(sigma * s / math.sqrt(2)),
            })
    return rows


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()
