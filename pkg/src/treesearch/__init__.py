"""Exact and asymptotic analysis of breadth-first and depth-first search for
a node at a given level of a random ordered tree."""

from .closed_forms import (
    level_count,
    total_b,
    total_b_alt,
    total_d,
    total_d_trunc,
    takacs_moment,
)
from .combinatorics import ballot, binom, catalan

__version__ = "0.1.0"

__all__ = [
    "ballot", "binom", "catalan", "level_count", "takacs_moment",
    "total_b", "total_b_alt", "total_d", "total_d_trunc",
]
