"""Builders for the shipped example problems."""
from __future__ import annotations

import itertools

from .core import LclProblem


def from_predicate(name, sigma_in, sigma_out, radius, accept, oriented=False) -> LclProblem:
    """Enumerate every window shape (truncated ones included) and keep those `accept` likes.

    `accept(cells, center)` sees the cells as (input, output) pairs.
    """
    pairs = list(itertools.product(sigma_in, sigma_out))
    windows = set()
    for k in range(1, 2 * radius + 2):
        for center in range(k):
            if center > radius or k - 1 - center > radius:
                continue
            for cells in itertools.product(pairs, repeat=k):
                if accept(cells, center):
                    windows.add((cells, center))
    return LclProblem(name, tuple(sigma_in), tuple(sigma_out), radius, frozenset(windows), oriented)


def _neighbours(cells, center):
    return [cells[i] for i in (center - 1, center + 1) if 0 <= i < len(cells)]


def coloring(k: int, name: str = None) -> LclProblem:
    colors = tuple(str(c) for c in range(k))
    return from_predicate(name or f"{k}-coloring", ("a",), colors, 1,
                          lambda cells, c: all(o != cells[c][1] for _, o in _neighbours(cells, c)))


def copy_input(radius: int = 1) -> LclProblem:
    return from_predicate("copy-input", ("0", "1"), ("0", "1"), radius,
                          lambda cells, c: cells[c][0] == cells[c][1])


def all_allowed() -> LclProblem:
    return from_predicate("all-allowed", ("a",), ("A", "B"), 1, lambda cells, c: True)


def maximal_independent_set() -> LclProblem:
    def ok(cells, c):
        nb = [o for _, o in _neighbours(cells, c)]
        if cells[c][1] == "1":
            return "1" not in nb
        return "1" in nb
    return from_predicate("mis", ("a",), ("0", "1"), 1, ok)


def shipped():
    return {
        "copy": copy_input(),
        "2col": coloring(2),
        "3col": coloring(3),
        "allowed": all_allowed(),
        "mis": maximal_independent_set(),
    }
