"""Brute-force reference implementations used to cross-check the LP code.

Nothing here touches scipy or the package's polytope blocks.
"""
from __future__ import annotations

import itertools

import numpy as np


def simplex_grid(num: int, steps: int) -> np.ndarray:
    """All weight vectors of length ``num`` with entries in multiples of ``1/steps``."""
    pts = [c for c in itertools.product(range(steps + 1), repeat=num - 1) if sum(c) <= steps]
    return np.array([[*c, steps - sum(c)] for c in pts], dtype=float) / steps


def grid_maximin(schedules, subset, steps: int = 200) -> float:
    """max over grid mixtures of min coverage on ``subset``; a lower bound on the true value."""
    subset = sorted(subset)
    if not subset:
        return float("inf")
    sched = np.asarray(schedules, dtype=float)
    mixes = simplex_grid(sched.shape[0], steps) @ sched
    return float(mixes[:, subset].min(axis=1).max())


def dfs_paths(layers: int, width: int) -> set[tuple[int, ...]]:
    """Every patrol as a tuple of levels, one per layer."""
    out = set()

    def walk(path):
        if len(path) == layers:
            out.add(tuple(path))
            return
        for nxt in range(width):
            if not path or abs(nxt - path[-1]) <= 1:
                walk(path + [nxt])

    walk([])
    return out


def path_indicators(layers: int, width: int) -> np.ndarray:
    rows = []
    for path in sorted(dfs_paths(layers, width)):
        row = np.zeros(layers * width)
        for layer, level in enumerate(path):
            row[layer * width + level] = 1.0
        rows.append(row)
    return np.array(rows)


def grid_deviation_margin(schedules, others, ranking, t_hat, steps: int = 100) -> float:
    """Best margin for an SSAS deviator over grid mixtures.

    Dropping all own coverage on ``t_hat`` and keeping it elsewhere is optimal
    under downward closure, so only the mixture needs searching.
    """
    sched = np.asarray(schedules, dtype=float)
    others = np.asarray(others, dtype=float)
    pos = list(ranking).index(t_hat)
    weak, strict = list(ranking[:pos]), list(ranking[pos + 1:])
    best = -np.inf
    for m in simplex_grid(sched.shape[0], steps) @ sched:
        total = others + m
        base = others[t_hat]
        if weak and (total[weak] - base).min() < 0:
            continue
        margin = (total[strict] - base).min() if strict else np.inf
        best = max(best, margin)
    return best


def brute_force_best_response(total, tol=1e-9) -> set[int]:
    total = np.asarray(total, dtype=float)
    lo = min(total)
    return {j for j, x in enumerate(total) if x <= lo + tol}
