"""Equilibria of two-defender games with downward-closed coverage sets.

For a candidate attacked target ``t`` each defender builds a *t-standard*
coverage: a constant height on the targets the rival prefers over ``t`` and
zero elsewhere. The height is the defender's maximin coverage over that set;
it blocks every rival deviation iff it is at least the rival's maximin
coverage over the targets the rival likes no better than ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coverage import maximin_cov
from .exceptions import ExistenceViolated
from .game import Game, StrategyProfile
from .validation import check_game, check_ssas

COMPARE_TOL = 1e-7


class MaximinCache:
    """Memoizes ``maximin_cov`` per (defender, subset) for one game."""

    def __init__(self, game: Game):
        self.game = game
        self._values: dict = {}

    def __call__(self, i: int, subset) -> float:
        key = (i, frozenset(subset))
        if key not in self._values:
            self._values[key] = maximin_cov(self.game.defenders[i].coverage_set, key[1])[0]
        return self._values[key]


def _heights(game, t, i, oracle):
    """(h, g) for defender ``i`` at target ``t``: own blocking height vs rival's push."""
    rival = 1 - i
    pref = game.defenders[rival].preference
    return oracle(i, pref.above(t)), oracle(rival, pref.below_eq(t))


def _check_two(game):
    game = check_game(game, n_defenders=2)
    check_ssas(game)
    return game


def partial_set_nonempty(game: Game, t: int, i: int, tol: float = COMPARE_TOL, oracle=None) -> bool:
    """Whether defender ``i`` has a t-standard coverage that no rival deviation beats."""
    game = _check_two(game)
    oracle = oracle or MaximinCache(game)
    h, g = _heights(game, t, i, oracle)
    return h >= g - tol


def _standard_profile(game, t, h1, h2):
    cov = np.zeros((2, game.num_targets))
    for i, h in ((0, h1), (1, h2)):
        covered = sorted(game.defenders[1 - i].preference.above(t))
        if covered:
            cov[i, covered] = h
    return StrategyProfile(cov, t)


def build_t_standard(game: Game, t: int, tol: float = COMPARE_TOL, oracle=None) -> StrategyProfile | None:
    """The t-standard profile attacking ``t``, or ``None`` if either partial set is empty."""
    game = _check_two(game)
    oracle = oracle or MaximinCache(game)
    h1, g1 = _heights(game, t, 0, oracle)
    h2, g2 = _heights(game, t, 1, oracle)
    if h1 >= g1 - tol and h2 >= g2 - tol:
        return _standard_profile(game, t, h1, h2)
    return None


def target_order(game: Game, order: str = "index") -> list[int]:
    if order == "index":
        return list(range(game.num_targets))
    if order == "preference":
        return list(game.defenders[0].preference.ranking)
    raise ValueError(f"unknown order {order!r}; expected 'index' or 'preference'")


def solve_two(game: Game, order: str = "index", tol: float = COMPARE_TOL) -> StrategyProfile:
    """Return the first t-standard equilibrium found while scanning targets.

    ``order="index"`` scans targets by index. ``order="preference"`` scans in
    defender 1's preference order, which makes the first hit efficient.
    """
    game = _check_two(game)
    oracle = MaximinCache(game)
    for t in target_order(game, order):
        profile = build_t_standard(game, t, tol, oracle)
        if profile is not None:
            return profile
    raise ExistenceViolated("no target admits a t-standard equilibrium; check LP tolerances")


@dataclass(frozen=True)
class EquilibriumTarget:
    target: int
    h1: float
    h2: float
    efficient: bool
    unconstrained: tuple[bool, bool]

    @property
    def efficiency(self) -> str:
        return "Efficient" if self.efficient else "Inefficient"


def is_efficient(game: Game, t: int) -> bool:
    """No target is preferred over ``t`` by both defenders."""
    p1, p2 = game.defenders[0].preference, game.defenders[1].preference
    return not (p1.above(t) & p2.above(t))


def enumerate_equilibrium_targets(
    game: Game, tol: float = COMPARE_TOL, efficient_only: bool = False
) -> list[EquilibriumTarget]:
    """Every target attacked in some t-standard equilibrium, labelled by efficiency.

    With ``efficient_only`` the Pareto-dominated targets are skipped without
    solving their LPs.
    """
    game = _check_two(game)
    oracle = MaximinCache(game)
    out = []
    for t in range(game.num_targets):
        efficient = is_efficient(game, t)
        if efficient_only and not efficient:
            continue
        h1, g1 = _heights(game, t, 0, oracle)
        h2, g2 = _heights(game, t, 1, oracle)
        if h1 >= g1 - tol and h2 >= g2 - tol:
            out.append(EquilibriumTarget(
                target=t,
                h1=0.0 if math.isinf(h1) else h1,
                h2=0.0 if math.isinf(h2) else h2,
                efficient=efficient,
                unconstrained=(math.isinf(h1), math.isinf(h2)),
            ))
    if not out:
        raise ExistenceViolated("no equilibrium target found; check LP tolerances")
    return out
