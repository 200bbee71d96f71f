"""Equilibria for any number of defenders under monotone schedules and SSAS."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coverage import ExplicitSchedules, maximin_cov
from .exceptions import ExistenceViolated, MonotoneViolation, PreconditionError
from .game import Game, PreferenceOrder, StrategyProfile
from .validation import check_game, check_ssas

TIE_TOL = 1e-7


@dataclass(frozen=True)
class MonotoneCheck:
    ok: bool
    witness: tuple | None = None  # (defender, schedule index, (preferred target, other target))

    def __bool__(self):
        return self.ok


def check_monotone(game: Game) -> MonotoneCheck:
    """Every schedule must put no more coverage on a target than on any less preferred one."""
    game = check_game(game)
    for i, d in enumerate(game.defenders):
        if not isinstance(d.coverage_set, ExplicitSchedules):
            raise PreconditionError(f"defender {i + 1} has no explicit schedules to check")
        ranking = d.preference.ranking
        for z, s in enumerate(d.coverage_set.schedules):
            ordered = s[list(ranking)]
            for a in range(len(ranking)):
                worse = np.flatnonzero(ordered[a + 1:] < ordered[a])
                if worse.size:
                    return MonotoneCheck(False, (i, z, (ranking[a], ranking[a + 1 + worse[0]])))
    return MonotoneCheck(True)


@dataclass(frozen=True)
class MaximinMatrix:
    """``entries[i, r]``: maximin coverage of defender ``i`` over its ``r+1``-th preferred
    target and everything it likes less. ``f_values[t]`` is the column-wise max at ``t``."""

    entries: np.ndarray
    f_values: np.ndarray
    prefs: tuple[PreferenceOrder, ...]

    def at(self, i: int, t: int) -> float:
        return float(self.entries[i, self.prefs[i].rank(t) - 1])


def build_matrix(game: Game) -> MaximinMatrix:
    game = check_game(game)
    n, T = game.n, game.num_targets
    entries = np.empty((n, T))
    for i, d in enumerate(game.defenders):
        ranking = d.preference.ranking
        for r in range(T):
            entries[i, r] = maximin_cov(d.coverage_set, ranking[r:])[0]
    prefs = tuple(game.preferences)
    f = np.array([max(entries[i, prefs[i].rank(t) - 1] for i in range(n)) for t in range(T)])
    return MaximinMatrix(entries, f, prefs)


def _triangle(matrix, t, j, floor, tol):
    # t <| j: every defender whose entry at t equals the floor prefers t over j
    return all(
        pref.prefers(t, j)
        for i, pref in enumerate(matrix.prefs)
        if abs(matrix.at(i, t) - floor) <= tol
    )


def select_kstar(matrix: MaximinMatrix, prefs=None, tol: float = TIE_TOL) -> int:
    """Lowest-index minimiser of F that no other minimiser beats under the ``<|`` relation."""
    if prefs is not None and tuple(prefs) != matrix.prefs:
        matrix = MaximinMatrix(matrix.entries, matrix.f_values, tuple(prefs))
    floor = float(matrix.f_values.min())
    argmin = np.flatnonzero(matrix.f_values <= floor + tol).tolist()
    for k in argmin:
        if not any(_triangle(matrix, t, k, floor, tol) for t in argmin if t != k):
            return k
    raise ExistenceViolated("the <| relation has no minimal element; check tolerances")


def solve_multi_ms(game: Game, tol: float = TIE_TOL) -> StrategyProfile:
    """Equilibrium for ``n`` defenders with monotone schedules.

    The attacked target gets no coverage; every other target is covered at the
    level F(k*) by one defender who reaches F there and prefers k* to it.
    """
    game = check_game(game)
    check_ssas(game)
    mono = check_monotone(game)
    if not mono:
        raise MonotoneViolation(mono.witness)
    n, T = game.n, game.num_targets
    if n == 1:
        # a lone defender needs no coverage to steer the attacker
        return StrategyProfile(np.zeros((1, T)), game.defenders[0].preference.most_preferred)
    matrix = build_matrix(game)
    k = select_kstar(matrix, tol=tol)
    level = float(matrix.f_values[k])
    cov = np.zeros((n, T))
    for t in range(T):
        if t == k:
            continue
        ft = matrix.f_values[t]
        for i in range(n):
            if matrix.at(i, t) >= ft - tol and matrix.prefs[i].prefers(k, t):
                cov[i, t] = level
                break
        else:
            raise ExistenceViolated(f"no defender can cover target {t + 1}; check tolerances")
    return StrategyProfile(cov, k)
