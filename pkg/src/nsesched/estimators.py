"""scikit-learn style wrappers around the solvers.

``fit`` takes a game (object, dict or JSON path) and stores the equilibrium.
``transform`` returns the coverage matrix, ``predict`` the attacked target and
``score`` whether the stored profile passes the equilibrium check.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import GameValidationError
from .multi import TIE_TOL, solve_multi_ms
from .two import COMPARE_TOL, enumerate_equilibrium_targets, solve_two
from .validation import check_game
from .verify import verify_nse


class _NSEBase(BaseEstimator):
    def _solve(self, game):
        raise NotImplementedError

    def fit(self, game, y=None):
        game = check_game(game)
        self.profile_ = self._solve(game)
        self.n_defenders_ = game.n
        self.n_targets_ = game.num_targets
        return self

    def _check_shape(self, game):
        check_is_fitted(self, "profile_")
        if game is None:
            return None
        game = check_game(game)
        if (game.n, game.num_targets) != (self.n_defenders_, self.n_targets_):
            raise GameValidationError(
                f"estimator was fit on {self.n_defenders_}x{self.n_targets_}, got {game.n}x{game.num_targets}"
            )
        return game

    def transform(self, game=None) -> np.ndarray:
        """Coverage matrix of the fitted profile, one row per defender."""
        self._check_shape(game)
        return np.array(self.profile_.coverages)

    def predict(self, game=None) -> int:
        """Attacked target (0-based) of the fitted profile."""
        self._check_shape(game)
        return self.profile_.target

    def fit_predict(self, game, y=None) -> int:
        return self.fit(game).predict()

    def score(self, game, y=None) -> float:
        """1.0 if the fitted profile is an equilibrium of ``game``, else 0.0."""
        game = self._check_shape(game)
        return float(verify_nse(game, self.profile_).is_nse)


class TwoDefenderNSE(_NSEBase):
    """Two defenders with downward-closed coverage sets.

    Parameters
    ----------
    order : {"index", "preference"}
        Target scan order. ``"preference"`` follows defender 1's ranking and
        returns an efficient equilibrium.
    tol : float
        Slack allowed when comparing maximin heights.
    enumerate_targets : bool
        Also store every equilibrium target in ``equilibrium_targets_``.
    """

    def __init__(self, order="index", tol=COMPARE_TOL, enumerate_targets=False):
        self.order = order
        self.tol = tol
        self.enumerate_targets = enumerate_targets

    def _solve(self, game):
        profile = solve_two(game, order=self.order, tol=self.tol)
        if self.enumerate_targets:
            self.equilibrium_targets_ = enumerate_equilibrium_targets(game, tol=self.tol)
        return profile


class MonotoneNSE(_NSEBase):
    """Any number of defenders with monotone schedules."""

    def __init__(self, tol=TIE_TOL):
        self.tol = tol

    def _solve(self, game):
        return solve_multi_ms(game, tol=self.tol)
