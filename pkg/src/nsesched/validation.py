"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""
from __future__ import annotations

from os import PathLike

import numpy as np

from .coverage import SSAS, ExplicitSchedules, FlowPolytope
from .exceptions import GameValidationError, PreconditionError
from .game import Game, StrategyProfile
from .serialization import game_from_dict, load_game, load_profile, profile_from_dict


def check_game(game, n_defenders: int | None = None) -> Game:
    """Accept a :class:`Game`, a game dict or a path to a game JSON file."""
    if isinstance(game, (str, PathLike)):
        game = load_game(game)
    elif isinstance(game, dict):
        game = game_from_dict(game)
    elif not isinstance(game, Game):
        raise GameValidationError(f"expected a Game, dict or path, got {type(game).__name__}")
    if n_defenders is not None and game.n != n_defenders:
        raise PreconditionError(f"expected {n_defenders} defenders, game has {game.n}")
    return game


def check_profile(profile, game: Game | None = None) -> StrategyProfile:
    if isinstance(profile, (str, PathLike)):
        profile = load_profile(profile)
    elif isinstance(profile, dict):
        profile = profile_from_dict(profile)
    elif not isinstance(profile, StrategyProfile):
        raise GameValidationError(f"expected a StrategyProfile, dict or path, got {type(profile).__name__}")
    if game is not None and (profile.n, profile.num_targets) != (game.n, game.num_targets):
        raise GameValidationError(
            f"profile has shape {profile.n}x{profile.num_targets}, game is {game.n}x{game.num_targets}"
        )
    return profile


def check_coverage_vector(v, num_targets: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (num_targets,):
        raise GameValidationError(f"coverage vector has shape {v.shape}, expected ({num_targets},)")
    if not np.all(np.isfinite(v)):
        raise GameValidationError("coverage entries must be finite")
    return v


def check_ssas(game: Game) -> None:
    """Raise unless every coverage set is downward closed (SSAS schedules or flows)."""
    for i, d in enumerate(game.defenders):
        cs = d.coverage_set
        ok = isinstance(cs, FlowPolytope) or (isinstance(cs, ExplicitSchedules) and cs.mode == SSAS)
        if not ok:
            raise PreconditionError(
                f"defender {i + 1} coverage set must satisfy SSAS (got {cs!r})"
            )
