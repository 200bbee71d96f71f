"""JSON formats for games, profiles and reports (1-based target ids)."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .coverage import coverage_set_from_dict
from .exceptions import GameValidationError
from .game import Defender, Game, PreferenceOrder, StrategyProfile


def game_to_dict(game: Game) -> dict:
    out = {
        "num_targets": game.num_targets,
        "defenders": [
            {
                "preference": [t + 1 for t in d.preference.ranking],
                "coverage_set": d.coverage_set.to_dict(),
            }
            for d in game.defenders
        ],
    }
    if game.metadata:
        out["metadata"] = game.metadata
    return out


def game_from_dict(data: dict) -> Game:
    try:
        T = int(data["num_targets"])
        defenders = []
        for d in data["defenders"]:
            ranking = [int(t) - 1 for t in d["preference"]]
            defenders.append(Defender(PreferenceOrder(tuple(ranking)), coverage_set_from_dict(d["coverage_set"])))
    except (KeyError, TypeError) as exc:
        raise GameValidationError(f"malformed game: missing or invalid field {exc}") from None
    return Game(T, tuple(defenders), dict(data.get("metadata", {})))


def profile_to_dict(profile: StrategyProfile) -> dict:
    return {"coverages": profile.coverages.tolist(), "target": profile.target + 1}


def profile_from_dict(data: dict) -> StrategyProfile:
    try:
        return StrategyProfile(np.array(data["coverages"], dtype=float), int(data["target"]) - 1)
    except (KeyError, TypeError, ValueError) as exc:
        raise GameValidationError(f"malformed profile: {exc}") from None


def encode_extended(x: float):
    """Finite floats pass through; infinities become the strings ``"inf"``/``"-inf"``."""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GameValidationError(f"{path}: invalid JSON ({exc})") from None


def load_game(path) -> Game:
    return game_from_dict(load_json(path))


def save_game(game: Game, path) -> None:
    Path(path).write_text(dumps(game_to_dict(game)))


def load_profile(path) -> StrategyProfile:
    return profile_from_dict(load_json(path))


def save_profile(profile: StrategyProfile, path) -> None:
    Path(path).write_text(dumps(profile_to_dict(profile)))
