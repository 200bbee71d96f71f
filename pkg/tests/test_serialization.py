import json
import math

import numpy as np
import pytest

from nsesched import GameValidationError, StrategyProfile, example1, identity3
from nsesched.serialization import (
    encode_extended,
    game_from_dict,
    game_to_dict,
    load_game,
    load_profile,
    profile_from_dict,
    profile_to_dict,
    save_game,
    save_profile,
)
from nsesched.validation import check_game, check_profile


def test_game_dict_is_one_based():
    d = game_to_dict(identity3())
    assert d["defenders"][0]["preference"] == [1, 2, 3]
    assert d["defenders"][0]["coverage_set"]["type"] == "schedules"


def test_game_file_roundtrip(tmp_path):
    g = example1(1e-3, 100, "clearance")
    path = tmp_path / "g.json"
    save_game(g, path)
    back = load_game(path)
    assert back.defenders[0].preference == g.defenders[0].preference
    assert np.array_equal(back.defenders[1].coverage_set.schedules, g.defenders[1].coverage_set.schedules)
    assert back.defenders[0].coverage_set.mode == "clearance"
    assert back.label(0) == "11"


def test_profile_roundtrip(tmp_path):
    p = StrategyProfile(np.array([[0, 0.5], [1, 0]]), 1)
    assert profile_to_dict(p)["target"] == 2
    path = tmp_path / "p.json"
    save_profile(p, path)
    back = load_profile(path)
    assert back.target == 1 and np.array_equal(back.coverages, p.coverages)


def test_infinity_encoding():
    assert encode_extended(math.inf) == "inf"
    assert encode_extended(-math.inf) == "-inf"
    assert encode_extended(0.5) == 0.5


@pytest.mark.parametrize("bad", [
    {},
    {"num_targets": 2, "defenders": [{"preference": [1, 2]}]},
    {"num_targets": 2, "defenders": [{"preference": [1, 1], "coverage_set": {"type": "schedules", "schedules": [[1, 0]]}}]},
    {"num_targets": 2, "defenders": [{"preference": [1, 2], "coverage_set": {"type": "schedules", "schedules": [[1]]}}]},
])
def test_malformed_games(bad):
    with pytest.raises(GameValidationError):
        game_from_dict(bad)


def test_malformed_profile_and_json(tmp_path):
    with pytest.raises(GameValidationError):
        profile_from_dict({"coverages": [[0, 1]]})
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(GameValidationError):
        load_game(path)


def test_check_helpers(tmp_path):
    g = identity3()
    path = tmp_path / "g.json"
    path.write_text(json.dumps(game_to_dict(g)))
    assert check_game(str(path)).num_targets == 3
    assert check_game(game_to_dict(g)).n == 2
    with pytest.raises(GameValidationError):
        check_game(42)
    with pytest.raises(GameValidationError):
        check_profile({"coverages": [[0, 0]], "target": 1}, g)
