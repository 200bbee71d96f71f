"""Reproducible random games and named fixtures.

Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64); the
generator name and version are stored in each game's metadata.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .coverage import SSAS, ExplicitSchedules, FlowPolytope, LayeredNetwork
from .exceptions import GameValidationError
from .game import Defender, Game, PreferenceOrder

RNG_NAME = "numpy.PCG64"
GENERATOR_VERSION = 1
FAMILIES = ("rgs", "psg", "pln")

_FAMILY_PARAMS = {
    "rgs": ("targets", "schedules", "support", "defenders", "monotone"),
    "psg": ("grid", "radius"),
    "pln": ("layers", "width", "defenders"),
}


@dataclass(frozen=True)
class GeneratorConfig:
    family: str
    seed: int = 0
    targets: int = 10
    schedules: int = 10
    support: int | None = None
    defenders: int = 2
    monotone: bool = False
    grid: int = 4
    radius: int = 2
    layers: int = 3
    width: int = 4

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GameValidationError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        sizes = {k: v for k, v in asdict(self).items() if k in _FAMILY_PARAMS[self.family] and k != "monotone"}
        for name, value in sizes.items():
            if value is not None and value < 1:
                raise GameValidationError(f"{name} must be >= 1, got {value}")
        if self.family == "rgs" and self.support is not None and self.support > self.targets:
            raise GameValidationError(f"support {self.support} exceeds the number of targets {self.targets}")

    def params(self) -> dict:
        """Family-relevant parameters (support resolved to its effective value)."""
        out = {k: getattr(self, k) for k in _FAMILY_PARAMS[self.family]}
        if self.family == "rgs" and out["support"] is None:
            out["support"] = self.targets
        return out

    def with_seed(self, seed: int) -> "GeneratorConfig":
        return GeneratorConfig(**{**asdict(self), "seed": seed})


def _metadata(config: GeneratorConfig, **extra) -> dict:
    return {
        "family": config.family,
        "seed": config.seed,
        "params": config.params(),
        "rng": RNG_NAME,
        "generator_version": GENERATOR_VERSION,
        **extra,
    }


def make_monotone(schedule: np.ndarray, ranking) -> np.ndarray:
    """Reassign a schedule's entries so the most preferred target gets the smallest."""
    out = np.empty_like(schedule)
    out[list(ranking)] = np.sort(schedule)
    return out


def gen_rgs(config: GeneratorConfig) -> Game:
    """Random integer schedules in {0..10} on a random support of each schedule."""
    rng = np.random.default_rng(config.seed)
    T, S = config.targets, config.schedules
    support = config.support or T
    defenders = []
    for _ in range(config.defenders):
        ranking = rng.permutation(T)
        sched = np.zeros((S, T))
        for z in range(S):
            idx = rng.choice(T, size=support, replace=False)
            sched[z, idx] = rng.integers(0, 11, size=support)
            if config.monotone:
                sched[z] = make_monotone(sched[z], ranking)
        defenders.append(Defender(PreferenceOrder(tuple(ranking.tolist())), ExplicitSchedules(sched, SSAS)))
    return Game(T, tuple(defenders), _metadata(config))


def psg_schedules(m: int, r: int) -> np.ndarray:
    """One footprint per building: 1 on every cell at L1 distance below ``r``."""
    rows, cols = np.divmod(np.arange(m * m), m)
    dist = np.abs(rows[:, None] - rows[None, :]) + np.abs(cols[:, None] - cols[None, :])
    return (dist < r).astype(float)


def gen_psg(config: GeneratorConfig) -> Game:
    """Two defenders placing checkpoints on an ``m x m`` grid; cell ``(row, col)`` is target ``row*m + col``."""
    rng = np.random.default_rng(config.seed)
    m = config.grid
    sched = psg_schedules(m, config.radius)
    defenders = [
        Defender(PreferenceOrder(tuple(rng.permutation(m * m).tolist())), ExplicitSchedules(sched, SSAS))
        for _ in range(2)
    ]
    return Game(m * m, tuple(defenders), _metadata(config))


def gen_pln(config: GeneratorConfig) -> Game:
    """Defenders patrolling the same layered network, each with its own preferences."""
    rng = np.random.default_rng(config.seed)
    net = LayeredNetwork(config.layers, config.width)
    T = net.num_targets
    defenders = [
        Defender(PreferenceOrder(tuple(rng.permutation(T).tolist())), FlowPolytope(net))
        for _ in range(config.defenders)
    ]
    return Game(T, tuple(defenders), _metadata(config))


def generate(config: GeneratorConfig) -> Game:
    return {"rgs": gen_rgs, "psg": gen_psg, "pln": gen_pln}[config.family](config)


EXAMPLE1_LABELS = ("11", "12", "21", "22")


def example1(epsilon: float = 1e-3, k: float = 100, mode: str = SSAS, order=None) -> Game:
    """The 2x2 cyclic counterexample game.

    ``order`` optionally permutes the target labels ``11, 12, 21, 22`` into
    internal indices; by default they map to 0..3 in that order.
    """
    labels = tuple(order) if order is not None else EXAMPLE1_LABELS
    if sorted(labels) != sorted(EXAMPLE1_LABELS):
        raise GameValidationError(f"order must permute {EXAMPLE1_LABELS}")
    e, ke = epsilon, k * epsilon
    by_label = {
        1: [{"11": 1 - e, "12": 1, "21": ke, "22": 0}, {"11": 0, "12": ke, "21": 1, "22": 1 - e}],
        2: [{"11": 1, "12": 0, "21": 1 - e, "22": ke}, {"11": ke, "12": 1 - e, "21": 0, "22": 1}],
    }
    prefs = {1: ("22", "11", "12", "21"), 2: ("21", "12", "11", "22")}
    index = {lab: j for j, lab in enumerate(labels)}
    defenders = []
    for d in (1, 2):
        sched = [[s[lab] for lab in labels] for s in by_label[d]]
        ranking = tuple(index[lab] for lab in prefs[d])
        defenders.append(Defender(PreferenceOrder(ranking), ExplicitSchedules(sched, mode)))
    meta = {"fixture": "example1", "epsilon": epsilon, "k": k, "mode": mode, "target_labels": list(labels)}
    return Game(4, tuple(defenders), meta)


def identity3() -> Game:
    """Three targets, identical preferences 1 > 2 > 3, unit-vector schedules."""
    pref = PreferenceOrder((0, 1, 2))
    defenders = tuple(Defender(pref, ExplicitSchedules(np.eye(3), SSAS)) for _ in range(2))
    return Game(3, defenders, {"fixture": "identity3"})


def fixture(name: str, **params) -> Game:
    if name == "example1":
        return example1(**params)
    if name == "identity3":
        return identity3(**params)
    raise GameValidationError(f"unknown fixture {name!r}; expected 'example1' or 'identity3'")

