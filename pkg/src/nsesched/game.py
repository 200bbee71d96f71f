"""Games, preference orders, strategy profiles and attacker best responses.

Targets and defenders are 0-based inside the library. File formats and the
CLI use 1-based target ids.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .coverage import CoverageSet
from .exceptions import GameValidationError

DEFAULT_TIE_TOL = 1e-9


@dataclass(frozen=True)
class PreferenceOrder:
    """Strict total order over targets, most preferred (to be attacked) first."""

    ranking: tuple[int, ...]
    _position: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranking = tuple(int(t) for t in self.ranking)
        if sorted(ranking) != list(range(len(ranking))):
            raise GameValidationError(f"preference {ranking} is not a permutation of 0..{len(ranking) - 1}")
        position = [0] * len(ranking)
        for pos, t in enumerate(ranking):
            position[t] = pos
        object.__setattr__(self, "ranking", ranking)
        object.__setattr__(self, "_position", tuple(position))

    def __len__(self):
        return len(self.ranking)

    def rank(self, t: int) -> int:
        """1-based position of target ``t`` (1 = most preferred)."""
        return self._position[t] + 1

    def prefers(self, j: int, k: int) -> bool:
        """True iff ``j`` is strictly preferred over ``k``."""
        return self._position[j] < self._position[k]

    def above(self, t: int) -> frozenset[int]:
        return frozenset(self.ranking[: self._position[t]])

    def above_eq(self, t: int) -> frozenset[int]:
        return frozenset(self.ranking[: self._position[t] + 1])

    def below(self, t: int) -> frozenset[int]:
        return frozenset(self.ranking[self._position[t] + 1:])

    def below_eq(self, t: int) -> frozenset[int]:
        return frozenset(self.ranking[self._position[t]:])

    @property
    def most_preferred(self) -> int:
        return self.ranking[0]


@dataclass(frozen=True)
class Defender:
    preference: PreferenceOrder
    coverage_set: CoverageSet


@dataclass(frozen=True)
class Game:
    num_targets: int
    defenders: tuple[Defender, ...]
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "defenders", tuple(self.defenders))
        if self.num_targets < 1:
            raise GameValidationError("a game needs at least one target")
        if not self.defenders:
            raise GameValidationError("a game needs at least one defender")
        for i, d in enumerate(self.defenders):
            if len(d.preference) != self.num_targets:
                raise GameValidationError(
                    f"defender {i + 1} ranks {len(d.preference)} targets, expected {self.num_targets}"
                )
            if d.coverage_set.num_targets != self.num_targets:
                raise GameValidationError(
                    f"defender {i + 1} coverage set spans {d.coverage_set.num_targets} targets, "
                    f"expected {self.num_targets}"
                )

    @property
    def n(self) -> int:
        return len(self.defenders)

    @property
    def preferences(self) -> list[PreferenceOrder]:
        return [d.preference for d in self.defenders]

    def label(self, t: int) -> str:
        labels = self.metadata.get("target_labels")
        if labels:
            return str(labels[t])
        return str(t + 1)


@dataclass(frozen=True)
class StrategyProfile:
    """Coverages of every defender (an ``n x T`` array) plus the attacked target."""

    coverages: np.ndarray
    target: int

    def __post_init__(self):
        cov = np.array(self.coverages, dtype=float)
        if cov.ndim != 2:
            raise GameValidationError("coverages must be a list of equal-length vectors")
        if not 0 <= self.target < cov.shape[1]:
            raise GameValidationError(f"target {self.target + 1} out of range 1..{cov.shape[1]}")
        cov.setflags(write=False)
        object.__setattr__(self, "coverages", cov)
        object.__setattr__(self, "target", int(self.target))

    @property
    def n(self) -> int:
        return self.coverages.shape[0]

    @property
    def num_targets(self) -> int:
        return self.coverages.shape[1]

    def replace(self, i: int | None = None, coverage=None, target: int | None = None) -> "StrategyProfile":
        cov = self.coverages.copy()
        if i is not None:
            cov[i] = coverage
        return StrategyProfile(cov, self.target if target is None else target)


def total_coverage(profile: StrategyProfile | Sequence[Sequence[float]]) -> np.ndarray:
    """Componentwise sum of all defenders' coverage."""
    if isinstance(profile, StrategyProfile):
        cov = profile.coverages
    else:
        try:
            cov = np.array([np.asarray(v, dtype=float) for v in profile])
        except ValueError as exc:
            raise GameValidationError(f"coverage vectors differ in length: {exc}") from None
        if cov.ndim != 2:
            raise GameValidationError("coverage vectors differ in length")
    return cov.sum(axis=0)


def best_response_set(v_total, tie_tol: float = DEFAULT_TIE_TOL) -> frozenset[int]:
    """Targets whose total coverage is within ``tie_tol`` of the minimum."""
    v = np.asarray(v_total, dtype=float)
    return frozenset(np.flatnonzero(v <= v.min() + tie_tol).tolist())


def is_aic(profile: StrategyProfile, tie_tol: float = DEFAULT_TIE_TOL) -> bool:
    return profile.target in best_response_set(total_coverage(profile), tie_tol)


def is_waic(game: Game, profile: StrategyProfile, i: int, tie_tol: float = DEFAULT_TIE_TOL) -> bool:
    """Attacked target is a best response and every tie is weakly better for defender ``i``."""
    br = best_response_set(total_coverage(profile), tie_tol)
    if profile.target not in br:
        return False
    pref = game.defenders[i].preference
    return all(not pref.prefers(profile.target, other) for other in br)
