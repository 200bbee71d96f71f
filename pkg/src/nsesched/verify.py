"""Definition-level equilibrium checking.

A profile is an equilibrium when the attacked target is a best response and no
defender can move the attack to a target it strictly prefers, with the
attacker breaking post-deviation ties against the deviator. Each possible
deviation is one LP that maximizes the coverage gap between the induced target
and every target the deviator likes less.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .coverage import membership, pad, solve_lp
from .exceptions import PreconditionError
from .game import DEFAULT_TIE_TOL, Game, StrategyProfile, best_response_set, total_coverage
from .serialization import profile_to_dict
from .validation import check_game, check_profile

DELTA_STRICT = 1e-6
MEMBERSHIP_TOL = 1e-7


@dataclass(frozen=True)
class Deviation:
    defender: int
    coverage: np.ndarray
    target: int
    margin: float

    def to_dict(self):
        return {
            "defender": self.defender + 1,
            "coverage": np.asarray(self.coverage).tolist(),
            "target": self.target + 1,
            "margin": self.margin,
        }


def deviation_exists(
    game: Game,
    profile: StrategyProfile,
    i: int,
    t_hat: int,
    delta_strict: float = DELTA_STRICT,
) -> tuple[float, np.ndarray | None]:
    """Best margin by which defender ``i`` can make ``t_hat`` the attacked target.

    Solves ``max delta`` over ``v' in V^i`` such that, with ``v'`` replacing
    ``v^i``, ``t_hat`` has no more total coverage than any target ``i`` likes
    at least as much, and at least ``delta`` less than every target ``i`` likes
    less. Returns ``(delta, v')`` when ``delta > delta_strict``, else
    ``(delta, None)``; ``delta`` is ``-inf`` when no coverage makes ``t_hat``
    a best response ahead of the targets ``i`` prefers.
    """
    pref = game.defenders[i].preference
    if not pref.prefers(t_hat, profile.target):
        raise PreconditionError(
            f"defender {i + 1} does not prefer target {t_hat + 1} over the attacked target {profile.target + 1}"
        )
    V = game.defenders[i].coverage_set
    T = game.num_targets
    others = total_coverage(profile) - profile.coverages[i]
    blk = V.block()

    weak = sorted(pref.above(t_hat))
    strict = sorted(pref.below(t_hat))
    rows, rhs, deltas = [], [], []
    for ks, d in ((weak, 0.0), (strict, 1.0)):
        for k in ks:
            # v'(t_hat) - v'(k) (+ delta) <= others(k) - others(t_hat)
            rows.append((t_hat, k))
            rhs.append(others[k] - others[t_hat])
            deltas.append(d)
    m = len(rows)
    r_idx = np.repeat(np.arange(m), 2)
    c_idx = np.array(rows).ravel() if m else np.zeros(0, dtype=int)
    vals = np.tile([1.0, -1.0], m)
    dev = sp.csr_matrix((vals, (r_idx, c_idx)), shape=(m, blk.width))
    dev = sp.hstack([dev, sp.csr_matrix(np.array(deltas)[:, None])], format="csr")
    A_ub = sp.vstack([pad(blk.A_ub, 1), dev], format="csr")
    b_ub = np.concatenate([blk.b_ub, rhs])
    c = np.zeros(blk.width + 1)
    c[-1] = -1.0
    bounds = ((0, None),) * T + blk.aux_bounds + ((None, None),)
    res = solve_lp(c, A_ub, b_ub, pad(blk.A_eq, 1), blk.b_eq, bounds, allow_infeasible=True)
    if res is None:
        # some target i likes more than t_hat stays strictly below it whatever i does
        return -math.inf, None
    margin = float(res.x[-1])
    if margin > delta_strict:
        return margin, np.clip(res.x[:T], 0.0, None)
    return margin, None


@dataclass(frozen=True)
class VerificationReport:
    feasible: tuple[bool, ...]
    aic: bool
    per_defender_ic: tuple[bool, ...]
    witnesses: tuple[Deviation, ...]
    tolerances: dict = field(default_factory=dict)

    @property
    def is_nse(self) -> bool:
        return all(self.feasible) and self.aic and all(self.per_defender_ic)

    def __bool__(self):
        return self.is_nse

    def to_dict(self):
        return {
            "is_nse": self.is_nse,
            "feasible": list(self.feasible),
            "aic": self.aic,
            "per_defender_ic": list(self.per_defender_ic),
            "witness_deviations": [w.to_dict() for w in self.witnesses],
            "tolerances": dict(self.tolerances),
        }


def verify_nse(
    game: Game,
    profile: StrategyProfile,
    tie_tol: float = DEFAULT_TIE_TOL,
    delta_strict: float = DELTA_STRICT,
    membership_tol: float = MEMBERSHIP_TOL,
) -> VerificationReport:
    """Check attainability, AIC and every defender's incentive compatibility."""
    game = check_game(game)
    profile = check_profile(profile, game)
    feasible = tuple(
        membership(d.coverage_set, profile.coverages[i], membership_tol)
        for i, d in enumerate(game.defenders)
    )
    aic = profile.target in best_response_set(total_coverage(profile), tie_tol)
    ic, witnesses = [], []
    for i, d in enumerate(game.defenders):
        ok = True
        # most preferred targets first, so the witness is the deviator's best
        for t_hat in d.preference.ranking[: d.preference.rank(profile.target) - 1]:
            margin, cov = deviation_exists(game, profile, i, t_hat, delta_strict)
            if cov is not None:
                witnesses.append(Deviation(i, cov, t_hat, margin))
                ok = False
                break
        ic.append(ok)
    tolerances = {"tie_tol": tie_tol, "delta_strict": delta_strict, "membership_tol": membership_tol}
    return VerificationReport(feasible, aic, tuple(ic), tuple(witnesses), tolerances)


def report_to_dict(report: VerificationReport, profile: StrategyProfile | None = None) -> dict:
    out = report.to_dict()
    if profile is not None:
        out["profile"] = profile_to_dict(profile)
    return out
