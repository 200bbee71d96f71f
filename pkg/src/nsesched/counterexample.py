"""Non-existence certificate for the 2x2 cyclic game under clearance.

For a candidate attacked target ``t``, the defender who ranks ``t`` in its
bottom two (the deviator) can play either of its two pure schedules, each of
which leaves one of its two favourite targets uncovered. The deviation is
blocked only if some target in the deviator's bottom two ends up with no more
total coverage than the uncovered favourite. With the deviator's schedule
fixed, every such condition is a linear inequality in the rival's weight on
its first schedule. An equilibrium attacking ``t`` needs a weight in [0, 1]
that blocks both schedules.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coverage import CLEARANCE
from .exceptions import PreconditionError
from .generators import example1

# (deviator schedule, blocker is the candidate itself?)
SYMBOLS = (("♥", 0, True), ("♡", 0, False), ("♦", 1, False), ("♢", 1, True))


@dataclass(frozen=True)
class Condition:
    """``coefficient * w <= rhs`` in the rival weight ``w``."""

    symbol: str
    schedule: int
    blocker: str
    pushed: str
    coefficient: float
    rhs: float
    bound: str | None
    threshold: float | None
    interval: tuple[float, float] | None

    def describe(self, var: str) -> str:
        if self.threshold is None:
            return "always" if self.interval is not None else "never"
        return f"{var} {self.bound} {self.threshold:.4f}"


@dataclass(frozen=True)
class CandidateAnalysis:
    target: str
    deviator: int
    rival: int
    variable: str
    conditions: tuple[Condition, ...]
    feasible: tuple[tuple[float, float], ...]

    def condition(self, symbol: str) -> Condition:
        return next(c for c in self.conditions if c.symbol == symbol)


@dataclass(frozen=True)
class CounterexampleCertificate:
    epsilon: float
    k: float
    candidates: tuple[CandidateAnalysis, ...]

    @property
    def exists_nse(self) -> bool:
        """False certifies that no equilibrium exists; True means the necessary condition holds somewhere."""
        return any(c.feasible for c in self.candidates)

    def candidate(self, label: str) -> CandidateAnalysis:
        return next(c for c in self.candidates if c.target == label)

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "k": self.k,
            "exists_nse": self.exists_nse,
            "candidates": [
                {
                    "target": c.target,
                    "deviator": c.deviator + 1,
                    "variable": c.variable,
                    "conditions": {
                        cond.symbol: {
                            "blocker": cond.blocker,
                            "pushed": cond.pushed,
                            "bound": cond.bound,
                            "threshold": cond.threshold,
                            "interval": list(cond.interval) if cond.interval else None,
                        }
                        for cond in c.conditions
                    },
                    "feasible": [list(iv) for iv in c.feasible],
                }
                for c in self.candidates
            ],
        }


def _solve_inequality(a: Fraction, b: Fraction):
    """Solution set of ``a*w <= b`` intersected with [0, 1]."""
    if a == 0:
        return None, None, ((0.0, 1.0) if b >= 0 else None)
    x = b / a
    if a > 0:
        lo, hi, bound = Fraction(0), min(Fraction(1), x), "<="
    else:
        lo, hi, bound = max(Fraction(0), x), Fraction(1), ">="
    return bound, float(x), ((float(lo), float(hi)) if lo <= hi else None)


def _union(a, b):
    return [iv for iv in (a, b) if iv is not None]


def _intersect(xs, ys):
    out = []
    for lo1, hi1 in xs:
        for lo2, hi2 in ys:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if lo <= hi:
                out.append((lo, hi))
    return tuple(sorted(set(out)))


def certify_counterexample(epsilon: float, k: float, order=None) -> CounterexampleCertificate:
    """Interval analysis of every candidate target of the clearance game."""
    if k < 1 or epsilon < 0 or k * epsilon >= 1:
        raise PreconditionError(f"need k >= 1, epsilon >= 0 and k*epsilon < 1 (got k={k}, epsilon={epsilon})")
    game = example1(epsilon, k, CLEARANCE, order=order)
    sched = [[[Fraction(x) for x in s] for s in d.coverage_set.schedules] for d in game.defenders]
    candidates = []
    for t in range(game.num_targets):
        deviator = next(i for i, d in enumerate(game.defenders) if d.preference.rank(t) > 2)
        rival = 1 - deviator
        ranking = game.defenders[deviator].preference.ranking
        favourites, bottom = ranking[:2], ranking[2:]
        other = next(b for b in bottom if b != t)
        r1, r2 = sched[rival]
        conditions = []
        for symbol, z, at_candidate in SYMBOLS:
            dev = sched[deviator][z]
            pushed = min(favourites, key=lambda j: dev[j])
            blocker = t if at_candidate else other
            # total(j) = w*r1[j] + (1-w)*r2[j] + dev[j]; need total(blocker) <= total(pushed)
            a = (r1[blocker] - r2[blocker]) - (r1[pushed] - r2[pushed])
            b = (r2[pushed] + dev[pushed]) - (r2[blocker] + dev[blocker])
            bound, threshold, interval = _solve_inequality(a, b)
            conditions.append(Condition(
                symbol, z, game.label(blocker), game.label(pushed),
                float(a), float(b), bound, threshold, interval,
            ))
        first = _union(conditions[0].interval, conditions[1].interval)
        second = _union(conditions[2].interval, conditions[3].interval)
        candidates.append(CandidateAnalysis(
            target=game.label(t),
            deviator=deviator,
            rival=rival,
            variable="alpha" if rival == 0 else "beta",
            conditions=tuple(conditions),
            feasible=_intersect(first, second),
        ))
    candidates.sort(key=lambda c: c.target)
    return CounterexampleCertificate(epsilon, k, tuple(candidates))
