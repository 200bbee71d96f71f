"""Experiment harness: solve timings, rank suboptimality and efficient-target counts.

Trials are independent. Trial ``k`` of a config with seed ``s`` generates its
game with seed ``s + k``, so any single trial can be reproduced on its own.
"""
from __future__ import annotations

import csv
import logging
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import product

import numpy as np
from scipy import stats as sstats

from .game import Game
from .generators import GeneratorConfig, generate
from .multi import solve_multi_ms
from .two import enumerate_equilibrium_targets, solve_two

log = logging.getLogger(__name__)

ALGORITHMS = ("two", "multi_ms")
PARAM_COLUMNS = ("targets", "schedules", "support", "defenders", "monotone", "grid", "radius", "layers", "width")
BENCH_COLUMNS = ("family", *PARAM_COLUMNS, "algorithm", "trial", "seed", "seconds", "status", "error")
STATS_COLUMNS = (
    "family", *PARAM_COLUMNS, "trial", "seed", "num_targets",
    "optimistic", "average", "pessimistic", "n_efficient", "ratio", "status", "error",
)
CONVENTIONS = ("optimistic", "average", "pessimistic")


def solver(algorithm: str):
    if algorithm == "two":
        # scanning in defender 1's order returns an efficient equilibrium
        return partial(solve_two, order="preference")
    if algorithm == "multi_ms":
        return solve_multi_ms
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def sweep(family: str, seed: int = 0, **grid) -> list[GeneratorConfig]:
    """Cartesian product of parameter lists; scalars are held fixed."""
    keys = list(grid)
    values = [v if isinstance(v, (list, tuple)) else [v] for v in grid.values()]
    return [GeneratorConfig(family, seed=seed, **dict(zip(keys, combo))) for combo in product(*values)]


@dataclass(frozen=True)
class BenchRecord:
    family: str
    params: dict
    trial: int
    seed: int
    algorithm: str
    seconds: float | None
    status: str = "ok"
    error: str = ""

    @property
    def ok(self):
        return self.status == "ok"

    def row(self) -> dict:
        return {
            "family": self.family,
            **{k: self.params.get(k, "") for k in PARAM_COLUMNS},
            "algorithm": self.algorithm,
            "trial": self.trial,
            "seed": self.seed,
            "seconds": "" if self.seconds is None else f"{self.seconds:.6f}",
            "status": self.status,
            "error": self.error,
        }


def _bench_trial(task) -> BenchRecord:
    config, trial, algorithm = task
    seed = config.seed + trial
    params = config.params()
    try:
        game = generate(config.with_seed(seed))
        solve = solver(algorithm)
        start = time.perf_counter()
        solve(game)
        seconds = time.perf_counter() - start
    except Exception as exc:  # a failed trial is recorded, the run goes on
        log.warning("trial %d of %s %s failed: %s", trial, config.family, params, exc)
        return BenchRecord(config.family, params, trial, seed, algorithm, None, "failed", f"{type(exc).__name__}: {exc}")
    return BenchRecord(config.family, params, trial, seed, algorithm, seconds)


def _run(fn, tasks, jobs):
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves submission order, so rows come back in trial order
        return list(pool.map(fn, tasks, chunksize=1))


def run_bench(configs, trials: int = 100, algorithm: str = "two", jobs: int = 1) -> list[BenchRecord]:
    solver(algorithm)
    tasks = [(c, k, algorithm) for c in configs for k in range(trials)]
    return _run(_bench_trial, tasks, jobs)


@dataclass(frozen=True)
class Summary:
    family: str
    params: dict
    n: int
    failed: int
    mean: float
    stderr: float


def summarize(records) -> list[Summary]:
    """Mean and standard error of solve time per config, in first-seen order."""
    groups: dict = {}
    for r in records:
        groups.setdefault((r.family, tuple(sorted(r.params.items()))), []).append(r)
    out = []
    for (family, params), rs in groups.items():
        secs = np.array([r.seconds for r in rs if r.ok])
        n = len(secs)
        mean = float(secs.mean()) if n else math.nan
        stderr = float(secs.std(ddof=1) / math.sqrt(n)) if n > 1 else math.nan
        out.append(Summary(family, dict(params), n, len(rs) - n, mean, stderr))
    return out


@dataclass(frozen=True)
class TrendCheck:
    name: str
    value: float
    threshold: float
    passed: bool
    detail: str = ""


def growth_ratio(summaries, key: str, low, high, threshold: float = 3.0) -> TrendCheck:
    means = {s.params[key]: s.mean for s in summaries}
    ratio = means[high] / means[low]
    return TrendCheck(f"{key} {high} vs {low} mean ratio", ratio, threshold, ratio > threshold)


def linear_fit(summaries, key: str, min_r2: float = 0.8) -> TrendCheck:
    """R^2 of a least-squares line through the per-config means."""
    xs = np.array([s.params[key] for s in summaries], dtype=float)
    ys = np.array([s.mean for s in summaries])
    fit = sstats.linregress(xs, ys)
    r2 = fit.rvalue ** 2
    return TrendCheck(f"{key} linear fit R^2", r2, min_r2, bool(r2 >= min_r2 and fit.slope > 0),
                      f"slope={fit.slope:.3g}s per unit")


def flatness(records, key: str, alpha: float = 0.01) -> TrendCheck:
    """One-way ANOVA on solve times grouped by ``key``; flat when not significant."""
    groups: dict = {}
    for r in records:
        if r.ok:
            groups.setdefault(r.params[key], []).append(r.seconds)
    res = sstats.f_oneway(*groups.values())
    return TrendCheck(f"{key} ANOVA p-value", float(res.pvalue), alpha, bool(res.pvalue > alpha),
                      f"F={res.statistic:.3g}")


def _blank(x):
    return "" if x is None else x


@dataclass(frozen=True)
class RankStats:
    """Defender 1's rank of the attacked target over efficient equilibria of one game."""

    family: str
    params: dict
    trial: int
    seed: int
    num_targets: int
    optimistic: int | None
    average: float | None
    pessimistic: int | None
    n_efficient: int
    status: str = "ok"
    error: str = ""
    ranks: tuple = field(default=(), compare=False)

    @property
    def ok(self):
        return self.status == "ok"

    @property
    def ratio(self) -> float:
        return self.n_efficient / self.num_targets if self.num_targets else math.nan

    def row(self) -> dict:
        return {
            "family": self.family,
            **{k: self.params.get(k, "") for k in PARAM_COLUMNS},
            "trial": self.trial,
            "seed": self.seed,
            "num_targets": self.num_targets,
            "optimistic": _blank(self.optimistic),
            "average": "" if self.average is None else f"{self.average:.6g}",
            "pessimistic": _blank(self.pessimistic),
            "n_efficient": self.n_efficient,
            "ratio": f"{self.ratio:.6g}",
            "status": self.status,
            "error": self.error,
        }


def rank_stats(game: Game, family: str = "", params=None, trial: int = 0, seed: int = 0) -> RankStats:
    targets = enumerate_equilibrium_targets(game, efficient_only=True)
    pref = game.defenders[0].preference
    ranks = sorted(pref.rank(e.target) for e in targets)
    return RankStats(
        family, dict(params or {}), trial, seed, game.num_targets,
        ranks[0], float(np.mean(ranks)), ranks[-1], len(ranks), ranks=tuple(ranks),
    )


def _stats_trial(task) -> RankStats:
    config, trial = task
    seed = config.seed + trial
    params = config.params()
    try:
        return rank_stats(generate(config.with_seed(seed)), config.family, params, trial, seed)
    except Exception as exc:
        log.warning("trial %d of %s %s failed: %s", trial, config.family, params, exc)
        return RankStats(config.family, params, trial, seed, 0, None, None, None, 0,
                         "failed", f"{type(exc).__name__}: {exc}")


def run_stats(configs, trials: int = 100, jobs: int = 1) -> list[RankStats]:
    tasks = [(c, k) for c in configs for k in range(trials)]
    return _run(_stats_trial, tasks, jobs)


def rank_frequencies(rows) -> dict[str, Counter]:
    """How often each rank occurs under each tie-breaking convention."""
    out = {c: Counter() for c in CONVENTIONS}
    for r in rows:
        if r.ok:
            for c in CONVENTIONS:
                out[c][getattr(r, c)] += 1
    return out


def mean_ratio_by(rows, key: str = "targets") -> dict:
    groups: dict = {}
    for r in rows:
        if r.ok:
            groups.setdefault(r.params[key], []).append(r.ratio)
    return {k: float(np.mean(v)) for k, v in groups.items()}


def write_csv(rows, fh, columns) -> None:
    writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.row())
