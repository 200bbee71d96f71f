"""Command-line front end: ``nsesched <command> ...``.

Exit codes: 0 success, 1 usage error, 2 parse or validation error,
3 precondition failure, 4 verification failed, 5 solver or LP error.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import bench
from .counterexample import certify_counterexample
from .coverage import MODES, SSAS
from .exceptions import ExistenceViolated, GameValidationError, OracleError, PathCapExceeded, PreconditionError
from .generators import FAMILIES, fixture, generate
from .multi import solve_multi_ms
from .serialization import dumps, game_to_dict, profile_to_dict
from .two import enumerate_equilibrium_targets, solve_two
from .validation import check_game, check_profile
from .verify import report_to_dict, verify_nse

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NOT_NSE = 4
EXIT_SOLVER = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _write_text(path, text):
    with _output(path) as fh:
        fh.write(text)


def _fmt(x):
    return "inf" if math.isinf(x) else f"{x:.6g}"


def _generator_args(p, multi=False):
    nargs = "+" if multi else None
    p.add_argument("--family", choices=FAMILIES, default="rgs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--targets", type=int, nargs=nargs, default=[10] if multi else 10)
    p.add_argument("--schedules", type=int, nargs=nargs, default=[10] if multi else 10)
    p.add_argument("--support", type=int, nargs=nargs, default=None)
    p.add_argument("--defenders", type=int, nargs=nargs, default=[2] if multi else 2)
    p.add_argument("--monotone", action="store_true", help="sort each schedule against its owner's preferences")
    p.add_argument("--grid", type=int, nargs=nargs, default=[4] if multi else 4, help="PSG grid side")
    p.add_argument("--radius", type=int, nargs=nargs, default=[2] if multi else 2, help="PSG coverage radius")
    p.add_argument("--layers", type=int, nargs=nargs, default=[3] if multi else 3, help="PLN layers")
    p.add_argument("--width", type=int, nargs=nargs, default=[4] if multi else 4, help="PLN width")


def _configs(args):
    grid = {
        "rgs": {"targets": args.targets, "schedules": args.schedules, "support": args.support,
                "defenders": args.defenders, "monotone": args.monotone},
        "psg": {"grid": args.grid, "radius": args.radius},
        "pln": {"layers": args.layers, "width": args.width, "defenders": args.defenders},
    }[args.family]
    grid = {k: v for k, v in grid.items() if v is not None}
    return bench.sweep(args.family, seed=args.seed, **grid)


def cmd_generate(args):
    if args.fixture:
        params = {}
        if args.fixture == "example1":
            params = {"epsilon": args.epsilon, "k": args.k, "mode": args.mode}
        game = fixture(args.fixture, **params)
    else:
        (config,) = _configs(args)
        game = generate(config)
    _write_text(args.out, dumps(game_to_dict(game)))
    return EXIT_OK


def _solve(game, algorithm, order):
    if algorithm == "two":
        return solve_two(game, order=order)
    return solve_multi_ms(game)


def cmd_solve(args):
    game = check_game(args.game)
    profile = _solve(game, args.algorithm, args.order)
    report = verify_nse(game, profile)
    if args.out:
        _write_text(args.out, dumps(profile_to_dict(profile)))
    else:
        print(dumps(profile_to_dict(profile)), end="")
    out = sys.stderr if not args.out else sys.stdout
    print(f"attacked target: {game.label(profile.target)}", file=out)
    for i, v in enumerate(profile.coverages):
        print(f"defender {i + 1}: height {_fmt(float(v.max()))}, covers {int(np.count_nonzero(v > 0))} targets", file=out)
    print(f"verified: {'yes' if report.is_nse else 'NO'}", file=out)
    return EXIT_OK if report.is_nse else EXIT_NOT_NSE


def cmd_verify(args):
    game = check_game(args.game)
    profile = check_profile(args.profile, game)
    report = verify_nse(game, profile)
    text = dumps(report_to_dict(report, profile))
    if args.out:
        _write_text(args.out, text)
        print(f"NSE: {'yes' if report.is_nse else 'no'} (AIC {report.aic}, IC {list(report.per_defender_ic)}, "
              f"feasible {list(report.feasible)})")
    else:
        print(text, end="")
    return EXIT_OK if report.is_nse else EXIT_NOT_NSE


def cmd_enumerate(args):
    game = check_game(args.game)
    rows = enumerate_equilibrium_targets(game, efficient_only=args.efficient_only)
    if args.json:
        print(dumps([
            {"target": game.label(r.target), "h1": r.h1, "h2": r.h2, "efficiency": r.efficiency,
             "unconstrained": list(r.unconstrained)}
            for r in rows
        ]), end="")
        return EXIT_OK
    print(f"{'target':>8} {'h1':>10} {'h2':>10}  efficiency")
    for r in rows:
        h1 = "inf" if r.unconstrained[0] else _fmt(r.h1)
        h2 = "inf" if r.unconstrained[1] else _fmt(r.h2)
        print(f"{game.label(r.target):>8} {h1:>10} {h2:>10}  {r.efficiency}")
    return EXIT_OK


def _check_trials(args):
    if args.trials < 1 or args.jobs < 1:
        raise UsageError("--trials and --jobs must be >= 1")


def cmd_bench(args):
    _check_trials(args)
    records = bench.run_bench(_configs(args), args.trials, args.algorithm, args.jobs)
    with _output(args.out) as fh:
        bench.write_csv(records, fh, bench.BENCH_COLUMNS)
    out = sys.stdout if args.out else sys.stderr
    for s in bench.summarize(records):
        params = " ".join(f"{k}={v}" for k, v in s.params.items())
        print(f"{s.family} {params}: mean {s.mean:.6f}s, stderr {s.stderr:.6f}s, n={s.n}, failed={s.failed}", file=out)
    return EXIT_OK


def cmd_stats(args):
    _check_trials(args)
    if args.game:
        rows = [bench.rank_stats(check_game(g, n_defenders=2), "file", {}, k) for k, g in enumerate(args.game)]
    else:
        rows = bench.run_stats(_configs(args), args.trials, args.jobs)
    with _output(args.out) as fh:
        bench.write_csv(rows, fh, bench.STATS_COLUMNS)
    out = sys.stdout if args.out else sys.stderr
    for conv, counts in bench.rank_frequencies(rows).items():
        freq = ", ".join(f"{r}:{c}" for r, c in sorted(counts.items()))
        print(f"{conv} rank frequencies: {freq}", file=out)
    if not args.game and args.family == "rgs":
        for T, ratio in bench.mean_ratio_by(rows).items():
            print(f"targets={T}: mean efficient ratio {ratio:.4f}", file=out)
    return EXIT_OK


def cmd_counterexample(args):
    cert = certify_counterexample(args.epsilon, args.k)
    if args.json:
        print(dumps(cert.to_dict()), end="")
        return EXIT_OK
    print(f"epsilon={args.epsilon:g} k={args.k:g} (clearance)")
    for c in cert.candidates:
        print(f"target {c.target}: defender {c.deviator + 1} deviates, {c.variable} = defender {c.rival + 1}'s weight")
        for cond in c.conditions:
            iv = "empty" if cond.interval is None else f"[{cond.interval[0]:.4f}, {cond.interval[1]:.4f}]"
            print(f"  {cond.symbol} {cond.blocker} <= {cond.pushed}: {cond.describe(c.variable)}  -> {iv}")
        feas = ", ".join(f"[{lo:.4f}, {hi:.4f}]" for lo, hi in c.feasible) or "empty"
        print(f"  feasible weights: {feas}")
    print(f"exists_nse = {str(cert.exists_nse).lower()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nsesched", description="Nash-Stackelberg equilibria in multi-defender security games.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a random or fixture game as JSON")
    _generator_args(p)
    p.add_argument("--fixture", choices=("example1", "identity3"))
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--k", type=float, default=100.0)
    p.add_argument("--mode", choices=MODES, default=SSAS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="compute an equilibrium and verify it")
    p.add_argument("game")
    p.add_argument("--algorithm", choices=bench.ALGORITHMS, default="two")
    p.add_argument("--order", choices=("index", "preference"), default="index",
                   help="target scan order for the two-defender solver")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a profile against the equilibrium definition")
    p.add_argument("game")
    p.add_argument("profile")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list equilibrium targets with efficiency labels")
    p.add_argument("game")
    p.add_argument("--efficient-only", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("bench", help="time the solver over generated games")
    _generator_args(p, multi=True)
    p.add_argument("--algorithm", choices=bench.ALGORITHMS, default="two")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="rank suboptimality and efficient-target counts")
    _generator_args(p, multi=True)
    p.add_argument("--game", action="append", help="use game files instead of generated ones (repeatable)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("counterexample", help="non-existence certificate for the clearance counterexample")
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--k", type=float, default=100.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nsesched: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GameValidationError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"nsesched: invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionError, PathCapExceeded) as exc:
        print(f"nsesched: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OracleError, ExistenceViolated) as exc:
        print(f"nsesched: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
