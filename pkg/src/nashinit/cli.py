"""Command-line interface: solve a game, run experiment tables, run K sweeps.

Exit codes: 0 success, 1 invalid flags or unknown algorithm, 2 unreadable or
malformed game file, 3 unwritable output path.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys

from .engine import FPRunConfig, fp_multi
from .experiments import (
    ExperimentConfig,
    experiment_threads,
    k_sweep,
    paper_scale,
    run_experiment,
    write_aggregates_csv,
    write_figure_csv,
    write_rows_csv,
)
from .games import load_game, random_game, save_game
from .initializers import (
    InitScheme,
    init_classic,
    init_fppp,
    init_kmeans,
    init_macqueen,
    init_maximin_sampled,
    init_maximin_unsampled,
)
from .sampling import SamplingScheme, stream_rng

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BAD_GAME = 2
EXIT_UNWRITABLE = 3

SWEEP_K_DEFAULT = (2, 3, 5, 10, 20)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--players", type=int, default=3)
    sub.add_argument("--actions", type=int, default=5)
    sub.add_argument("--inits", type=int, default=5, help="initializations K")
    sub.add_argument("--iters", type=int, default=10_000, help="fictitious play iterations T")
    sub.add_argument("--pool", type=int, default=20_000, help="sampled pool size H")
    sub.add_argument("--seed", type=int, default=None, help="master seed (random if omitted)")
    sub.add_argument(
        "--threads", type=int, default=None,
        help="worker pool size (NASH_INIT_THREADS, then CPU count, if omitted)",
    )
    sub.add_argument("--sequential-updates", action="store_true")


def build_parser() -> _Parser:
    parser = _Parser(prog="nashinit", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="approximate an equilibrium of a JSON game")
    solve.add_argument("game_file")
    solve.add_argument("--algorithm", default="classic")
    solve.add_argument("--solution-out", default=None, help="write the solution as JSON")
    _add_common(solve)

    experiment = commands.add_parser(
        "experiment", help="error table over a batch of random games"
    )
    experiment.add_argument("--games", type=int, default=1000)
    experiment.add_argument(
        "--algorithms", default=",".join(s.value for s in InitScheme)
    )
    experiment.add_argument("--out", default="results")
    experiment.add_argument(
        "--paper-scale", action="store_true",
        help="use the full-size protocol (10,000 games, 100,000-point pools)",
    )
    _add_common(experiment)

    sweep = commands.add_parser("sweep", help="error-vs-K curves over random games")
    sweep.add_argument("--games", type=int, default=500)
    sweep.add_argument(
        "--algorithms", default=",".join(s.value for s in InitScheme)
    )
    sweep.add_argument(
        "--k-values", default=",".join(str(k) for k in SWEEP_K_DEFAULT)
    )
    sweep.add_argument("--out", default="results")
    sweep.add_argument("--paper-scale", action="store_true")
    _add_common(sweep)

    gen = commands.add_parser("gen-game", help="write a random [0,1]-payoff game as JSON")
    gen.add_argument("--players", type=int, default=3)
    gen.add_argument("--actions", type=int, default=5)
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", required=True)
    return parser


def _resolve_seed(seed: int | None) -> int:
    return secrets.randbits(48) if seed is None else seed


def _parse_algorithms(raw: str) -> tuple[InitScheme, ...]:
    return tuple(InitScheme.parse(name.strip()) for name in raw.split(",") if name.strip())


def _build_batch(scheme: InitScheme, game, k: int, pool_size: int, seed: int):
    n, m = game.num_players, game.num_actions
    rng = stream_rng(seed, "solve", scheme.value)
    if scheme is InitScheme.CLASSIC:
        return init_classic(n, m)
    if scheme is InitScheme.MACQUEEN1:
        return init_macqueen(n, m, k, SamplingScheme.NAIVE, rng, seed=seed)
    if scheme is InitScheme.MACQUEEN2:
        return init_macqueen(n, m, k, SamplingScheme.EXPONENTIAL, rng, seed=seed)
    if scheme is InitScheme.MAXIMIN_S:
        return init_maximin_sampled(n, m, k, pool_size, rng, seed=seed)
    if scheme is InitScheme.FPPP:
        return init_fppp(n, m, k, pool_size, rng, seed=seed)
    if scheme is InitScheme.KMEANS:
        return init_kmeans(n, m, k, pool_size, rng, seed=seed)
    return init_maximin_unsampled(n, m, k, rng, seed=seed)


def _cmd_solve(args) -> int:
    if args.inits < 1 or args.iters < 1 or args.pool < 1:
        print("error: --inits, --iters and --pool must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        scheme = InitScheme.parse(args.algorithm)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        game = load_game(args.game_file)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: cannot read game file: {exc}", file=sys.stderr)
        return EXIT_BAD_GAME

    seed = _resolve_seed(args.seed)
    print(f"seed: {seed}")
    k = 1 if scheme is InitScheme.CLASSIC else args.inits
    if args.pool < k:
        print("error: --pool must be >= --inits", file=sys.stderr)
        return EXIT_USAGE
    batch = _build_batch(scheme, game, k, args.pool, seed)
    config = FPRunConfig(
        iterations=args.iters, sequential_updates=args.sequential_updates
    )
    result = fp_multi(game, batch, config)

    for i, row in enumerate(result.final_profile.probs):
        print(f"player {i}: " + " ".join(f"{p:.6f}" for p in row))
    print(f"epsilon*: {result.epsilon:.6g}  (best init {result.init_index} of {k})")
    if args.solution_out:
        payload = {
            "seed": seed,
            "algorithm": scheme.value,
            "epsilon": result.epsilon,
            "init_index": result.init_index,
            "strategies": result.final_profile.probs.tolist(),
            "per_player_gain": result.epsilon_report.per_player_gain.tolist(),
        }
        try:
            with open(args.solution_out, "w") as fh:
                json.dump(payload, fh, indent=2)
        except OSError as exc:
            print(f"error: cannot write solution: {exc}", file=sys.stderr)
            return EXIT_UNWRITABLE
    return EXIT_OK


def _experiment_config(args, k_values: tuple[int, ...]) -> ExperimentConfig | None:
    try:
        algorithms = _parse_algorithms(args.algorithms)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None
    seed = _resolve_seed(args.seed)
    config = ExperimentConfig(
        num_players=args.players,
        num_actions=args.actions,
        num_games=args.games,
        algorithms=algorithms,
        k_values=k_values,
        iterations=args.iters,
        pool_size=args.pool,
        master_seed=seed,
        threads=experiment_threads(args.threads),
        sequential_updates=args.sequential_updates,
    )
    if args.paper_scale:
        config = paper_scale(config)
    return config


def _print_aggregates(result) -> None:
    print(f"{'algorithm':<12} {'K':>3}  {'mean epsilon*':>14}  {'95% CI':>12}")
    for agg in result.aggregates:
        print(
            f"{agg.algorithm:<12} {agg.num_inits:>3}  {agg.mean:>14.5f}  "
            f"±{agg.ci95:.5f}"
        )
    if result.truncated:
        print(f"warning: truncated: {result.truncation_reason}")


def _write_outputs(result, out_dir: str, figure: bool) -> int:
    try:
        os.makedirs(out_dir, exist_ok=True)
        write_rows_csv(result, os.path.join(out_dir, "rows.csv"))
        write_aggregates_csv(result, os.path.join(out_dir, "aggregates.csv"))
        if figure:
            write_figure_csv(result, os.path.join(out_dir, "figure.csv"))
    except OSError as exc:
        print(f"error: cannot write results: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    print(f"results written to {out_dir}/")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    if args.games < 1 or args.inits < 1:
        print("error: --games and --inits must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    config = _experiment_config(args, (args.inits,))
    if config is None:
        return EXIT_USAGE
    print(f"seed: {config.master_seed}")
    result = run_experiment(config)
    _print_aggregates(result)
    return _write_outputs(result, args.out, figure=False)


def _cmd_sweep(args) -> int:
    try:
        k_values = tuple(int(k) for k in args.k_values.split(","))
    except ValueError:
        print(f"error: bad --k-values {args.k_values!r}", file=sys.stderr)
        return EXIT_USAGE
    if args.games < 1:
        print("error: --games must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    config = _experiment_config(args, k_values)
    if config is None:
        return EXIT_USAGE
    print(f"seed: {config.master_seed}")
    result = k_sweep(config)
    _print_aggregates(result)
    return _write_outputs(result, args.out, figure=True)


def _cmd_gen_game(args) -> int:
    if args.players < 2 or args.actions < 2:
        print("error: --players and --actions must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    seed = _resolve_seed(args.seed)
    print(f"seed: {seed}")
    game = random_game(args.players, args.actions, seed)
    try:
        save_game(game, args.out)
    except OSError as exc:
        print(f"error: cannot write game: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    print(f"game written to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "experiment":
            return _cmd_experiment(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_gen_game(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
