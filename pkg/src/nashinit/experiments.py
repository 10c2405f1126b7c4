"""Seeded multi-game experiment harness with aggregate statistics.

For every game index the harness derives independent generator streams from
the master seed, generates a fresh random game and (when needed) a fresh
pool of H sampled profiles shared by the pool-based schemes, builds one
size-max(K) batch per initialization algorithm, runs fictitious play for
every initialization, and records the best error over the first K
initializations for each requested K.  Reusing prefixes of a single batch
makes the per-game error exactly non-increasing in K.

Games are processed independently, so a worker pool only changes wall-clock
time: results are bit-for-bit identical for any thread count.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from .engine import FPRunConfig, fp_run_all
from .games import GameTooLargeError, random_game
from .initializers import (
    InitScheme,
    POOL_SCHEMES,
    fppp_from_pool,
    init_classic,
    init_macqueen,
    init_maximin_unsampled,
    kmeans_from_pool,
    maximin_from_pool,
)
from .sampling import SamplingScheme, derive_seed, sample_pool, stream_rng

ALL_SCHEMES = tuple(InitScheme)

ROWS_HEADER = ["game_index", "algorithm", "K", "epsilon_star", "seed"]
AGGREGATES_HEADER = ["algorithm", "K", "mean", "std", "ci95", "G"]
FIGURE_HEADER = ["algorithm", "K", "mean", "ci95"]


@dataclass(frozen=True)
class ExperimentConfig:
    num_players: int = 3
    num_actions: int = 5
    num_games: int = 1000
    algorithms: tuple[InitScheme, ...] = ALL_SCHEMES
    k_values: tuple[int, ...] = (5,)
    iterations: int = 10_000
    pool_size: int = 20_000
    master_seed: int = 0
    threads: int = 1
    sequential_updates: bool = False
    solver_restarts: int = 20
    max_game_cells: int | None = None

    def __post_init__(self):
        if self.num_games < 1:
            raise ValueError("need at least one game")
        if not self.algorithms:
            raise ValueError("need at least one algorithm")
        ks = tuple(int(k) for k in self.k_values)
        if not ks or any(k < 1 for k in ks) or list(ks) != sorted(set(ks)):
            raise ValueError("K values must be distinct, ascending and >= 1")
        object.__setattr__(self, "k_values", ks)
        object.__setattr__(
            self, "algorithms", tuple(InitScheme(a) for a in self.algorithms)
        )
        if self.pool_size < max(ks):
            raise ValueError("pool size H must be >= max K")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class ResultRow:
    game_index: int
    algorithm: str
    num_inits: int
    epsilon_star: float
    seed: int


@dataclass(frozen=True)
class AggregateRow:
    algorithm: str
    num_inits: int
    mean: float
    std: float
    ci95: float
    games: int


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[ResultRow]
    aggregates: list[AggregateRow] = field(default_factory=list)
    truncated: bool = False
    truncation_reason: str | None = None


def _generate_batches(config: ExperimentConfig, game_index: int) -> dict[InitScheme, list]:
    n, m = config.num_players, config.num_actions
    k_max = max(config.k_values)
    pool = None
    if any(s in POOL_SCHEMES for s in config.algorithms):
        pool = sample_pool(
            n, m, config.pool_size, stream_rng(config.master_seed, "pool", game_index)
        )
    batches: dict[InitScheme, list] = {}
    for scheme in config.algorithms:
        rng = stream_rng(config.master_seed, scheme.value, game_index)
        if scheme is InitScheme.CLASSIC:
            batch = init_classic(n, m)
        elif scheme is InitScheme.MACQUEEN1:
            batch = init_macqueen(n, m, k_max, SamplingScheme.NAIVE, rng)
        elif scheme is InitScheme.MACQUEEN2:
            batch = init_macqueen(n, m, k_max, SamplingScheme.EXPONENTIAL, rng)
        elif scheme is InitScheme.MAXIMIN_S:
            batch = maximin_from_pool(pool, k_max, rng)
        elif scheme is InitScheme.FPPP:
            batch = fppp_from_pool(pool, k_max, rng)
        elif scheme is InitScheme.KMEANS:
            batch = kmeans_from_pool(pool, k_max, rng)
        else:
            batch = init_maximin_unsampled(
                n, m, k_max, rng, restarts=config.solver_restarts
            )
        batches[scheme] = list(batch.profiles)
    return batches


def _run_game(config: ExperimentConfig, game_index: int) -> list[tuple]:
    game_seed = derive_seed(config.master_seed, "game", game_index)
    kwargs = {}
    if config.max_game_cells is not None:
        kwargs["max_cells"] = config.max_game_cells
    game = random_game(config.num_players, config.num_actions, game_seed, **kwargs)

    batches = _generate_batches(config, game_index)
    stacked = [p for scheme in config.algorithms for p in batches[scheme]]
    run_config = FPRunConfig(
        iterations=config.iterations, sequential_updates=config.sequential_updates
    )
    results = fp_run_all(game, stacked, run_config)
    errors = np.array([r.epsilon for r in results])

    rows = []
    offset = 0
    for scheme in config.algorithms:
        size = len(batches[scheme])
        eps = errors[offset : offset + size]
        offset += size
        if scheme is InitScheme.CLASSIC:
            rows.append((game_index, scheme.value, 1, float(eps[0]), game_seed))
        else:
            running = np.minimum.accumulate(eps)
            for k in config.k_values:
                rows.append(
                    (game_index, scheme.value, k, float(running[k - 1]), game_seed)
                )
    return rows


def aggregate(rows: list[ResultRow]) -> list[AggregateRow]:
    """Mean, sample std and 95% confidence half-width per (algorithm, K)."""
    if not rows:
        raise ValueError("no rows to aggregate")
    groups: dict[tuple[str, int], list[float]] = {}
    order: list[tuple[str, int]] = []
    for row in rows:
        key = (row.algorithm, row.num_inits)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row.epsilon_star)
    out = []
    for algorithm, k in order:
        values = np.array(groups[(algorithm, k)])
        games = len(values)
        std = float(values.std(ddof=1)) if games > 1 else 0.0
        out.append(
            AggregateRow(
                algorithm=algorithm,
                num_inits=k,
                mean=float(values.mean()),
                std=std,
                ci95=1.96 * std / np.sqrt(games),
                games=games,
            )
        )
    return out


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every algorithm over ``num_games`` seeded random games.

    If a resource cap trips mid-run, the rows finished so far are kept and
    the result carries an explicit truncation marker.
    """
    result = ExperimentResult(config=config, rows=[])
    task = partial(_run_game, config)
    indices = range(config.num_games)
    try:
        if config.threads == 1:
            for g in indices:
                result.rows.extend(ResultRow(*row) for row in task(g))
        else:
            with ProcessPoolExecutor(max_workers=config.threads) as pool:
                for game_rows in pool.map(task, indices):
                    result.rows.extend(ResultRow(*row) for row in game_rows)
    except (GameTooLargeError, MemoryError) as exc:
        result.truncated = True
        result.truncation_reason = str(exc)
    if result.rows:
        result.aggregates = aggregate(result.rows)
    return result


def k_sweep(config: ExperimentConfig) -> ExperimentResult:
    """Error-vs-K curves: one experiment whose K list spans the sweep.

    Every K reuses a prefix of the same size-max(K) batch, so each game's
    error is exactly non-increasing in K.
    """
    if not config.k_values:
        raise ValueError("sweep needs at least one K value")
    return run_experiment(config)


def experiment_threads(requested: int | None = None) -> int:
    """Worker count: explicit value, else NASH_INIT_THREADS, else CPU count."""
    if requested is not None and requested >= 1:
        return requested
    env = os.environ.get("NASH_INIT_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ValueError(f"NASH_INIT_THREADS must be an integer, got {env!r}") from exc
        if value >= 1:
            return value
    return os.cpu_count() or 1


def write_rows_csv(result: ExperimentResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ROWS_HEADER)
        for row in result.rows:
            writer.writerow(
                [
                    row.game_index,
                    row.algorithm,
                    row.num_inits,
                    f"{row.epsilon_star:.17g}",
                    row.seed,
                ]
            )
        if result.truncated:
            fh.write(f"# truncated: {result.truncation_reason}\n")


def read_rows_csv(path) -> list[ResultRow]:
    rows = []
    with open(path, newline="") as fh:
        for record in csv.reader(line for line in fh if not line.startswith("#")):
            if record == ROWS_HEADER:
                continue
            rows.append(
                ResultRow(
                    game_index=int(record[0]),
                    algorithm=record[1],
                    num_inits=int(record[2]),
                    epsilon_star=float(record[3]),
                    seed=int(record[4]),
                )
            )
    return rows


def write_aggregates_csv(result: ExperimentResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGGREGATES_HEADER)
        for agg in result.aggregates:
            writer.writerow(
                [
                    agg.algorithm,
                    agg.num_inits,
                    f"{agg.mean:.17g}",
                    f"{agg.std:.17g}",
                    f"{agg.ci95:.17g}",
                    agg.games,
                ]
            )


def write_figure_csv(result: ExperimentResult, path) -> None:
    """Figure data consumed by the plotting frontend: algorithm,K,mean,ci95."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FIGURE_HEADER)
        for agg in result.aggregates:
            writer.writerow(
                [agg.algorithm, agg.num_inits, f"{agg.mean:.17g}", f"{agg.ci95:.17g}"]
            )


def paper_scale(config: ExperimentConfig) -> ExperimentConfig:
    """Full-size variant of a config: 10,000 games and 100,000-point pools."""
    return replace(config, num_games=10_000, pool_size=100_000)
