"""Fictitious play: best-response dynamics against running average strategies.

Each iteration t computes, for every player, a pure best response to the
other players' averages and folds it into the running average with weight
1/(t+1), so the final profile after T iterations is the average of the
played strategies (including the initial one).

By default all best responses within an iteration are computed against the
previous iteration's profile before any average changes (simultaneous
update).  ``sequential_updates`` switches to in-place updates where later
players respond to a mix of old and new averages.

Multi-start runs are vectorized over the batch of initializations; each
batch element evolves with exactly the arithmetic of a standalone run, so a
multi-start result equals the best of the individual runs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from string import ascii_lowercase

import numpy as np

from .games import EpsilonReport, Game, StrategyProfile, epsilon


@dataclass(frozen=True)
class FPRunConfig:
    iterations: int = 10_000
    sequential_updates: bool = False
    record_trajectory: bool = False
    trajectory_stride: int = 100

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.trajectory_stride < 1:
            raise ValueError("trajectory stride must be >= 1")


@dataclass(frozen=True)
class FPResult:
    final_profile: StrategyProfile
    epsilon_report: EpsilonReport
    init_index: int
    iterations_run: int
    best_response_evals: int
    # (T, n) pure-action ids, populated only when trajectories are recorded
    best_responses: np.ndarray | None = None
    # (t, player, action, prob) rows sampled every `trajectory_stride`
    trajectory: list[tuple[int, int, int, float]] | None = None

    @property
    def epsilon(self) -> float:
        return self.epsilon_report.epsilon


def _einsum_specs(n: int) -> list[str]:
    axes = ascii_lowercase[:n]
    specs = []
    for i in range(n):
        others = ",".join("z" + axes[j] for j in range(n) if j != i)
        specs.append(f"{axes},{others}->z{axes[i]}")
    return specs


def _batch_action_values(
    payoffs_i: np.ndarray, sigma: np.ndarray, player: int, spec: str
) -> np.ndarray:
    n = sigma.shape[1]
    operands = [payoffs_i] + [sigma[:, j, :] for j in range(n) if j != player]
    return np.einsum(spec, *operands)


def _snapshot(trajectories, sigma: np.ndarray, t: int) -> None:
    for b, rows in enumerate(trajectories):
        for i, row in enumerate(sigma[b]):
            for a, p in enumerate(row):
                rows.append((t, i, a, float(p)))


def _run_batch(
    game: Game, sigma0: np.ndarray, config: FPRunConfig
) -> list[FPResult]:
    n, m = game.num_players, game.num_actions
    payoffs = game.payoffs
    specs = _einsum_specs(n)
    sigma = np.ascontiguousarray(sigma0, dtype=float).copy()
    batch = sigma.shape[0]
    rows = np.arange(batch)
    iterations = config.iterations

    record = config.record_trajectory
    br_history = np.empty((batch, iterations, n), dtype=np.int64) if record else None
    trajectories = [[] for _ in range(batch)] if record else None
    if record:
        _snapshot(trajectories, sigma, 0)

    evals = 0
    for t in range(1, iterations + 1):
        weight = 1.0 / (t + 1.0)
        if config.sequential_updates:
            for i in range(n):
                values = _batch_action_values(payoffs[i], sigma, i, specs[i])
                best = values.argmax(axis=1)
                sigma[:, i, :] *= 1.0 - weight
                sigma[rows, i, best] += weight
                if record:
                    br_history[:, t - 1, i] = best
        else:
            responses = []
            for i in range(n):
                values = _batch_action_values(payoffs[i], sigma, i, specs[i])
                responses.append(values.argmax(axis=1))
            sigma *= 1.0 - weight
            for i, best in enumerate(responses):
                sigma[rows, i, best] += weight
                if record:
                    br_history[:, t - 1, i] = best
        evals += n
        if record and (t % config.trajectory_stride == 0 or t == iterations):
            _snapshot(trajectories, sigma, t)

    results = []
    for b in range(batch):
        profile = StrategyProfile(sigma[b])
        results.append(
            FPResult(
                final_profile=profile,
                epsilon_report=epsilon(game, profile),
                init_index=b,
                iterations_run=iterations,
                best_response_evals=evals,
                best_responses=br_history[b] if record else None,
                trajectory=trajectories[b] if record else None,
            )
        )
    return results


def _profiles_array(game: Game, inits) -> np.ndarray:
    profiles = getattr(inits, "profiles", inits)
    stacked = np.stack([p.probs for p in profiles])
    if stacked.shape[1:] != (game.num_players, game.num_actions):
        raise ValueError("profile/game shape mismatch")
    return stacked


def fp_run(
    game: Game, init: StrategyProfile, config: FPRunConfig = FPRunConfig()
) -> FPResult:
    """Fictitious play from a single starting profile."""
    game.check_profile(init)
    return _run_batch(game, init.probs[None, :, :], config)[0]


def fp_run_all(game: Game, batch, config: FPRunConfig = FPRunConfig()) -> list[FPResult]:
    """One fictitious play result per starting profile, in batch order.

    ``batch`` may be an InitBatch or any sequence of StrategyProfile.
    """
    stacked = _profiles_array(game, batch)
    return _run_batch(game, stacked, config)


def fp_multi(game: Game, batch, config: FPRunConfig = FPRunConfig()) -> FPResult:
    """Best run over a batch of initializations.

    Returns the result with the smallest equilibrium error; ties go to the
    lowest initialization index.  Equal to the minimum over individual
    ``fp_run`` calls.
    """
    results = fp_run_all(game, batch, config)
    if not results:
        raise ValueError("initialization batch is empty")
    errors = np.array([r.epsilon for r in results])
    return results[int(errors.argmin())]


def write_trajectory_csv(result: FPResult, path) -> None:
    if result.trajectory is None:
        raise ValueError("run was not configured to record a trajectory")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "player", "action", "prob"])
        for row in result.trajectory:
            writer.writerow([row[0], row[1], row[2], f"{row[3]:.17g}"])
