"""Strategic-form games: payoff tensors, best responses, and equilibrium error.

A game with ``n`` players and ``m`` actions per player is stored as one dense
payoff tensor of shape ``(n, m, ..., m)``: ``payoffs[i, a_1, ..., a_n]`` is
player ``i``'s utility when each player ``j`` plays pure action ``a_j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from string import ascii_lowercase

import numpy as np

# Accumulated drift from repeated strategy averaging; vectors within this
# tolerance of a probability distribution are renormalized, anything worse
# is rejected.
PROB_TOL = 1e-9

# A best-deviation gain below this is a genuine bug, not float rounding.
NEGATIVE_GAIN_SLACK = -1e-12

# Refuse to allocate payoff tensors above this many cells (n * m**n).
DEFAULT_MAX_CELLS = 50_000_000

SHAPE_MISMATCH = "profile/game shape mismatch"


class GameTooLargeError(ValueError):
    """Raised when n * m**n exceeds the configured memory cap."""


def _as_prob_matrix(raw, rows_label: str) -> np.ndarray:
    probs = np.array(raw, dtype=float)
    if probs.ndim != 2 or probs.shape[0] < 1 or probs.shape[1] < 1:
        raise ValueError(f"{rows_label} must be a 2-D array of probabilities")
    if not np.all(np.isfinite(probs)):
        raise ValueError(f"{rows_label} contains non-finite entries")
    if np.any(probs < 0.0) or np.any(probs > 1.0 + PROB_TOL):
        raise ValueError(f"{rows_label} entries must lie in [0, 1]")
    sums = probs.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > PROB_TOL):
        raise ValueError(
            f"{rows_label} rows must sum to 1 within {PROB_TOL}; got sums {sums}"
        )
    probs /= sums[:, None]
    probs.setflags(write=False)
    return probs


@dataclass(frozen=True)
class MixedStrategy:
    """Probability distribution over one player's pure actions."""

    probs: np.ndarray

    def __post_init__(self):
        probs = _as_prob_matrix(np.atleast_2d(self.probs), "mixed strategy")[0]
        object.__setattr__(self, "probs", probs)

    @property
    def num_actions(self) -> int:
        return self.probs.size


@dataclass(frozen=True)
class StrategyProfile:
    """One mixed strategy per player, stored as an (n, m) row-stochastic matrix."""

    probs: np.ndarray

    def __post_init__(self):
        probs = _as_prob_matrix(self.probs, "strategy profile")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, num_players: int, num_actions: int) -> "StrategyProfile":
        return cls(np.full((num_players, num_actions), 1.0 / num_actions))

    @classmethod
    def from_strategies(cls, strategies) -> "StrategyProfile":
        return cls(np.stack([s.probs for s in strategies]))

    @property
    def num_players(self) -> int:
        return self.probs.shape[0]

    @property
    def num_actions(self) -> int:
        return self.probs.shape[1]

    @property
    def strategies(self) -> tuple[MixedStrategy, ...]:
        return tuple(MixedStrategy(row) for row in self.probs)


@dataclass(frozen=True)
class EpsilonReport:
    """Per-player best-deviation gains and their maximum.

    ``epsilon`` is the largest amount any single player can gain by
    unilaterally deviating; 0 means the profile is an exact Nash equilibrium.
    """

    per_player_gain: np.ndarray
    epsilon: float

    @classmethod
    def from_gains(cls, gains) -> "EpsilonReport":
        gains = np.asarray(gains, dtype=float)
        worst = float(gains.max())
        if worst < NEGATIVE_GAIN_SLACK:
            raise ValueError(
                f"best-response gain {worst} is negative beyond rounding slack"
            )
        gains.setflags(write=False)
        return cls(per_player_gain=gains, epsilon=max(worst, 0.0))


@dataclass(frozen=True)
class Game:
    """n-player strategic-form game with m actions per player."""

    num_players: int
    num_actions: int
    payoffs: np.ndarray

    def __post_init__(self):
        n, m = self.num_players, self.num_actions
        if n < 2:
            raise ValueError("a game needs at least 2 players")
        if m < 2:
            raise ValueError("a game needs at least 2 actions per player")
        payoffs = np.ascontiguousarray(self.payoffs, dtype=float)
        expected = (n,) + (m,) * n
        if payoffs.shape != expected:
            raise ValueError(
                f"payoff tensor shape {payoffs.shape} does not match {expected}"
            )
        if not np.all(np.isfinite(payoffs)):
            raise ValueError("payoffs must be finite")
        payoffs.setflags(write=False)
        object.__setattr__(self, "payoffs", payoffs)

    def check_profile(self, profile: StrategyProfile) -> None:
        if (
            profile.num_players != self.num_players
            or profile.num_actions != self.num_actions
        ):
            raise ValueError(SHAPE_MISMATCH)


def _einsum_spec(n: int, player: int) -> tuple[str, str]:
    axes = ascii_lowercase[:n]
    others = ",".join(axes[j] for j in range(n) if j != player)
    return axes, others


def action_values(game: Game, profile: StrategyProfile, player: int) -> np.ndarray:
    """Expected utility of each of ``player``'s pure actions against the
    other players' mixed strategies.  One O(m**n) tensor contraction."""
    game.check_profile(profile)
    n = game.num_players
    if not 0 <= player < n:
        raise ValueError(f"player index {player} out of range")
    axes, others = _einsum_spec(n, player)
    operands = [game.payoffs[player]] + [
        profile.probs[j] for j in range(n) if j != player
    ]
    return np.einsum(f"{axes},{others}->{axes[player]}", *operands)


def expected_utility(game: Game, profile: StrategyProfile, player: int) -> float:
    """Expected utility of ``player`` under the full mixed profile."""
    values = action_values(game, profile, player)
    return float(values @ profile.probs[player])


def best_response(
    game: Game, profile: StrategyProfile, player: int
) -> tuple[int, float]:
    """Pure action maximizing ``player``'s utility against the others.

    A pure maximizer always attains the mixed-strategy supremum because
    utility is linear in the player's own strategy.  Ties break toward the
    lowest action index.
    """
    values = action_values(game, profile, player)
    action = int(values.argmax())
    return action, float(values[action])


def epsilon(game: Game, profile: StrategyProfile) -> EpsilonReport:
    """Largest unilateral-deviation gain over all players for ``profile``."""
    game.check_profile(profile)
    gains = np.empty(game.num_players)
    for i in range(game.num_players):
        values = action_values(game, profile, i)
        gains[i] = float(values.max()) - float(values @ profile.probs[i])
    return EpsilonReport.from_gains(gains)


def random_game(
    n: int, m: int, seed: int, max_cells: int = DEFAULT_MAX_CELLS
) -> Game:
    """Game with all n * m**n payoffs drawn i.i.d. uniform on [0, 1].

    The same seed always yields the same game, bit for bit.
    """
    if n < 2 or m < 2:
        raise ValueError("random_game requires n >= 2 and m >= 2")
    cells = n * m**n
    if cells > max_cells:
        raise GameTooLargeError(
            f"game too large: {cells} payoff cells exceed cap {max_cells}"
        )
    rng = np.random.default_rng(seed)
    payoffs = rng.random((n,) + (m,) * n)
    return Game(num_players=n, num_actions=m, payoffs=payoffs)


def game_to_dict(game: Game) -> dict:
    return {
        "players": game.num_players,
        "actions": game.num_actions,
        "payoffs": game.payoffs.ravel(order="C").tolist(),
    }


def game_from_dict(data: dict) -> Game:
    try:
        n = int(data["players"])
        m = int(data["actions"])
        flat = np.asarray(data["payoffs"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed game document: {exc}") from exc
    if n < 2 or m < 2:
        raise ValueError("game document needs players >= 2 and actions >= 2")
    expected = n * m**n
    if flat.ndim != 1 or flat.size != expected:
        raise ValueError(
            f"payoffs length {flat.size} does not match players*actions**players"
            f" = {expected}"
        )
    return Game(num_players=n, num_actions=m, payoffs=flat.reshape((n,) + (m,) * n))


def save_game(game: Game, path) -> None:
    with open(path, "w") as fh:
        json.dump(game_to_dict(game), fh)


def load_game(path) -> Game:
    with open(path) as fh:
        data = json.load(fh)
    return game_from_dict(data)
