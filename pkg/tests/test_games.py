from __future__ import annotations

import itertools

import numpy as np
import pytest

from nashinit.games import (
    Game,
    GameTooLargeError,
    MixedStrategy,
    StrategyProfile,
    best_response,
    epsilon,
    expected_utility,
    game_from_dict,
    game_to_dict,
    load_game,
    random_game,
    save_game,
)


def brute_force_expected_utility(game: Game, profile: StrategyProfile, player: int) -> float:
    """Oracle: enumerate every joint pure profile and sum payoff * probability."""
    total = 0.0
    for joint in itertools.product(range(game.num_actions), repeat=game.num_players):
        prob = 1.0
        for i, action in enumerate(joint):
            prob *= profile.probs[i, action]
        total += game.payoffs[(player,) + joint] * prob
    return total


def matching_pennies() -> Game:
    payoffs = np.zeros((2, 2, 2))
    for a in range(2):
        for b in range(2):
            payoffs[0, a, b] = 1.0 if a == b else -1.0
            payoffs[1, a, b] = -payoffs[0, a, b]
    return Game(num_players=2, num_actions=2, payoffs=payoffs)


class TestStrategyTypes:
    def test_mixed_strategy_renormalizes_small_drift(self):
        s = MixedStrategy(np.array([0.5 + 3e-10, 0.5]))
        assert s.probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_mixed_strategy_rejects_large_drift(self):
        with pytest.raises(ValueError):
            MixedStrategy(np.array([0.6, 0.5]))

    def test_mixed_strategy_rejects_negative(self):
        with pytest.raises(ValueError):
            MixedStrategy(np.array([-0.1, 1.1]))

    def test_profile_rows_validated(self):
        with pytest.raises(ValueError):
            StrategyProfile(np.array([[0.5, 0.5], [0.9, 0.3]]))

    def test_profile_is_immutable(self):
        p = StrategyProfile.uniform(2, 3)
        with pytest.raises(ValueError):
            p.probs[0, 0] = 1.0

    def test_profile_round_trips_strategies(self):
        p = StrategyProfile(np.array([[0.25, 0.75], [0.1, 0.9]]))
        rebuilt = StrategyProfile.from_strategies(p.strategies)
        np.testing.assert_allclose(rebuilt.probs, p.probs)

    def test_single_action_profile_allowed(self):
        # Samplers can emit m=1 profiles even though games require m >= 2.
        p = StrategyProfile(np.array([[1.0]]))
        assert p.probs[0, 0] == 1.0


class TestGameConstruction:
    def test_shape_enforced(self):
        with pytest.raises(ValueError):
            Game(num_players=2, num_actions=2, payoffs=np.zeros((2, 2, 3)))

    def test_min_dimensions(self):
        with pytest.raises(ValueError):
            Game(num_players=1, num_actions=2, payoffs=np.zeros((1, 2)))

    def test_payoffs_read_only(self):
        g = random_game(2, 2, 0)
        with pytest.raises(ValueError):
            g.payoffs[0, 0, 0] = 5.0


class TestExpectedUtility:
    def test_constant_game(self):
        payoffs = np.full((2, 3, 3), 0.25)
        payoffs[0] = 0.7
        g = Game(num_players=2, num_actions=3, payoffs=payoffs)
        p = StrategyProfile(np.array([[0.2, 0.5, 0.3], [0.6, 0.1, 0.3]]))
        assert expected_utility(g, p, 0) == pytest.approx(0.7, abs=1e-12)

    def test_pure_profile_reads_exact_cell(self):
        g = random_game(3, 4, 5)
        pure = np.zeros((3, 4))
        pure[0, 2] = pure[1, 0] = pure[2, 3] = 1.0
        p = StrategyProfile(pure)
        assert expected_utility(g, p, 0) == g.payoffs[0, 2, 0, 3]

    def test_uniform_profile_matches_brute_force_average(self):
        g = random_game(3, 2, 99)
        p = StrategyProfile.uniform(3, 2)
        expected = g.payoffs[0].mean()  # average of the 8 payoff cells
        assert expected_utility(g, p, 0) == pytest.approx(expected, abs=1e-12)
        assert expected_utility(g, p, 0) == pytest.approx(
            brute_force_expected_utility(g, p, 0), abs=1e-12
        )

    def test_linearity_in_own_strategy(self):
        g = random_game(3, 4, 17)
        rng = np.random.default_rng(3)
        base = rng.dirichlet(np.ones(4), size=3)
        other = rng.dirichlet(np.ones(4))
        for lam in rng.random(5):
            mixed = base.copy()
            mixed[1] = lam * base[1] + (1 - lam) * other
            left = expected_utility(g, StrategyProfile(mixed), 1)
            right = lam * expected_utility(g, StrategyProfile(base), 1) + (
                1 - lam
            ) * expected_utility(
                g, StrategyProfile(np.vstack([base[0], other, base[2]])), 1
            )
            assert left == pytest.approx(right, abs=1e-9)

    def test_shape_mismatch_error(self):
        g = random_game(2, 3, 0)
        with pytest.raises(ValueError, match="profile/game shape mismatch"):
            expected_utility(g, StrategyProfile.uniform(2, 4), 0)


class TestBestResponse:
    def test_two_player_column_argmax(self):
        g = random_game(2, 5, 11)
        col = 3
        opponent = np.zeros(5)
        opponent[col] = 1.0
        p = StrategyProfile(np.vstack([np.full(5, 0.2), opponent]))
        action, value = best_response(g, p, 0)
        assert action == int(g.payoffs[0][:, col].argmax())
        assert value == pytest.approx(g.payoffs[0][:, col].max(), abs=1e-12)

    def test_tie_breaks_to_lowest_index(self):
        payoffs = np.zeros((2, 3, 3))
        payoffs[0][0, :] = 0.5
        payoffs[0][2, :] = 0.5
        payoffs[0][1, :] = 0.1
        g = Game(num_players=2, num_actions=3, payoffs=payoffs)
        action, _ = best_response(g, StrategyProfile.uniform(2, 3), 0)
        assert action == 0

    def test_matches_exhaustive_pure_strategy_search(self):
        g = random_game(3, 5, 123)
        rng = np.random.default_rng(5)
        p = StrategyProfile(rng.dirichlet(np.ones(5), size=3))
        action, value = best_response(g, p, 1)
        # Oracle: evaluate each pure action through the brute-force utility.
        values = []
        for a in range(5):
            pure = np.zeros(5)
            pure[a] = 1.0
            candidate = StrategyProfile(np.vstack([p.probs[0], pure, p.probs[2]]))
            values.append(brute_force_expected_utility(g, candidate, 1))
        assert action == int(np.argmax(values))
        assert value == pytest.approx(max(values), abs=1e-12)

    def test_value_at_least_current_utility(self):
        g = random_game(3, 4, 21)
        rng = np.random.default_rng(8)
        for _ in range(10):
            p = StrategyProfile(rng.dirichlet(np.ones(4), size=3))
            for i in range(3):
                _, value = best_response(g, p, i)
                assert value >= expected_utility(g, p, i) - 1e-12


class TestEpsilon:
    def test_matching_pennies_uniform_is_equilibrium(self):
        report = epsilon(matching_pennies(), StrategyProfile.uniform(2, 2))
        assert report.epsilon == pytest.approx(0.0, abs=1e-12)

    def test_single_dominated_deviation_gap(self):
        # Player 0 plays an action that loses exactly `gap` against the
        # opponent's equilibrium column; everyone else has no incentive.
        gap = 0.3
        payoffs = np.zeros((2, 2, 2))
        payoffs[0][0, :] = 0.2
        payoffs[0][1, :] = 0.2 + gap
        g = Game(num_players=2, num_actions=2, payoffs=payoffs)
        p = StrategyProfile(np.array([[1.0, 0.0], [0.5, 0.5]]))
        report = epsilon(g, p)
        assert report.epsilon == pytest.approx(gap, abs=1e-12)
        assert report.per_player_gain[0] == pytest.approx(gap, abs=1e-12)
        assert report.per_player_gain[1] == pytest.approx(0.0, abs=1e-12)

    def test_matches_brute_force_max_regret(self):
        g = random_game(3, 5, 31)
        rng = np.random.default_rng(13)
        p = StrategyProfile(rng.dirichlet(np.ones(5), size=3))
        report = epsilon(g, p)
        worst = -np.inf
        for i in range(3):
            current = brute_force_expected_utility(g, p, i)
            for a in range(5):
                pure = np.zeros(5)
                pure[a] = 1.0
                rows = p.probs.copy()
                rows[i] = pure
                worst = max(
                    worst, brute_force_expected_utility(g, StrategyProfile(rows), i) - current
                )
        assert report.epsilon == pytest.approx(worst, abs=1e-12)

    def test_bounded_by_payoff_range(self):
        rng = np.random.default_rng(44)
        for seed in range(5):
            g = random_game(3, 3, seed)
            p = StrategyProfile(rng.dirichlet(np.ones(3), size=3))
            report = epsilon(g, p)
            spread = g.payoffs.max() - g.payoffs.min()
            assert 0.0 <= report.epsilon <= spread + 1e-12

    def test_pure_deviations_match_mixed_grid_on_2x2(self):
        # Utility is linear in the deviator's strategy, so the best mixed
        # deviation on a fine grid cannot beat the best pure one.
        g = random_game(2, 2, 77)
        p = StrategyProfile(np.array([[0.3, 0.7], [0.8, 0.2]]))
        report = epsilon(g, p)
        grid = np.linspace(0.0, 1.0, 1001)
        worst = -np.inf
        for i in range(2):
            current = expected_utility(g, p, i)
            for q in grid:
                rows = p.probs.copy()
                rows[i] = [q, 1.0 - q]
                worst = max(worst, expected_utility(g, StrategyProfile(rows), i) - current)
        assert report.epsilon == pytest.approx(worst, abs=1e-9)


class TestRandomGame:
    def test_determinism(self):
        a = random_game(3, 5, 4242)
        b = random_game(3, 5, 4242)
        assert np.array_equal(a.payoffs, b.payoffs)

    def test_shape_and_range(self):
        g = random_game(3, 5, 9)
        assert g.payoffs.shape == (3, 5, 5, 5)
        assert g.payoffs.size == 375
        assert np.all((g.payoffs >= 0.0) & (g.payoffs <= 1.0))

    def test_uniform_mean(self):
        g = random_game(2, 10, 1)  # 2 * 10**2 = 200 cells; use many games
        draws = np.concatenate(
            [random_game(2, 10, s).payoffs.ravel() for s in range(50)]
        )
        assert draws.size == 10_000
        assert 0.49 <= draws.mean() <= 0.51
        assert g.payoffs.shape == (2, 10, 10)

    def test_too_large_rejected(self):
        with pytest.raises(GameTooLargeError, match="game too large"):
            random_game(3, 5, 0, max_cells=100)


class TestGameJson:
    def test_round_trip(self, tmp_path):
        g = random_game(3, 4, 7)
        path = tmp_path / "game.json"
        save_game(g, path)
        loaded = load_game(path)
        assert loaded.num_players == 3
        assert loaded.num_actions == 4
        assert np.array_equal(loaded.payoffs, g.payoffs)

    def test_flat_layout_is_player_major_row_major(self):
        g = random_game(2, 3, 15)
        flat = game_to_dict(g)["payoffs"]
        # player 1, actions (2, 0) sits at offset m**n + 2*m + 0
        assert flat[9 + 6] == g.payoffs[1, 2, 0]

    def test_length_validation(self):
        with pytest.raises(ValueError, match="length"):
            game_from_dict({"players": 2, "actions": 2, "payoffs": [0.1] * 7})

    def test_missing_key(self):
        with pytest.raises(ValueError, match="malformed"):
            game_from_dict({"players": 2, "payoffs": []})
