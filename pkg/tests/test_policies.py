"""Policy behavior: forced exploration, window bookkeeping, posterior
selection, baselines, and determinism."""

import math

import numpy as np
import pytest

from srrb.curves import BernoulliLaw, BoundedUniformLaw
from srrb.policies import (
    BetaSlidingWindowTS,
    GaussianSlidingWindowTS,
    PolicyConfig,
    SlidingWindowUCB,
    UCB1Policy,
    default_precision_scale,
    default_sw_window,
    make_policy,
)
from srrb.verify import recount_window_stats


def rng(seed=0):
    return np.random.default_rng(seed)


class TestConfig:
    def test_kind_validation(self):
        with pytest.raises(ValueError):
            PolicyConfig(kind="egreedy")

    def test_resolve_fills_window(self):
        cfg = PolicyConfig(kind="beta_swts").resolve(horizon=500)
        assert cfg.window == 500

    def test_resolve_rejects_oversized_window(self):
        with pytest.raises(ValueError):
            PolicyConfig(kind="beta_swts", window=100).resolve(horizon=50)

    def test_sw_ucb_default_window_recipe(self):
        # ceil(4 sqrt(T ln T)) at T = 1e4 evaluates to 1214
        assert default_sw_window(10_000) == math.ceil(4 * math.sqrt(10_000 * math.log(10_000)))
        assert default_sw_window(10_000) == 1214
        cfg = PolicyConfig(kind="sw_ucb").resolve(horizon=10_000)
        assert cfg.window == 1214

    def test_default_precision_scale(self):
        assert default_precision_scale(BernoulliLaw()) == 1.0
        law = BoundedUniformLaw(half_width=0.9)
        assert default_precision_scale(law) == pytest.approx(
            min(1.0 / (4.0 * 0.81 / 3.0), 1.0)
        )
        cfg = PolicyConfig(kind="gauss_swgts").resolve(horizon=10, law=BernoulliLaw())
        assert cfg.precision_scale == 1.0

    def test_named_variant_parameterizations(self):
        # plain TS: no forced pulls, full window
        plain = PolicyConfig(kind="beta_swts").resolve(horizon=100)
        assert plain.forced_pulls == 0 and plain.window == 100
        # explore-then variant: positive forced pulls
        et = PolicyConfig(kind="beta_swts", forced_pulls=10)
        assert et.forced_pulls == 10
        with pytest.raises(ValueError):
            PolicyConfig(kind="beta_swts", forced_pulls=-1)


class TestForcedExploration:
    def test_round_robin_schedule(self):
        policy = BetaSlidingWindowTS(3, 100, 100, 2, rng())
        # rounds 1..6 cycle over arms 0, 1, 2 twice
        expected = [0, 1, 2, 0, 1, 2]
        for t, arm in enumerate(expected, start=1):
            assert policy.select_arm(t) == arm
            policy.update(arm, 0.0, t)

    def test_counts_after_forced_phase(self):
        forced = 4
        policy = GaussianSlidingWindowTS(5, 200, 200, forced, rng())
        for t in range(1, 5 * forced + 1):
            arm = policy.select_arm(t)
            policy.update(arm, 0.25, t)
        np.testing.assert_array_equal(policy.lifetime_counts, forced)

    def test_fourth_round_second_pass(self):
        policy = BetaSlidingWindowTS(3, 50, 50, 2, rng())
        for t in range(1, 4):
            policy.update(policy.select_arm(t), 1.0, t)
        assert policy.select_arm(4) == 0


class TestBetaSelection:
    def test_dominant_arm_wins_almost_surely(self):
        policy = BetaSlidingWindowTS(2, 10_000, 10_000, 0, rng(5))
        t = 1
        for _ in range(50):
            policy.update(0, 1.0, t)
            t += 1
        for _ in range(50):
            policy.update(1, 0.0, t)
            t += 1
        wins = sum(policy.select_arm(t) == 0 for _ in range(10_000))
        assert wins / 10_000 > 0.999

    def test_posterior_parameters_from_window(self):
        policy = BetaSlidingWindowTS(1, 100, 100, 0, rng())
        rewards = [1.0, 0.0, 1.0, 1.0, 0.0]
        for t, x in enumerate(rewards, start=1):
            policy.update(0, x, t)
        # S = 3, N = 5 gives a Beta(4, 3) posterior
        assert policy.window_sums[0] == 3.0
        assert policy.window_counts[0] == 5
        assert policy.window_sums[0] + 1 == 4
        assert policy.window_counts[0] - policy.window_sums[0] + 1 == 3

    def test_rejects_nonbinary_reward(self):
        policy = BetaSlidingWindowTS(2, 10, 10, 0, rng())
        with pytest.raises(ValueError):
            policy.update(0, 0.5, 1)

    def test_empty_window_samples_flat_prior(self):
        # with window 1, every round evicts the other arm's sample, yet
        # selection still works by sampling Beta(1, 1)
        policy = BetaSlidingWindowTS(2, 100, 1, 0, rng(3))
        for t in range(1, 50):
            arm = policy.select_arm(t)
            policy.update(arm, 1.0, t)
        assert policy.window_counts.sum() == 1


class TestGaussianSelection:
    def test_forced_pull_on_empty_window(self):
        policy = GaussianSlidingWindowTS(3, 100, 100, 0, rng())
        assert policy.select_arm(1) == 0
        policy.update(0, 0.4, 1)
        assert policy.select_arm(2) == 1
        policy.update(1, 0.2, 2)
        assert policy.select_arm(3) == 2

    def test_window_eviction_triggers_forced_pull(self):
        # window 2: after two rounds on other arms, an arm's stats vanish
        # and it must be pulled outright
        policy = GaussianSlidingWindowTS(2, 100, 2, 0, rng(1))
        policy.update(0, 1.0, 1)
        policy.update(1, 1.0, 2)
        policy.update(1, 1.0, 3)
        assert policy.window_counts[0] == 0
        assert policy.select_arm(4) == 0

    def test_accepts_real_rewards(self):
        policy = GaussianSlidingWindowTS(2, 10, 10, 0, rng())
        policy.update(0, 0.731, 1)
        assert policy.window_sums[0] == pytest.approx(0.731)


class TestWindowAccounting:
    def test_gap_window_example(self):
        # window 3, pulls of arm 0 at rounds 1, 2 and 4: by round 5 only
        # rounds 2 and 4 remain in view
        policy = GaussianSlidingWindowTS(2, 100, 3, 0, rng())
        policy.update(0, 1.0, 1)
        policy.update(0, 1.0, 2)
        policy.update(1, 0.5, 3)
        policy.update(0, 1.0, 4)
        assert policy.window_counts[0] == 2
        assert policy.window_counts[1] == 1

    def test_full_window_never_evicts(self):
        horizon = 300
        policy = BetaSlidingWindowTS(2, horizon, horizon, 0, rng(2))
        pulls = np.random.default_rng(9).integers(0, 2, size=horizon)
        for t, arm in enumerate(pulls, start=1):
            policy.update(int(arm), 1.0, t)
        np.testing.assert_array_equal(policy.window_counts, np.bincount(pulls, minlength=2))
        np.testing.assert_array_equal(policy.lifetime_counts, policy.window_counts)

    @pytest.mark.parametrize("window", [1, 7, 64, 500])
    def test_matches_recount_on_random_trace(self, window):
        horizon, num_arms = 500, 4
        trace_rng = np.random.default_rng(window)
        pulls = trace_rng.integers(0, num_arms, size=horizon)
        rewards = trace_rng.integers(0, 1025, size=horizon) / 1024.0
        policy = SlidingWindowUCB(num_arms, horizon, window, rng(4))
        counts, sums = recount_window_stats(pulls, rewards, num_arms, window)
        for t in range(1, horizon + 1):
            policy.update(int(pulls[t - 1]), float(rewards[t - 1]), t)
            np.testing.assert_array_equal(policy.window_counts, counts[t])
            np.testing.assert_array_equal(policy.window_sums, sums[t])

    def test_out_of_order_rounds_rejected(self):
        policy = BetaSlidingWindowTS(2, 10, 10, 0, rng())
        policy.update(0, 1.0, 1)
        with pytest.raises(ValueError):
            policy.update(0, 1.0, 1)
        with pytest.raises(ValueError):
            policy.update(0, 1.0, 3)

    def test_round_past_horizon_rejected(self):
        policy = BetaSlidingWindowTS(2, 2, 2, 0, rng())
        policy.update(0, 1.0, 1)
        policy.update(0, 1.0, 2)
        with pytest.raises(ValueError):
            policy.select_arm(3)


class TestBaselines:
    def test_ucb1_bootstrap(self):
        policy = UCB1Policy(3, 100, rng())
        seen = set()
        for t in range(1, 4):
            arm = policy.select_arm(t)
            seen.add(arm)
            policy.update(arm, 1.0, t)
        assert seen == {0, 1, 2}

    def test_ucb1_prefers_higher_mean(self):
        policy = UCB1Policy(2, 100, rng())
        for t, (arm, x) in enumerate([(0, 1.0), (1, 0.0), (0, 1.0), (1, 0.0)], start=1):
            policy.update(arm, x, t)
        assert policy.select_arm(5) == 0

    def test_ucb1_index_formula(self):
        policy = UCB1Policy(2, 100, rng(), alpha=2.0)
        for t, (arm, x) in enumerate([(0, 1.0), (1, 0.0)], start=1):
            policy.update(arm, x, t)
        t = 3
        idx0 = 1.0 + math.sqrt(2.0 * math.log(t) / 1)
        idx1 = 0.0 + math.sqrt(2.0 * math.log(t) / 1)
        assert idx0 > idx1
        assert policy.select_arm(t) == 0

    def test_sw_ucb_uses_window(self):
        # after the window slides past arm 0's good streak, the empty-window
        # bootstrap pulls it again
        policy = SlidingWindowUCB(2, 100, 2, rng(8))
        policy.update(0, 1.0, 1)
        policy.update(1, 0.0, 2)
        policy.update(1, 0.0, 3)
        assert policy.window_counts[0] == 0
        assert policy.select_arm(4) == 0

    def test_tie_break_randomizes(self):
        policy = UCB1Policy(2, 10_000, rng(11))
        policy.update(0, 1.0, 1)
        policy.update(1, 1.0, 2)
        picks = {policy.select_arm(3) for _ in range(64)}
        assert picks == {0, 1}


class TestDeterminism:
    def test_same_seed_same_sequence(self):
        def run(seed):
            policy = BetaSlidingWindowTS(3, 400, 50, 2, rng(seed))
            reward_rng = np.random.default_rng(123)
            picks = []
            for t in range(1, 401):
                arm = policy.select_arm(t)
                picks.append(arm)
                policy.update(arm, float(reward_rng.integers(0, 2)), t)
            return picks

        assert run(7) == run(7)
        assert run(7) != run(8)

    def test_make_policy_dispatch(self):
        for kind, cls in [
            ("beta_swts", BetaSlidingWindowTS),
            ("gauss_swgts", GaussianSlidingWindowTS),
            ("ucb1", UCB1Policy),
            ("sw_ucb", SlidingWindowUCB),
        ]:
            policy = make_policy(PolicyConfig(kind=kind), 3, 50, rng(), BernoulliLaw())
            assert isinstance(policy, cls)

    def test_beta_rejects_non_bernoulli_law(self):
        with pytest.raises(ValueError):
            make_policy(
                PolicyConfig(kind="beta_swts"), 2, 50, rng(), BoundedUniformLaw(half_width=0.1)
            )
