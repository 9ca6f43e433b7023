import math

import pytest

from env.arms import ArmModel, Environment, make_environment, normalize_environment, sample_round
from harness.scenarios import AD_CATEGORIES, CHANNEL_CONFLICTS, CHANNEL_RATES
from oracle.conflict import ConflictGraph, build_extended_conflict_graph
from oracle.problems import ExhaustiveProblem, MWISProblem, OracleMode, ThresholdSubsetProblem
from oracle.strategy import Strategy
from regret.bounds import (
    bound_lemma1,
    bound_lemma2,
    bound_lemma3,
    bound_lemma4,
    lemma1_terms,
    lemma3_terms,
    moss_bound,
    theorem_beta,
    theorem_dfl,
)
from regret.ledger import RegretLedger, record_round, static_optimum
from utils.errors import BoundDomainError, SequencingError

E = math.e


class TestStaticOptimum:
    def test_ad_placement(self):
        env = make_environment([mean for mean, _ in AD_CATEGORIES])
        problem = ThresholdSubsetProblem([bid for _, bid in AD_CATEGORIES], 3000.0, 5)
        strategy, lambda1 = static_optimum(env, problem)
        assert strategy == Strategy((1, 2, 4, 5, 9))
        assert lambda1 == pytest.approx(3.8414, abs=1e-9)

    def test_channel_access_raw_units(self):
        env, scale = normalize_environment(CHANNEL_RATES)
        graph = build_extended_conflict_graph(ConflictGraph.from_rows(CHANNEL_CONFLICTS, channels=5))
        _, lambda1 = static_optimum(env, MWISProblem(graph, OracleMode.GREEDY, max_size=5))
        assert lambda1 * scale == pytest.approx(3732.56, abs=0.01)

    def test_single_strategy(self):
        env = make_environment([0.2, 0.3, 0.4])
        strategy, lambda1 = static_optimum(env, ExhaustiveProblem([Strategy((0, 2))], num_arms=3))
        assert strategy == Strategy((0, 2))
        assert lambda1 == pytest.approx(0.6)


class TestLedger:
    def _play(self, means, strategy, lambda1, rounds=50, beta=1.0):
        env = Environment([ArmModel(m) for m in means], seed=4)
        ledger = RegretLedger(lambda1=lambda1, beta=beta)
        for t in range(1, rounds + 1):
            reward = sum(r for _, r in sample_round(env, strategy.arms))
            record_round(ledger, t, strategy, reward)
        return ledger

    def test_optimal_play_has_zero_regret(self):
        ledger = self._play([1.0, 0.0, 1.0], Strategy((0, 2)), lambda1=2.0)
        assert all(row.avg_regret == 0.0 for row in ledger.per_round)
        assert ledger.empirical_regret() == 0.0

    def test_fixed_suboptimal_play_has_constant_gap(self):
        means = [1.0, 0.0, 1.0]
        lambda1 = 2.0
        gap = lambda1 - (means[0] + means[1])
        ledger = self._play(means, Strategy((0, 1)), lambda1)
        assert all(row.avg_regret == pytest.approx(gap) for row in ledger.per_round)
        assert ledger.empirical_regret() == pytest.approx(50 * gap)

    def test_negative_beta_regret(self):
        ledger = RegretLedger(lambda1=1.0, beta=2.0)
        record_round(ledger, 1, Strategy((0,)), 0.6)
        assert ledger.per_round[0].avg_beta_regret == pytest.approx(-0.1)
        assert ledger.per_round[0].avg_regret == pytest.approx(0.4)

    def test_identities_hold_every_row(self, rng):
        env = Environment([ArmModel(m) for m in rng.random(6)], seed=8)
        ledger = RegretLedger(lambda1=2.5, beta=3.0)
        for t in range(1, 300):
            strategy = Strategy.of(rng.choice(6, size=2, replace=False))
            reward = sum(r for _, r in sample_round(env, strategy.arms))
            record_round(ledger, t, strategy, reward)
        for row in ledger.per_round:
            assert row.t * row.avg_regret + row.cum_reward == pytest.approx(row.t * 2.5, rel=1e-9)
            assert row.avg_beta_regret <= row.avg_regret

    def test_rounds_must_increase(self):
        ledger = RegretLedger(lambda1=1.0)
        record_round(ledger, 1, Strategy((0,)), 1.0)
        with pytest.raises(SequencingError):
            record_round(ledger, 1, Strategy((0,)), 1.0)
        with pytest.raises(SequencingError):
            record_round(ledger, 0, Strategy((0,)), 1.0)

    def test_beta_below_one(self):
        with pytest.raises(BoundDomainError):
            RegretLedger(lambda1=1.0, beta=0.5)


def _lemma1_by_hand(n, K, N):
    return (
        N * K
        + math.sqrt(K * E) * n ** (2 / 3)
        + 16 * N ** 3 * n ** (3 / 4)
        + (K / E ** 2 + (1 + 4 * math.sqrt(K) * N ** 2) * N) * N * K * n ** (5 / 6)
    )


def _lemma3_by_hand(n, K, N, beta):
    return (
        N * K / beta
        + math.sqrt(E * K) * n ** (2 / 3)
        + 16 * N ** 3 * n ** (3 / 4) / beta
        + (1 + 4 * math.sqrt(K) * N ** 2 / beta ** 2 + K / (E ** 2 * N)) * N ** 2 * K / beta * n ** (5 / 6)
    )


def _lemma2_by_hand(n, K, N, d):
    inner = (
        1
        + 16 * N ** 2 * math.log(n ** (2 / 3) * N ** 2 / K) / d ** 2
        + K * n ** (1 / 3) / E ** 2
        + 8 * N ** 3 * K * math.log(n * N ** 2 / K) * n ** (1 / 3) / d ** 2
        + K * N / ((1 - 1 / E) * d ** 2)
    )
    return E ** 3 * K ** 3 / d ** 5 + N * K * inner


def _lemma4_by_hand(n, K, N, beta, d):
    inner = (
        1
        + 16 * N ** 2 * math.log(n ** (2 / 3) * N ** 2 / K) / d ** 2
        + K * n ** (1 / 3) / E ** 2
        + 8 * N ** 3 * K * n ** (1 / 3) * math.log(n * N ** 2 / K) / (beta ** 2 * d ** 2)
        + N * K / ((1 - 1 / E) * d ** 2)
    )
    return E ** 3 * K ** 3 / d ** 5 + N * K / beta * inner


POINTS = [(1e2, 10, 5), (1e3, 25, 5), (2e3, 10, 3), (1e5, 8, 2), (1e6, 50, 4)]


class TestBounds:
    def test_lemma1_unit_point(self):
        assert bound_lemma1(1, 1, 1) == pytest.approx(17 + math.sqrt(E) + 1 / E ** 2 + 5, rel=1e-12)
        assert bound_lemma1(1, 1, 1) == pytest.approx(23.78, abs=0.005)

    @pytest.mark.parametrize("n,K,N", POINTS)
    def test_match_independent_evaluation(self, n, K, N):
        assert bound_lemma1(n, K, N) == pytest.approx(_lemma1_by_hand(n, K, N), rel=1e-9)
        assert bound_lemma2(n, K, N, 0.5) == pytest.approx(_lemma2_by_hand(n, K, N, 0.5), rel=1e-9)
        assert bound_lemma3(n, K, N, 8.0) == pytest.approx(_lemma3_by_hand(n, K, N, 8.0), rel=1e-9)
        assert bound_lemma4(n, K, N, 8.0, 0.5) == pytest.approx(_lemma4_by_hand(n, K, N, 8.0, 0.5), rel=1e-9)

    def test_lemma3_at_unit_beta(self):
        # The two forms coincide algebraically when beta = 1.
        for n, K, N in POINTS:
            assert bound_lemma3(n, K, N, 1.0) == pytest.approx(bound_lemma1(n, K, N), rel=1e-9)

    @pytest.mark.parametrize("terms", [lambda n: lemma1_terms(n, 10, 5), lambda n: lemma3_terms(n, 10, 5, 4.0)])
    def test_five_sixths_term_scales(self, terms):
        base, scaled = terms(1000.0), terms(64000.0)
        assert scaled.n_five_sixths / base.n_five_sixths == pytest.approx(32.0, rel=1e-12)
        assert scaled.n_two_thirds / base.n_two_thirds == pytest.approx(16.0, rel=1e-12)

    def test_monotone_and_nonnegative_in_n(self):
        grid = [10.0 ** p for p in range(2, 7)]
        for fn in (
            lambda n: bound_lemma1(n, 25, 5),
            lambda n: bound_lemma2(n, 25, 5, 0.3),
            lambda n: bound_lemma3(n, 25, 5, 8.0),
            lambda n: bound_lemma4(n, 25, 5, 8.0, 0.3),
        ):
            values = [fn(n) for n in grid]
            assert all(v >= 0 for v in values)
            assert all(b > a for a, b in zip(values, values[1:]))

    def test_theorems_take_the_minimum(self):
        assert theorem_dfl(1e4, 10, 5, 1.0) == min(bound_lemma1(1e4, 10, 5), bound_lemma2(1e4, 10, 5, 1.0))
        assert theorem_beta(1e4, 25, 5, 8.0, 1.0) == min(
            bound_lemma3(1e4, 25, 5, 8.0), bound_lemma4(1e4, 25, 5, 8.0, 1.0)
        )

    def test_moss_bound(self):
        assert moss_bound(100, 4) == pytest.approx(49 * 20)

    @pytest.mark.parametrize("delta", [0.0, -0.5, 6.0])
    def test_delta_domain(self, delta):
        with pytest.raises(BoundDomainError):
            bound_lemma2(1e3, 10, 5, delta)
        with pytest.raises(BoundDomainError):
            bound_lemma4(1e3, 10, 5, 2.0, delta)

    @pytest.mark.parametrize("args", [(0, 10, 5), (1e3, 0, 5), (1e3, 10, -1)])
    def test_positive_parameters(self, args):
        with pytest.raises(BoundDomainError):
            bound_lemma1(*args)

    def test_beta_domain(self):
        with pytest.raises(BoundDomainError):
            bound_lemma3(1e3, 10, 5, 0.5)


@pytest.mark.parametrize("function", [static_optimum, record_round, RegretLedger.empirical_regret, RegretLedger.last_t.fget])
def test_ledger_functions_are_documented(function):
    assert function.__doc__ and function.__doc__.strip()
