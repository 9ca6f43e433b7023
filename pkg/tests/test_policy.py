import json
import math
from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracle.conflict import ConflictGraph, build_extended_conflict_graph
from oracle.problems import ExhaustiveProblem, MWISProblem, maximize
from oracle.strategy import Strategy
from policy.indices import dfl_bonus, dfl_index, dfl_indices, llr_index, llr_indices, moss_index
from policy.selector import naive_moss_select, select_strategy, select_with_value
from policy.stats import ArmStats, PolicyKind, PolicyState, update_stats
from utils.errors import InvalidObservationError, NoFeasibleStrategyError, UnsupportedInstanceError


def _warm_state(kind, means, plays):
    state = PolicyState.fresh(kind, len(means))
    state.plays[:] = plays
    state.reward_sums[:] = np.asarray(means) * np.asarray(plays)
    return state


class TestUpdateStats:
    def test_cold_arm_first_observation(self):
        state = update_stats(PolicyState.fresh("dfl", 3), [(1, 0.7)])
        assert state.arm(1) == ArmStats(plays=1, reward_sum=0.7)
        assert state.arm(1).empirical_mean == pytest.approx(0.7)
        assert state.round == 1

    def test_running_mean(self):
        state = _warm_state(PolicyKind.DFL, [0.5], [3])
        update_stats(state, [(0, 1.0)])
        assert state.arm(0).plays == 4
        assert state.arm(0).empirical_mean == pytest.approx(0.625)

    def test_cold_arm_has_no_mean(self):
        stats = PolicyState.fresh("llr", 2).arm(0)
        assert stats.is_cold and stats.empirical_mean is None
        assert math.isnan(PolicyState.fresh("llr", 2).empirical_means()[0])

    @pytest.mark.parametrize("observation", [(0, 1.5), (0, -0.1), (5, 0.5)])
    def test_invalid_observation(self, observation):
        state = PolicyState.fresh("dfl", 2)
        with pytest.raises(InvalidObservationError):
            update_stats(state, [observation])
        assert state.round == 0 and state.plays.sum() == 0

    def test_total_plays_equal_observations(self):
        state = PolicyState.fresh("dfl", 4)
        update_stats(state, [(0, 1.0), (2, 0.0)])
        update_stats(state, [(1, 0.5), (2, 1.0), (3, 0.25)])
        assert state.plays.sum() == 5
        assert state.round == 2

    def test_moss_keeps_strategy_counters(self):
        state = PolicyState.fresh("moss", 3)
        update_stats(state, [(0, 1.0), (2, 0.5)], Strategy((0, 2)))
        update_stats(state, [(0, 0.0), (2, 0.5)])
        assert state.strategy_stats[Strategy((0, 2))] == [2, 2.0]
        assert state.to_dict()["strategy_stats"] == {"0|2": [2, 2.0]}


class TestDflIndex:
    def test_clamped_log(self):
        assert dfl_index(ArmStats(1, 0.5), t=1, K=10) == 0.5

    def test_exploring_value(self):
        value = dfl_index(ArmStats(2, 0.4), t=1000, K=5)
        assert value == pytest.approx(1.272983, abs=1e-6)
        expected = 0.2 + math.sqrt(math.log(1000 ** (2.0 / 3.0) / 10) / 2)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_cold_arm_is_infinite(self):
        assert dfl_index(ArmStats(0, 0.0), t=5, K=3) == math.inf

    @pytest.mark.parametrize("c", range(2, 36))
    @pytest.mark.parametrize("split", ["all_k", "balanced", "all_m"])
    def test_clamp_boundary(self, c, split):
        K, m = {"all_k": (c * c, 1), "balanced": (c, c), "all_m": (1, c * c)}[split]
        t = c ** 3
        assert dfl_bonus(m, t, K) < 1e-6
        assert dfl_bonus(m + 1, t, K) == 0.0
        assert dfl_bonus(m, t + c * c * 3, K) > 0.0

    @given(
        t=st.integers(min_value=1, max_value=10 ** 7),
        K=st.integers(min_value=1, max_value=50),
        m=st.integers(min_value=1, max_value=10 ** 4),
    )
    def test_bonus_zero_exactly_when_clamped(self, t, K, m):
        bonus = dfl_bonus(m, t, K)
        if t ** (2.0 / 3.0) <= K * m:
            assert bonus == 0.0
        else:
            assert bonus > 0.0

    def test_bonus_non_increasing_in_plays(self):
        bonuses = [dfl_bonus(m, 10 ** 6, 5) for m in range(1, 10 ** 4 + 1)]
        assert all(b >= a for a, b in zip(bonuses[1:], bonuses))

    def test_vector_matches_scalar(self, rng):
        plays = rng.integers(0, 40, size=25)
        means = rng.random(25)
        state = _warm_state(PolicyKind.DFL, means, plays)
        for t in (1, 10, 400, 2000):
            vector = dfl_indices(state, t, 25)
            for k in range(25):
                assert vector[k] == pytest.approx(dfl_index(state.arm(k), t, 25), rel=1e-12)


class TestLlrIndex:
    def test_closed_form(self):
        assert llr_index(ArmStats(4, 2.0), t=math.e ** 2, N=1) == pytest.approx(1.5, rel=1e-12)

    def test_first_round_has_no_bonus(self):
        assert llr_index(ArmStats(3, 1.2), t=1, N=4) == pytest.approx(0.4)

    def test_cold_arm_is_infinite(self):
        assert llr_index(ArmStats(0, 0.0), t=9, N=2) == math.inf

    def test_vector_matches_scalar(self, rng):
        plays = rng.integers(0, 40, size=12)
        state = _warm_state(PolicyKind.LLR, rng.random(12), plays)
        vector = llr_indices(state, 77, 3)
        for k in range(12):
            assert vector[k] == pytest.approx(llr_index(state.arm(k), 77, 3), rel=1e-12)


class TestNaiveMoss:
    def test_unplayed_strategy_first(self):
        strategies = [Strategy((0,)), Strategy((1,))]
        state = PolicyState.fresh("moss", 2)
        update_stats(state, [(0, 1.0)], strategies[0])
        assert naive_moss_select(state, strategies, t=2, n=100) == strategies[1]

    def test_ties_keep_list_order(self):
        strategies = [Strategy((1,)), Strategy((0,))]
        state = PolicyState.fresh("moss", 2)
        state.strategy_stats = {strategies[0]: [5, 2.5], strategies[1]: [5, 2.5]}
        assert naive_moss_select(state, strategies, t=11, n=1000) == strategies[0]

    def test_gap_beats_bonus(self):
        strategies = [Strategy((0,)), Strategy((1,))]
        state = PolicyState.fresh("moss", 2)
        state.strategy_stats = {strategies[0]: [50, 45.0], strategies[1]: [50, 5.0]}
        assert moss_index(50, 0.9, 100, 2) == 0.9
        assert naive_moss_select(state, strategies, t=101, n=100) == strategies[0]

    def test_empty_list(self):
        with pytest.raises(NoFeasibleStrategyError):
            naive_moss_select(PolicyState.fresh("moss", 1), [], t=1, n=10)

    def test_horizon_read_from_state(self):
        strategies = [Strategy((0,)), Strategy((1,))]
        state = PolicyState.fresh("moss", 2, horizon=100)
        state.strategy_stats = {strategies[0]: [50, 20.0], strategies[1]: [10, 3.5]}
        assert naive_moss_select(state, strategies, t=61) == naive_moss_select(state, strategies, t=61, n=100)
        assert naive_moss_select(state, strategies, t=61) == strategies[1]
        assert naive_moss_select(state, strategies, t=61, n=20) == strategies[0]

    def test_missing_horizon(self):
        state = PolicyState.fresh("moss", 1)
        update_stats(state, [(0, 0.5)], Strategy((0,)))
        with pytest.raises(UnsupportedInstanceError):
            naive_moss_select(state, [Strategy((0,))], t=2)


class TestSelectStrategy:
    def test_cold_start_covers_first_arms_at_full_size(self):
        strategies = [Strategy(c) for size in (1, 2) for c in combinations(range(5), size)]
        problem = ExhaustiveProblem(strategies)
        state = PolicyState.fresh("dfl", 5)
        assert select_strategy(state, problem, 1) == Strategy((0, 1))

    def test_cold_arms_outrank_any_finite_sum(self):
        problem = ExhaustiveProblem([Strategy((0, 1)), Strategy((2,))])
        state = _warm_state(PolicyKind.DFL, [1.0, 1.0, 0.0], [100, 100, 0])
        result = select_with_value(state, problem, 10)
        assert result.strategy == Strategy((2,))
        assert result.value == math.inf

    def test_single_feasible_strategy(self, rng):
        problem = ExhaustiveProblem([Strategy((1, 3))], num_arms=4)
        state = _warm_state(PolicyKind.LLR, rng.random(4), [3, 3, 3, 3])
        assert select_strategy(state, problem, 50) == Strategy((1, 3))

    @given(st.data())
    def test_matches_brute_force_argmax(self, data):
        K = data.draw(st.integers(min_value=2, max_value=10))
        N = data.draw(st.integers(min_value=1, max_value=min(4, K)))
        pool = [Strategy(c) for size in range(1, N + 1) for c in combinations(range(K), size)]
        chosen = data.draw(st.lists(st.sampled_from(pool), min_size=1, max_size=12, unique=True))
        plays = data.draw(st.lists(st.integers(1, 30), min_size=K, max_size=K))
        means = data.draw(st.lists(st.floats(0.0, 1.0), min_size=K, max_size=K))
        t = data.draw(st.integers(1, 5000))
        kind = data.draw(st.sampled_from([PolicyKind.DFL, PolicyKind.LLR]))
        state = _warm_state(kind, means, plays)
        problem = ExhaustiveProblem(chosen, num_arms=K)

        weights = dfl_indices(state, t, K) if kind == PolicyKind.DFL else llr_indices(state, t, problem.max_size)
        best = max(float(weights[list(s.arms)].sum()) for s in chosen)
        picked = select_strategy(state, problem, t)
        assert float(weights[list(picked.arms)].sum()) == pytest.approx(best, rel=1e-12, abs=1e-12)

    @given(st.data())
    def test_constant_shift_keeps_channel_decision(self, data):
        users = data.draw(st.integers(min_value=1, max_value=4))
        channels = data.draw(st.integers(min_value=users, max_value=users + 1))
        rows = [[1] * users for _ in range(users)]
        for i, p in combinations(range(users), 2):
            rows[i][p] = rows[p][i] = data.draw(st.integers(0, 1))
        graph = build_extended_conflict_graph(ConflictGraph.from_rows(rows, channels=channels))
        problem = MWISProblem(graph, max_size=users)
        K = users * channels
        weight = st.one_of(st.integers(1, 20).map(float), st.just(math.inf))
        w = np.asarray(data.draw(st.lists(weight, min_size=K, max_size=K)))
        c = data.draw(st.integers(0, 50))
        picked = maximize(problem, w).strategy
        assert len(picked) == users
        assert maximize(problem, w + c).strategy == picked

    def test_arm_count_mismatch(self):
        problem = ExhaustiveProblem([Strategy((0,))], num_arms=2)
        with pytest.raises(UnsupportedInstanceError):
            select_strategy(PolicyState.fresh("dfl", 3), problem, 1)

    def test_moss_has_no_arm_index(self):
        problem = ExhaustiveProblem([Strategy((0,))], num_arms=1)
        with pytest.raises(UnsupportedInstanceError):
            select_strategy(PolicyState.fresh("moss", 1), problem, 1)


def test_state_size_independent_of_feasible_set():
    K = 25
    small = ExhaustiveProblem([Strategy((k,)) for k in range(10)], num_arms=K)
    edgeless = nx.empty_graph(K)
    large = MWISProblem(edgeless)
    states = [PolicyState.fresh("dfl", K), PolicyState.fresh("dfl", K)]
    for t in range(1, 30):
        for state, problem in zip(states, (small, large)):
            strategy = select_strategy(state, problem, t)
            update_stats(state, [(arm, 0.5) for arm in strategy.arms], strategy)
    dumps = [s.to_dict() for s in states]
    assert dumps[0].keys() == dumps[1].keys()
    assert [len(d["plays"]) for d in dumps] == [K, K]
    assert [s.plays.nbytes + s.reward_sums.nbytes for s in states] == [K * 16, K * 16]
    json.dumps(dumps)
    assert all(s.plays.shape == (K,) and s.reward_sums.shape == (K,) for s in states)
    assert all(s.strategy_stats is None for s in states)


@pytest.mark.parametrize(
    "function",
    [dfl_bonus, dfl_index, llr_index, moss_index, dfl_indices, llr_indices, naive_moss_select, select_strategy,
     update_stats, PolicyState.fresh, PolicyState.arm, PolicyState.to_dict, PolicyState.empirical_means],
)
def test_public_functions_are_documented(function):
    assert function.__doc__ and function.__doc__.strip()
