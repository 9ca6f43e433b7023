from typing import Optional, Sequence

import numpy as np

from oracle.problems import OracleProblem, OracleResult, maximize
from oracle.strategy import Strategy
from policy.indices import dfl_indices, llr_indices, moss_index
from policy.stats import PolicyKind, PolicyState
from utils.errors import NoFeasibleStrategyError, UnsupportedInstanceError


def index_vector(state: PolicyState, problem: OracleProblem, t: float) -> np.ndarray:
    """Per-arm weights of the state's index policy at round t."""
    if state.kind == PolicyKind.DFL:
        return dfl_indices(state, t, state.num_arms)
    if state.kind == PolicyKind.LLR:
        return llr_indices(state, t, problem.max_size)
    raise UnsupportedInstanceError(f"{state.kind.value} has no per-arm index")


def select_with_value(state: PolicyState, problem: OracleProblem, t: float) -> OracleResult:
    if problem.num_arms != state.num_arms:
        raise UnsupportedInstanceError(
            f"oracle has {problem.num_arms} arms but the policy tracks {state.num_arms}"
        )
    return maximize(problem, index_vector(state, problem, t))


def select_strategy(state: PolicyState, problem: OracleProblem, t: float) -> Strategy:
    """Feasible strategy with the largest index sum; cold arms are covered first."""
    return select_with_value(state, problem, t).strategy


def naive_moss_select(state: PolicyState, strategies: Sequence[Strategy], t: int,
                      n: Optional[int] = None) -> Strategy:
    """MOSS over whole strategies treated as single arms.

    Unplayed strategies go first in list order; otherwise ties keep list order.
    The horizon n defaults to the one stored on the state. `t` is accepted for
    symmetry with the other policies.
    """
    if not strategies:
        raise NoFeasibleStrategyError("naive MOSS needs a nonempty strategy list")
    horizon = n if n is not None else state.horizon
    table = state.strategy_stats if state.strategy_stats is not None else {}
    kappa = len(strategies)
    best, best_index = None, None
    for strategy in strategies:
        plays, total = table.get(strategy, (0, 0.0))
        if plays == 0:
            return strategy
        if horizon is None:
            raise UnsupportedInstanceError("naive MOSS needs the horizon n")
        value = moss_index(int(plays), total / plays, horizon, kappa)
        if best_index is None or value > best_index:
            best, best_index = strategy, value
    return best
