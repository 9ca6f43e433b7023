"""Feasible strategy sets and the per-round maximisation over them.

Weights handed to `maximize` are per-arm indices where +inf marks a cold
(never observed) arm. They are ordered in two tiers: first by the number of
cold arms a strategy covers, then by the sum of finite weights. `lift_weights`
turns that order into plain floats by giving each cold arm a weight larger than
any possible difference of finite sums, so every solver below only ever sees
finite numbers.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from oracle.mwis import IndependentSetSolver
from oracle.paths import (
    PathDirection,
    PathIndex,
    best_path,
    build_path_graph,
    enumerate_paths,
    is_path,
    max_path_length,
)
from oracle.strategy import Strategy
from oracle.subset import (
    ENUMERATION_MAX_ARMS,
    ENUMERATION_MAX_SUBSETS,
    ThresholdSubsetIndex,
    best_subset,
    subset_count,
)
from utils.errors import (
    InstanceTooLargeError,
    InvalidArmError,
    InvalidStrategyError,
    NoFeasibleStrategyError,
    UnsupportedInstanceError,
)
from utils.logger import logger


class OracleMode(str, Enum):
    EXACT = "exact"
    GREEDY = "greedy"


@dataclass(frozen=True)
class OracleResult:
    strategy: Strategy
    value: float
    beta: float


def lift_weights(weights: Sequence[float], sign: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """Finite scores realising the (cold count, finite sum) order; also returns the cold mask."""
    w = np.asarray(weights, dtype=float)
    if np.any(np.isnan(w)) or np.any(w == -np.inf):
        raise InvalidArmError("weights must be finite or +inf")
    cold = np.isposinf(w)
    finite = np.where(cold, 0.0, sign * w)
    lifted_cold = 2.0 * np.abs(finite).sum() + 1.0
    return np.where(cold, lifted_cold, finite), cold


class OracleProblem(ABC):
    """A feasible strategy set F over `num_arms` arms."""

    variant = "abstract"
    # -1 when the problem minimises its finite weights
    sign = 1.0
    beta = 1.0

    @property
    @abstractmethod
    def num_arms(self) -> int:
        ...

    @property
    @abstractmethod
    def max_size(self) -> int:
        """Largest strategy size in F (the N of the index policies)."""

    @abstractmethod
    def solve(self, scores: np.ndarray) -> Strategy:
        """Strategy maximising the sum of finite scores."""

    @abstractmethod
    def is_feasible(self, strategy: Strategy) -> bool:
        ...

    @abstractmethod
    def enumerate(self) -> List[Strategy]:
        """Every strategy in F, lexicographically sorted (desk-scale instances only)."""

    def optimum_problem(self) -> "OracleProblem":
        """Exact maximisation counterpart used for the true static optimum."""
        return self


class ExhaustiveProblem(OracleProblem):
    variant = "exhaustive"

    def __init__(self, strategies: Sequence[Strategy], num_arms: Optional[int] = None):
        if not strategies:
            raise NoFeasibleStrategyError("exhaustive strategy list is empty")
        self.strategies = [s if isinstance(s, Strategy) else Strategy.of(s) for s in strategies]
        self._num_arms = num_arms if num_arms is not None else max(s.arms[-1] for s in self.strategies) + 1
        for s in self.strategies:
            s.validate(self._num_arms)
        self.incidence = np.zeros((len(self.strategies), self._num_arms))
        for row, s in enumerate(self.strategies):
            self.incidence[row, list(s.arms)] = 1.0

    @property
    def num_arms(self) -> int:
        return self._num_arms

    @property
    def max_size(self) -> int:
        return max(len(s) for s in self.strategies)

    def solve(self, scores: np.ndarray) -> Strategy:
        values = self.incidence @ scores
        top = values.max()
        return min(s for s, v in zip(self.strategies, values) if v == top)

    def is_feasible(self, strategy: Strategy) -> bool:
        return strategy in self.strategies

    def enumerate(self) -> List[Strategy]:
        return sorted(set(self.strategies))


class ThresholdSubsetProblem(OracleProblem):
    variant = "threshold_subset"

    def __init__(self, bids: Sequence[float], threshold: float, max_arms: int):
        self.bids = np.asarray(bids, dtype=float)
        self.threshold = float(threshold)
        self.max_arms = int(max_arms)
        if self.bids.ndim != 1 or self.bids.size == 0:
            raise UnsupportedInstanceError("bids must be a nonempty list")
        if np.any(self.bids < 0):
            raise UnsupportedInstanceError("bids must be nonnegative")
        if not 1 <= self.max_arms <= self.bids.size:
            raise UnsupportedInstanceError(f"N must lie in 1..{self.bids.size}, got {self.max_arms}")

    @property
    def num_arms(self) -> int:
        return int(self.bids.size)

    @property
    def max_size(self) -> int:
        return self.max_arms

    @cached_property
    def index(self) -> Optional[ThresholdSubsetIndex]:
        if self.num_arms > ENUMERATION_MAX_ARMS or subset_count(self.num_arms, self.max_arms) > ENUMERATION_MAX_SUBSETS:
            return None
        return ThresholdSubsetIndex(self.bids, self.threshold, self.max_arms)

    def solve(self, scores: np.ndarray) -> Strategy:
        return Strategy(best_subset(scores, self.bids, self.threshold, self.max_arms, self.index))

    def is_feasible(self, strategy: Strategy) -> bool:
        if len(strategy) > self.max_arms or strategy.arms[-1] >= self.num_arms:
            return False
        return float(self.bids[list(strategy.arms)].sum()) > self.threshold

    def enumerate(self) -> List[Strategy]:
        if self.index is not None:
            return [Strategy(s) for s in self.index.subsets]
        return [
            Strategy(combo)
            for size in range(1, self.max_arms + 1)
            for combo in combinations(range(self.num_arms), size)
            if self.bids[list(combo)].sum() > self.threshold
        ]


class PathProblem(OracleProblem):
    variant = "path"

    def __init__(self, edges: Sequence[Tuple[int, int]], source: int, sink: int,
                 direction: PathDirection = PathDirection.GAIN):
        self.edges = [tuple(int(x) for x in e) for e in edges]
        self.source = source
        self.sink = sink
        self.direction = PathDirection(direction)
        self.sign = -1.0 if self.direction == PathDirection.LITERAL else 1.0
        self.graph = build_path_graph(self.edges, source, sink)

    @property
    def num_arms(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> Optional[PathIndex]:
        """Enumerated simple paths for graphs with cycles; None on a DAG or past the enumeration limit."""
        if nx.is_directed_acyclic_graph(self.graph):
            return None
        try:
            return PathIndex(self.graph)
        except UnsupportedInstanceError as exc:
            logger.warning(f"Path oracle falls back to shortest paths only: {exc}")
            return None

    @cached_property
    def max_size(self) -> int:
        return max_path_length(self.graph, self.index)

    def solve(self, scores: np.ndarray) -> Strategy:
        return best_path(self.graph, scores, self.index)

    def is_feasible(self, strategy: Strategy) -> bool:
        return is_path(self.graph, strategy)

    def enumerate(self) -> List[Strategy]:
        return enumerate_paths(self.graph)

    def optimum_problem(self) -> "OracleProblem":
        if self.direction == PathDirection.GAIN:
            return self
        return PathProblem(self.edges, self.source, self.sink, PathDirection.GAIN)


class MWISProblem(OracleProblem):
    variant = "mwis"

    def __init__(self, graph: nx.Graph, mode: OracleMode = OracleMode.EXACT, max_size: Optional[int] = None):
        self.graph = graph
        self.mode = OracleMode(mode)
        self.solver = IndependentSetSolver(graph)
        self.beta = self.solver.beta if self.mode == OracleMode.GREEDY else 1.0
        self._max_size = max_size

    @property
    def num_arms(self) -> int:
        return self.solver.n

    @cached_property
    def max_size(self) -> int:
        """Independence number via the exact solver; past its node budget, the clique-partition upper bound."""
        if self._max_size is not None:
            return self._max_size
        try:
            return len(self.solver.exact([1.0] * self.solver.n)[0])
        except InstanceTooLargeError:
            logger.warning(f"MWIS max_size falls back to the clique-partition bound on {self.solver.n} nodes")
            return len(self.solver.cliques)

    def solve(self, scores: np.ndarray) -> Strategy:
        if self.mode == OracleMode.GREEDY:
            nodes, _ = self.solver.greedy(scores)
        else:
            nodes, _ = self.solver.exact(scores)
        if not nodes:
            raise NoFeasibleStrategyError("graph has no nodes")
        return Strategy(nodes)

    def is_feasible(self, strategy: Strategy) -> bool:
        if strategy.arms[-1] >= self.num_arms:
            return False
        return all(not self.graph.has_edge(u, v) for u, v in combinations(strategy.arms, 2))

    def enumerate(self) -> List[Strategy]:
        """Maximal independent sets (maximal cliques of the complement graph)."""
        return sorted(Strategy.of(c) for c in nx.find_cliques(nx.complement(self.graph)))

    def optimum_problem(self) -> "OracleProblem":
        if self.mode == OracleMode.EXACT:
            return self
        return MWISProblem(self.graph, OracleMode.EXACT, self._max_size)


def maximize(problem: OracleProblem, weights: Sequence[float]) -> OracleResult:
    """Feasible strategy maximising the two-tier weight sum; beta is the solver's guarantee."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (problem.num_arms,):
        raise InvalidArmError(f"expected {problem.num_arms} weights, got shape {w.shape}")
    scores, cold = lift_weights(w, problem.sign)
    strategy = problem.solve(scores)
    arms = list(strategy.arms)
    value = float("inf") if cold[arms].any() else float(w[arms].sum())
    logger.log_oracle(problem.variant, strategy, value, problem.beta)
    return OracleResult(strategy=strategy, value=value, beta=problem.beta)


def is_feasible(problem: OracleProblem, strategy: Strategy) -> bool:
    return problem.is_feasible(strategy)


def enumerate_strategies(problem: OracleProblem) -> List[Strategy]:
    strategies = problem.enumerate()
    if not strategies:
        raise NoFeasibleStrategyError(f"{problem.variant} instance has no feasible strategy")
    return strategies


def check_strategy(problem: OracleProblem, strategy: Strategy) -> Strategy:
    if not problem.is_feasible(strategy):
        raise InvalidStrategyError(f"{strategy} is not feasible for the {problem.variant} instance")
    return strategy
