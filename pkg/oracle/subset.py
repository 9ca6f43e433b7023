"""Subset selection under a bid threshold: at most N arms with sum of bids strictly above h."""

import math
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from oracle.strategy import Strategy
from utils.errors import NoFeasibleStrategyError, UnsupportedInstanceError

ENUMERATION_MAX_ARMS = 25
ENUMERATION_MAX_SUBSETS = 500_000
DP_MAX_BUCKETS = 1000
DP_INTEGRAL_MAX_BUCKETS = 20_000


def subset_count(num_arms: int, max_arms: int) -> int:
    return sum(math.comb(num_arms, size) for size in range(1, max_arms + 1))


class ThresholdSubsetIndex:
    """Every feasible subset in lexicographic order with its incidence row.

    Built once per instance; each query is then one matrix-vector product.
    """

    def __init__(self, bids: Sequence[float], threshold: float, max_arms: int):
        self.bids = np.asarray(bids, dtype=float)
        subsets = sorted(
            combo
            for size in range(1, max_arms + 1)
            for combo in combinations(range(len(self.bids)), size)
            if self.bids[list(combo)].sum() > threshold
        )
        self.subsets: List[Tuple[int, ...]] = subsets
        self.incidence = np.zeros((len(subsets), len(self.bids)))
        for row, combo in enumerate(subsets):
            self.incidence[row, list(combo)] = 1.0

    def best(self, weights: np.ndarray) -> Tuple[int, ...]:
        if not self.subsets:
            raise NoFeasibleStrategyError("no subset clears the bid threshold")
        values = self.incidence @ weights
        # argmax returns the first maximum, i.e. the lexicographically smallest subset
        return self.subsets[int(np.argmax(values))]


def _branch_and_bound_best(weights: np.ndarray, bids: np.ndarray, threshold: float,
                           max_arms: int) -> Tuple[int, ...]:
    """Exact search over subsets in lexicographic (include-first) order.

    A branch is cut when even its best possible completion cannot beat the
    incumbent or cannot clear the threshold. Candidates are met in lexicographic
    order, so only strict improvements replace the incumbent.
    """
    num_arms = len(bids)
    # top[i][r]: sum of the r largest entries among arms i.., for both bounds
    top_weight = np.zeros((num_arms + 1, max_arms + 1))
    top_bid = np.zeros((num_arms + 1, max_arms + 1))
    for start in range(num_arms):
        for table, values in ((top_weight, np.clip(weights[start:], 0.0, None)), (top_bid, bids[start:])):
            ranked = np.concatenate(([0.0], np.cumsum(np.sort(values)[::-1])))
            table[start] = ranked[np.minimum(np.arange(max_arms + 1), len(values))]

    best_value, best_subset = -math.inf, None

    def visit(start: int, value: float, total: float, chosen: Tuple[int, ...]):
        nonlocal best_value, best_subset
        remaining = max_arms - len(chosen)
        for arm in range(start, num_arms):
            if value + top_weight[arm][remaining] <= best_value:
                return
            if total + top_bid[arm][remaining] <= threshold:
                return
            grown_value, grown_total = value + float(weights[arm]), total + float(bids[arm])
            grown = chosen + (arm,)
            if grown_total > threshold and grown_value > best_value:
                best_value, best_subset = grown_value, grown
            if remaining > 1:
                visit(arm + 1, grown_value, grown_total, grown)

    visit(0, 0.0, 0.0, ())
    if best_subset is None:
        raise NoFeasibleStrategyError("no subset clears the bid threshold")
    return best_subset


def _dp_best(weights: np.ndarray, bids: np.ndarray, threshold: float, max_arms: int,
             resolution: Optional[float] = None) -> Tuple[int, ...]:
    """Knapsack-style DP over (count, bid bucket) for instances too large to search.

    Bids are rounded down to multiples of `resolution` and bucket sums are capped
    at the first bucket that clears the threshold. Each entry also carries its
    real bid sum, and only entries whose real sum clears the threshold are
    returned, so the result is always feasible. Integral bids use resolution 1
    and the DP is exact; otherwise a subset clearing the threshold by less than
    N * resolution can be missed.
    """
    if resolution is None:
        integral = bool(np.all(bids == np.floor(bids)))
        if integral and abs(threshold) <= DP_INTEGRAL_MAX_BUCKETS:
            resolution = 1.0
        else:
            resolution = max(abs(threshold), 1.0) / DP_MAX_BUCKETS
    buckets = [int(math.floor(b / resolution)) for b in bids]
    cap = max(0, math.floor(threshold / resolution) + 1)

    states: Dict[Tuple[int, int], Tuple[float, Tuple[int, ...], float]] = {(0, 0): (0.0, (), 0.0)}
    for arm, (weight, bucket) in enumerate(zip(weights, buckets)):
        updated = dict(states)
        for (count, total), (value, chosen, real) in states.items():
            if count == max_arms:
                continue
            key = (count + 1, min(cap, total + bucket))
            candidate = (value + float(weight), chosen + (arm,), real + float(bids[arm]))
            current = updated.get(key)
            if current is None or candidate[0] > current[0] or (
                candidate[0] == current[0] and candidate[1] < current[1]
            ):
                updated[key] = candidate
        states = updated

    feasible = [
        (value, chosen) for (count, _), (value, chosen, real) in states.items()
        if count >= 1 and real > threshold
    ]
    if not feasible:
        raise NoFeasibleStrategyError("no subset clears the bid threshold")
    best_value = max(value for value, _ in feasible)
    return min(chosen for value, chosen in feasible if value == best_value)


def best_subset(weights: np.ndarray, bids: np.ndarray, threshold: float, max_arms: int,
                index: Optional[ThresholdSubsetIndex] = None) -> Tuple[int, ...]:
    """Cached enumeration when given, exact search up to ENUMERATION_MAX_ARMS arms, DP beyond."""
    if index is not None:
        return index.best(weights)
    if len(bids) <= ENUMERATION_MAX_ARMS:
        return _branch_and_bound_best(weights, bids, threshold, max_arms)
    return _dp_best(weights, bids, threshold, max_arms)


def threshold_subset_max(weights: Sequence[float], bids: Sequence[float], h: float, N: int,
                         index: Optional[ThresholdSubsetIndex] = None) -> Strategy:
    """Maximise the weight sum over subsets of at most N arms with sum of bids > h."""
    w = np.asarray(weights, dtype=float)
    b = np.asarray(bids, dtype=float)
    if w.shape != b.shape:
        raise UnsupportedInstanceError("weights and bids must have the same length")
    if not 1 <= N <= len(b):
        raise UnsupportedInstanceError(f"N must lie in 1..{len(b)}, got {N}")

    if index is None and len(b) <= ENUMERATION_MAX_ARMS and subset_count(len(b), N) <= ENUMERATION_MAX_SUBSETS:
        index = ThresholdSubsetIndex(b, h, N)
    return Strategy(best_subset(w, b, h, N, index))
