"""Maximum-weight independent set: exact branch-and-bound and greedy approximation.

Both work on bitmasks over node indices 0..n-1. Only strictly positive weights
can improve a set, so nonpositive nodes never enter a solution unless every
weight is nonpositive, in which case the single best node is returned.
"""

import os
from typing import List, Optional, Sequence, Tuple

import networkx as nx

from utils.errors import InstanceTooLargeError, InvalidGraphError

DEFAULT_NODE_BUDGET = 40


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class IndependentSetSolver:
    """Precomputes neighbourhood masks and a clique partition for one graph."""

    def __init__(self, graph: nx.Graph):
        nodes = sorted(graph.nodes())
        if nodes != list(range(len(nodes))):
            raise InvalidGraphError("graph nodes must be labelled 0..n-1")
        if any(u == v for u, v in graph.edges()):
            raise InvalidGraphError("self-loops are not allowed")
        self.n = len(nodes)
        self.closed = [1 << v for v in range(self.n)]
        for u, v in graph.edges():
            self.closed[u] |= 1 << v
            self.closed[v] |= 1 << u
        self.max_degree = max((graph.degree(v) for v in nodes), default=0)
        self.beta = float(self.max_degree + 1)
        self.cliques = self._clique_partition()

    def _clique_partition(self) -> List[List[int]]:
        """Greedy partition in index order; its size bounds the independence number."""
        cliques: List[List[int]] = []
        masks: List[int] = []
        for v in range(self.n):
            for idx, members in enumerate(masks):
                if members & ~self.closed[v] == 0:
                    cliques[idx].append(v)
                    masks[idx] |= 1 << v
                    break
            else:
                cliques.append([v])
                masks.append(1 << v)
        return cliques

    def _check(self, weights: Sequence[float]) -> List[float]:
        w = [float(x) for x in weights]
        if len(w) != self.n:
            raise InvalidGraphError(f"expected {self.n} weights, got {len(w)}")
        return w

    def _positive_mask(self, w: List[float]) -> int:
        mask = 0
        for v in range(self.n):
            if w[v] > 0:
                mask |= 1 << v
        return mask

    def _fallback(self, w: List[float]) -> Tuple[Tuple[int, ...], float]:
        if self.n == 0:
            return (), 0.0
        best = max(range(self.n), key=lambda v: (w[v], -v))
        return (best,), w[best]

    def exact(self, weights: Sequence[float], node_budget: Optional[int] = None) -> Tuple[Tuple[int, ...], float]:
        """Maximum-weight independent set; lexicographically smallest among optima."""
        budget = node_budget or int(os.getenv("MWIS_NODE_BUDGET", str(DEFAULT_NODE_BUDGET)))
        if self.n > budget:
            raise InstanceTooLargeError(f"{self.n} nodes exceeds the exact MWIS budget of {budget}")
        w = self._check(weights)
        candidates = self._positive_mask(w)
        if candidates == 0:
            return self._fallback(w)

        ranked = []
        for members in self.cliques:
            positive = sorted((v for v in members if w[v] > 0), key=lambda v: (-w[v], v))
            if positive:
                ranked.append(positive)

        def bound(mask: int) -> float:
            # Heaviest surviving member of each clique; never above the plain weight sum.
            total = 0.0
            for members in ranked:
                for v in members:
                    if mask >> v & 1:
                        total += w[v]
                        break
            return total

        _, greedy_value = self.greedy(w)
        floor = greedy_value - 1e-9 * (1.0 + abs(greedy_value))
        best_value = float("-inf")
        best_set: Tuple[int, ...] = ()
        chosen: List[int] = []

        # Include-first on the lowest index visits sets in lexicographic order,
        # so the first optimum reached is the lexicographically smallest.
        def dfs(mask: int, value: float):
            nonlocal best_value, best_set
            if mask == 0:
                if value > best_value:
                    best_value, best_set = value, tuple(chosen)
                return
            upper = value + bound(mask)
            if upper < floor or upper <= best_value:
                return
            low = mask & -mask
            v = low.bit_length() - 1
            chosen.append(v)
            dfs(mask & ~self.closed[v], value + w[v])
            chosen.pop()
            dfs(mask & ~low, value)

        dfs(candidates, 0.0)
        if not best_set:
            return self.greedy(w)
        return best_set, best_value

    def greedy(self, weights: Sequence[float]) -> Tuple[Tuple[int, ...], float]:
        """Heavier of the selection greedy (max w/(d+1)) and the deletion greedy (min w/(d(d+1)))."""
        w = self._check(weights)
        candidates = self._positive_mask(w)
        if candidates == 0:
            return self._fallback(w)

        picked = []
        remaining = candidates
        while remaining:
            v = max(
                _bits(remaining),
                key=lambda u: (w[u] / _popcount(self.closed[u] & remaining), -u),
            )
            picked.append(v)
            remaining &= ~self.closed[v]
        selection = tuple(sorted(picked))

        remaining = candidates
        while True:
            degrees = {u: _popcount(self.closed[u] & remaining) - 1 for u in _bits(remaining)}
            busy = [u for u, d in degrees.items() if d > 0]
            if not busy:
                break
            v = min(busy, key=lambda u: (w[u] / (degrees[u] * (degrees[u] + 1)), u))
            remaining &= ~(1 << v)
        deletion = tuple(_bits(remaining))

        selection_value = sum(w[v] for v in selection)
        deletion_value = sum(w[v] for v in deletion)
        if deletion_value > selection_value or (deletion_value == selection_value and deletion < selection):
            return deletion, deletion_value
        return selection, selection_value


def mwis_exact(graph: nx.Graph, weights: Sequence[float]) -> Tuple[Tuple[int, ...], float]:
    return IndependentSetSolver(graph).exact(weights)


def mwis_greedy(graph: nx.Graph, weights: Sequence[float]) -> Tuple[Tuple[int, ...], float, float]:
    solver = IndependentSetSolver(graph)
    nodes, value = solver.greedy(weights)
    return nodes, value, solver.beta
