"""Source-sink path selection over edge indices.

Edges are arms: edge k is stored in a MultiDiGraph under key k, so parallel
edges stay distinct. Directed acyclic instances are solved exactly for any
score sign by dynamic programming in topological order. On graphs with cycles,
nonpositive scores reduce to a nonnegative-cost shortest path; any other score
vector is solved over the enumerated simple paths, up to PATH_ENUMERATION_MAX.
"""

from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from oracle.strategy import Strategy
from utils.errors import InvalidGraphError, NoFeasibleStrategyError, UnsupportedInstanceError

PATH_ENUMERATION_MAX = 100_000


class PathDirection(str, Enum):
    # minimise the sum of delay indices, as the path algorithm is literally written
    LITERAL = "literal"
    # maximise the sum of gain indices (gain = 1 - delay), consistent with the index policy
    GAIN = "gain"


def build_path_graph(edges: Iterable[Tuple[int, int]], source: int, sink: int) -> nx.MultiDiGraph:
    graph = nx.MultiDiGraph(source=source, sink=sink)
    for key, (u, v) in enumerate(edges):
        if u == v:
            raise InvalidGraphError(f"edge {key} is a self-loop at node {u}")
        graph.add_edge(u, v, key=key)
    if source not in graph or sink not in graph or not nx.has_path(graph, source, sink):
        raise NoFeasibleStrategyError(f"no path from {source} to {sink}")
    return graph


class PathIndex:
    """Every simple source-sink path in lexicographic order with its incidence row."""

    def __init__(self, graph: nx.MultiDiGraph, limit: int = None):
        self.paths = enumerate_paths(graph, limit=PATH_ENUMERATION_MAX if limit is None else limit)
        self.incidence = np.zeros((len(self.paths), graph.number_of_edges()))
        for row, path in enumerate(self.paths):
            self.incidence[row, list(path.arms)] = 1.0

    @property
    def longest(self) -> int:
        return max(len(path) for path in self.paths)

    def best(self, scores: np.ndarray) -> Strategy:
        # first maximum is the lexicographically smallest path
        return self.paths[int(np.argmax(self.incidence @ scores))]


def _best_on_dag(graph: nx.MultiDiGraph, scores: np.ndarray) -> Tuple[int, ...]:
    source, sink = graph.graph["source"], graph.graph["sink"]
    best = {source: (0.0, ())}
    for u in nx.lexicographical_topological_sort(graph):
        if u not in best:
            continue
        value, path = best[u]
        for _, v, key in sorted(graph.out_edges(u, keys=True)):
            candidate = (value + float(scores[key]), tuple(sorted(path + (key,))))
            current = best.get(v)
            if current is None or candidate[0] > current[0] or (
                candidate[0] == current[0] and candidate[1] < current[1]
            ):
                best[v] = candidate
    if sink not in best:
        raise NoFeasibleStrategyError(f"no path from {source} to {sink}")
    return best[sink][1]


def _cheapest_path(graph: nx.MultiDiGraph, costs: np.ndarray) -> Tuple[int, ...]:
    source, sink = graph.graph["source"], graph.graph["sink"]

    def cheapest(u, v, parallel):
        return min(costs[key] for key in parallel)

    nodes = nx.dijkstra_path(graph, source, sink, weight=cheapest)
    chosen = []
    for u, v in zip(nodes, nodes[1:]):
        chosen.append(min(graph[u][v], key=lambda key: (costs[key], key)))
    return tuple(sorted(chosen))


def best_path(graph: nx.MultiDiGraph, scores: Sequence[float], index: Optional[PathIndex] = None) -> Strategy:
    """Path maximising the sum of finite per-edge scores.

    With cycles, a given index is always used; without one, nonpositive scores
    go to Dijkstra and anything else builds an index on the spot.
    """
    values = np.asarray(scores, dtype=float)
    if values.shape != (graph.number_of_edges(),):
        raise InvalidGraphError(f"expected {graph.number_of_edges()} edge scores, got {values.shape}")
    if nx.is_directed_acyclic_graph(graph):
        return Strategy(_best_on_dag(graph, values))
    if index is None and not np.any(values > 0):
        return Strategy(_cheapest_path(graph, -values))
    if index is None:
        index = PathIndex(graph)
    return index.best(values)


def shortest_path_select(graph: nx.MultiDiGraph, index_per_edge: Sequence[float],
                         direction: PathDirection = PathDirection.GAIN) -> Strategy:
    """LITERAL minimises the summed indices; GAIN maximises them."""
    indices = np.asarray(index_per_edge, dtype=float)
    if PathDirection(direction) == PathDirection.LITERAL:
        return best_path(graph, -indices)
    return best_path(graph, indices)


def is_path(graph: nx.MultiDiGraph, strategy: Strategy) -> bool:
    """True when the strategy's edges form one simple source-sink path."""
    by_key = {key: (u, v) for u, v, key in graph.edges(keys=True)}
    if any(key not in by_key for key in strategy):
        return False
    remaining = {by_key[key] + (key,) for key in strategy}
    node, visited = graph.graph["source"], {graph.graph["source"]}
    while node != graph.graph["sink"]:
        leaving = [edge for edge in remaining if edge[0] == node]
        if len(leaving) != 1:
            return False
        remaining.discard(leaving[0])
        node = leaving[0][1]
        if node in visited:
            return False
        visited.add(node)
    return not remaining


def enumerate_paths(graph: nx.MultiDiGraph, limit: Optional[int] = None) -> List[Strategy]:
    source, sink = graph.graph["source"], graph.graph["sink"]
    found = set()
    for path in nx.all_simple_edge_paths(graph, source, sink):
        found.add(Strategy.of(key for _, _, key in path))
        if limit is not None and len(found) > limit:
            raise UnsupportedInstanceError(f"more than {limit} simple paths from {source} to {sink}")
    return sorted(found)


def max_path_length(graph: nx.MultiDiGraph, index: Optional[PathIndex] = None) -> int:
    """Edges on the longest source-sink path (node count - 1 bound for cyclic graphs with no index)."""
    if nx.is_directed_acyclic_graph(graph):
        return len(_best_on_dag(graph, np.ones(graph.number_of_edges())))
    if index is not None:
        return index.longest
    return max(1, graph.number_of_nodes() - 1)
