"""Conflict graphs for dynamic channel access and their extended form.

User i on channel j becomes virtual node i*M + j. A user's channels form a
clique (one channel per user), and two conflicting users may not share a
channel, so channel allocations are exactly the independent sets of the
extended graph.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import networkx as nx
import numpy as np

from utils.errors import InvalidGraphError


@dataclass(frozen=True)
class ConflictGraph:
    users: int
    channels: int
    adjacency: Tuple[Tuple[bool, ...], ...]

    def __post_init__(self):
        if self.users < 1 or self.channels < 1:
            raise InvalidGraphError("need at least one user and one channel")
        matrix = np.asarray(self.adjacency, dtype=bool)
        if matrix.shape != (self.users, self.users):
            raise InvalidGraphError(
                f"adjacency must be {self.users}x{self.users}, got {matrix.shape}"
            )
        if not np.array_equal(matrix, matrix.T):
            raise InvalidGraphError("conflict matrix is not symmetric")
        if not matrix.diagonal().all():
            raise InvalidGraphError("every user must conflict with itself (diagonal of ones)")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], channels: int) -> "ConflictGraph":
        """Build from 0/1 row lists as written in config files."""
        adjacency = tuple(tuple(bool(v) for v in row) for row in rows)
        return cls(users=len(adjacency), channels=channels, adjacency=adjacency)

    def conflict_pairs(self):
        """Off-diagonal conflicting user pairs (i < p)."""
        return [
            (i, p)
            for i in range(self.users)
            for p in range(i + 1, self.users)
            if self.adjacency[i][p]
        ]

    def node(self, user: int, channel: int) -> int:
        return user * self.channels + channel

    def user_channel(self, node: int) -> Tuple[int, int]:
        return divmod(node, self.channels)


def build_extended_conflict_graph(g: ConflictGraph) -> nx.Graph:
    """Extended conflict graph H over K = N*M nodes."""
    h = nx.Graph()
    h.add_nodes_from(range(g.users * g.channels))
    for i in range(g.users):
        for j in range(g.channels):
            for k in range(j + 1, g.channels):
                h.add_edge(g.node(i, j), g.node(i, k))
    for i, p in g.conflict_pairs():
        for j in range(g.channels):
            h.add_edge(g.node(i, j), g.node(p, j))
    return h


def allocation_is_valid(g: ConflictGraph, nodes) -> bool:
    """At most one channel per user and no two conflicting users on one channel."""
    chosen = [g.user_channel(v) for v in nodes]
    users = [u for u, _ in chosen]
    if len(set(users)) != len(users):
        return False
    for a in range(len(chosen)):
        for b in range(a + 1, len(chosen)):
            (u1, c1), (u2, c2) = chosen[a], chosen[b]
            if c1 == c2 and g.adjacency[u1][u2]:
                return False
    return True
