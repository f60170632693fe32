"""Follow graph and LeaderRank centrality."""

from __future__ import annotations

import logging
from functools import cached_property
from typing import Iterable

import networkx as nx
import numpy as np
import scipy.sparse as sp

from core.config import LEADERRANK_MAX_ITER, LEADERRANK_TOL
from core.model import UserRecord

logger = logging.getLogger(__name__)


class FollowGraph:
    """Directed follower -> followee adjacency over the corpus users."""

    def __init__(self, graph: nx.DiGraph) -> None:
        if any(u == v for u, v in graph.edges):
            raise ValueError("follow graph must not contain self-loops")
        self.graph = graph

    @classmethod
    def from_users(cls, users: Iterable[UserRecord]) -> "FollowGraph":
        users = list(users)
        known = {u.user_id for u in users}
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(known))
        for user in users:
            for followee in sorted(user.following):
                if followee in known and followee != user.user_id:
                    graph.add_edge(user.user_id, followee)
        return cls(graph)

    def __contains__(self, user_id: object) -> bool:
        return user_id in self.graph

    def follows(self, follower: str, followee: str) -> bool:
        return self.graph.has_edge(follower, followee)

    def followers(self, user_id: str) -> set[str]:
        if user_id not in self.graph:
            return set()
        return set(self.graph.predecessors(user_id))

    @cached_property
    def leaderrank_scores(self) -> dict[str, float]:
        return leaderrank(self.graph)


def leaderrank(graph: nx.DiGraph) -> dict[str, float]:
    """LeaderRank scores; they sum to the node count.

    A ground node is linked in both directions to every user and score flows
    along follow edges (follower to followee). Iteration stops when the L1
    change drops below the tolerance, then the ground node's score is shared
    equally among users.
    """
    nodes = sorted(graph.nodes)
    n = len(nodes)
    if n == 0:
        raise ValueError("leaderrank needs a graph with at least one node")
    if graph.number_of_edges() == 0:
        return {node: 1.0 for node in nodes}

    adjacency = nx.to_scipy_sparse_array(graph, nodelist=nodes, format="csr", dtype=np.float64)
    adjacency.data[:] = 1.0
    ground_col = sp.csr_array(np.ones((n, 1)))
    ground_row = sp.csr_array(np.ones((1, n)))
    augmented = sp.block_array([[adjacency, ground_col], [ground_row, None]], format="csr")
    out_degree = np.asarray(augmented.sum(axis=1)).ravel()
    transition = sp.diags_array(1.0 / out_degree) @ augmented
    flow = transition.T.tocsr()

    scores = np.ones(n + 1, dtype=np.float64)
    scores[n] = 0.0
    for iteration in range(1, LEADERRANK_MAX_ITER + 1):
        updated = flow @ scores
        change = float(np.abs(updated - scores).sum())
        scores = updated
        if change < LEADERRANK_TOL:
            logger.debug("leaderrank converged after %d iterations", iteration)
            break
    else:
        logger.warning("leaderrank stopped after %d iterations without converging", LEADERRANK_MAX_ITER)

    final = scores[:n] + scores[n] / n
    return {node: float(final[i]) for i, node in enumerate(nodes)}
