"""Graph analytics: PageRank, density, components, diameter, clustering.

Traversal-based statistics (components, diameter, clustering) ignore edge
direction; PageRank follows direction on directed graphs and treats each
undirected edge as a pair of opposing arcs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import EmptyGraph, TooFewNodes
from .graph import Graph, NodeId

ScoreMap = dict[NodeId, float]


@dataclass(frozen=True)
class PageRankParams:
    damping: float = 0.85
    tolerance: float = 1e-8
    max_iterations: int = 200

    def __post_init__(self) -> None:
        if not 0 < self.damping < 1:
            raise ValueError("damping must lie in (0, 1)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass(frozen=True)
class PageRankResult:
    scores: ScoreMap
    converged: bool
    iterations: int


def pagerank(graph: Graph, params: PageRankParams | None = None) -> PageRankResult:
    """Power iteration with uniform teleport.

    Transition probability out of a node is proportional to arc weight;
    nodes without out-arcs spread their mass uniformly.  Stops once the L1
    change drops below ``params.tolerance``; if ``max_iterations`` is reached
    first, the best iterate is returned with ``converged=False``.
    """
    params = params or PageRankParams()
    n = graph.node_count
    if n == 0:
        raise EmptyGraph("pagerank requires a nonempty graph")

    index = {node.id: i for i, node in enumerate(graph.nodes)}
    sources: list[int] = []
    targets: list[int] = []
    weights: list[float] = []
    for edge in graph.edges:
        s, t = index[edge.source], index[edge.target]
        sources.append(s)
        targets.append(t)
        weights.append(edge.weight)
        if not graph.directed:
            sources.append(t)
            targets.append(s)
            weights.append(edge.weight)

    out_weight = np.zeros(n)
    np.add.at(out_weight, sources, weights)
    dangling = out_weight == 0.0

    if sources:
        norm = out_weight[sources]
        transition = sparse.csr_matrix(
            (np.asarray(weights) / norm, (targets, sources)), shape=(n, n)
        )
    else:
        transition = sparse.csr_matrix((n, n))

    damping = params.damping
    teleport = (1.0 - damping) / n
    x = np.full(n, 1.0 / n)
    converged = False
    iterations = 0
    for iterations in range(1, params.max_iterations + 1):
        dangling_mass = x[dangling].sum() / n
        x_next = teleport + damping * (transition @ x + dangling_mass)
        delta = np.abs(x_next - x).sum()
        x = x_next
        if delta < params.tolerance:
            converged = True
            break
    x = x / x.sum()

    scores = {node.id: float(x[i]) for i, node in enumerate(graph.nodes)}
    return PageRankResult(scores=scores, converged=converged, iterations=iterations)


def density(graph: Graph) -> float:
    """Edge count over possible node pairs.

    Self-loops are excluded; parallel edges are counted, so values above 1
    are possible and reported as-is.
    """
    n = graph.node_count
    if n < 2:
        raise TooFewNodes(n)
    m = sum(1 for edge in graph.edges if not edge.is_self_loop)
    pairs = n * (n - 1)
    return m / pairs if graph.directed else 2 * m / pairs


def connected_components(graph: Graph) -> list[list[NodeId]]:
    """Weakly connected components.

    Each component is sorted by node id; components are ordered by
    descending size, ties by smallest member id.
    """
    adjacency = graph.undirected_adjacency()
    seen: set[NodeId] = set()
    components: list[list[NodeId]] = []
    for node in graph.nodes:
        if node.id in seen:
            continue
        component: list[NodeId] = []
        queue = deque([node.id])
        seen.add(node.id)
        while queue:
            current = queue.popleft()
            component.append(current)
            for neighbor in adjacency[current]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
        components.append(sorted(component))
    components.sort(key=lambda c: (-len(c), c[0]))
    return components


@dataclass(frozen=True)
class DiameterResult:
    value: int
    disconnected: bool


def diameter(graph: Graph) -> DiameterResult:
    """Longest shortest path within the largest weakly connected component,
    edge direction ignored, via BFS from every node of that component."""
    if graph.node_count == 0:
        raise EmptyGraph("diameter requires a nonempty graph")
    components = connected_components(graph)
    largest = components[0]
    adjacency = graph.undirected_adjacency()
    best = 0
    for start in largest:
        distance = {start: 0}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            d = distance[current]
            for neighbor in adjacency[current]:
                if neighbor not in distance:
                    distance[neighbor] = d + 1
                    queue.append(neighbor)
        best = max(best, max(distance.values()))
    return DiameterResult(value=best, disconnected=len(components) > 1)


def clustering_coefficient(graph: Graph) -> float:
    """Average local clustering coefficient over all nodes.

    Direction ignored, parallel edges collapsed, self-loops dropped; nodes
    with fewer than two distinct neighbors contribute 0.
    """
    if graph.node_count == 0:
        raise EmptyGraph("clustering coefficient requires a nonempty graph")
    adjacency = graph.undirected_adjacency()
    total = 0.0
    for node in graph.nodes:
        neighbors = adjacency[node.id]
        k = len(neighbors)
        if k < 2:
            continue
        links = 0
        for neighbor in neighbors:
            links += len(adjacency[neighbor] & neighbors)
        links //= 2
        total += 2.0 * links / (k * (k - 1))
    return total / graph.node_count
