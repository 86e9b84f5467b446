"""Independent reference implementations used to check engine results.

Everything here works on plain ids and edge tuples, never on engine types,
and uses deliberately different algorithms (dense power iteration,
union-find, Floyd-Warshall, brute-force triangle counting) so that an
agreement between engine and oracle is meaningful.
"""

from __future__ import annotations

import itertools
import math


def pagerank_power(
    node_ids: list[str],
    arcs: list[tuple[str, str, float]],
    damping: float = 0.85,
    tolerance: float = 1e-14,
    max_iterations: int = 20000,
) -> dict[str, float]:
    """Dense power iteration over explicit directed arcs.

    Callers expand undirected edges into two arcs themselves.  Dangling
    nodes spread uniformly; result normalized to sum 1.
    """
    n = len(node_ids)
    index = {node_id: i for i, node_id in enumerate(node_ids)}
    out_weight = [0.0] * n
    for source, _, weight in arcs:
        out_weight[index[source]] += weight
    x = [1.0 / n] * n
    for _ in range(max_iterations):
        nxt = [(1.0 - damping) / n] * n
        dangling = sum(x[i] for i in range(n) if out_weight[i] == 0.0)
        for i in range(n):
            nxt[i] += damping * dangling / n
        for source, target, weight in arcs:
            s, t = index[source], index[target]
            nxt[t] += damping * x[s] * weight / out_weight[s]
        delta = sum(abs(a - b) for a, b in zip(nxt, x))
        x = nxt
        if delta < tolerance:
            break
    total = sum(x)
    return {node_id: x[index[node_id]] / total for node_id in node_ids}


def undirected_arcs(
    edges: list[tuple[str, str, float]]
) -> list[tuple[str, str, float]]:
    out = []
    for source, target, weight in edges:
        out.append((source, target, weight))
        out.append((target, source, weight))
    return out


def union_find_components(
    node_ids: list[str], pairs: list[tuple[str, str]]
) -> list[list[str]]:
    """Weakly connected components via union-find, ordered like the engine:
    descending size, ties by smallest member, members sorted."""
    parent = {node_id: node_id for node_id in node_ids}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[str, list[str]] = {}
    for node_id in node_ids:
        groups.setdefault(find(node_id), []).append(node_id)
    components = [sorted(members) for members in groups.values()]
    components.sort(key=lambda c: (-len(c), c[0]))
    return components


def floyd_warshall_diameter(
    node_ids: list[str], pairs: list[tuple[str, str]]
) -> tuple[int, bool]:
    """(diameter of the largest component, disconnected flag), all-pairs."""
    n = len(node_ids)
    index = {node_id: i for i, node_id in enumerate(node_ids)}
    inf = math.inf
    dist = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for a, b in pairs:
        i, j = index[a], index[b]
        if i != j:
            dist[i][j] = dist[j][i] = 1
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    components = union_find_components(node_ids, pairs)
    largest = components[0]
    best = 0
    for a in largest:
        for b in largest:
            best = max(best, dist[index[a]][index[b]])
    return int(best), len(components) > 1


def brute_clustering(node_ids: list[str], pairs: list[tuple[str, str]]) -> float:
    """Average local clustering coefficient by brute-force triangle counting."""
    neighbors: dict[str, set[str]] = {node_id: set() for node_id in node_ids}
    for a, b in pairs:
        if a != b:
            neighbors[a].add(b)
            neighbors[b].add(a)
    total = 0.0
    for node_id in node_ids:
        near = sorted(neighbors[node_id])
        k = len(near)
        if k < 2:
            continue
        links = sum(
            1 for a, b in itertools.combinations(near, 2) if b in neighbors[a]
        )
        total += 2.0 * links / (k * (k - 1))
    return total / len(node_ids)


def naive_density(
    node_count: int, edges: list[tuple[str, str]], directed: bool
) -> float:
    m = sum(1 for a, b in edges if a != b)
    pairs = node_count * (node_count - 1)
    return m / pairs if directed else 2 * m / pairs
