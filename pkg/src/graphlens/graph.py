"""Immutable in-memory graph with attributes, degrees, and neighbor queries.

A :class:`Graph` is built once from node and edge sequences and never mutated
afterwards; exploration state (visibility, positions, styling) lives outside
it.  Node ids are opaque non-empty strings.  Parallel edges are preserved and
self-loops are permitted.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

from .errors import (
    DanglingEndpoint,
    DuplicateNodeId,
    InvalidAttributeValue,
    UnknownNode,
)

NodeId = str
AttributeValue = float | str | bool
DegreeMode = Literal["in", "out", "total"]


def check_attribute_value(name: str, value: object) -> AttributeValue:
    """Normalize a raw attribute value, rejecting non-scalars and non-finite
    numbers.  Ints are widened to float; bools stay bools."""
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)):
        value = float(value)
        if not math.isfinite(value):
            raise InvalidAttributeValue(
                f"attribute {name!r} must be finite, got {value!r}"
            )
        return value
    if isinstance(value, str):
        return value
    raise InvalidAttributeValue(
        f"attribute {name!r} must be a number, text, or boolean, "
        f"got {type(value).__name__}"
    )


@dataclass(frozen=True)
class Node:
    id: NodeId
    attributes: dict[str, AttributeValue] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise InvalidAttributeValue("node id must be a non-empty string")
        normalized = {
            name: check_attribute_value(name, value)
            for name, value in self.attributes.items()
        }
        object.__setattr__(self, "attributes", normalized)


@dataclass(frozen=True)
class Edge:
    source: NodeId
    target: NodeId
    weight: float = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.source, str) or not self.source:
            raise InvalidAttributeValue("edge source must be a non-empty string")
        if not isinstance(self.target, str) or not self.target:
            raise InvalidAttributeValue("edge target must be a non-empty string")
        weight = float(self.weight)
        if not math.isfinite(weight) or weight <= 0:
            raise InvalidAttributeValue(
                f"edge weight must be finite and positive, got {self.weight!r}"
            )
        object.__setattr__(self, "weight", weight)

    @property
    def is_self_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True, eq=False)
class Graph:
    """Validated node/edge store with an adjacency index.

    Use :func:`build_graph`; constructing directly skips validation.
    Equality is structural: same directedness, same id-to-attributes map,
    and the same edge multiset (endpoint order ignored when undirected).
    """

    directed: bool
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    _node_index: dict[NodeId, int] = field(repr=False)
    _incident: dict[NodeId, tuple[int, ...]] = field(repr=False)

    def _edge_key(self, edge: Edge) -> tuple[NodeId, NodeId, float]:
        if self.directed or edge.source <= edge.target:
            return (edge.source, edge.target, edge.weight)
        return (edge.target, edge.source, edge.weight)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if self.directed != other.directed:
            return False
        if {n.id: n.attributes for n in self.nodes} != {
            n.id: n.attributes for n in other.nodes
        }:
            return False
        return Counter(map(self._edge_key, self.edges)) == Counter(
            map(other._edge_key, other.edges)
        )

    # -- basic queries ------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def node_ids(self) -> list[NodeId]:
        return [node.id for node in self.nodes]

    def has_node(self, node_id: NodeId) -> bool:
        return node_id in self._node_index

    def node(self, node_id: NodeId) -> Node:
        try:
            return self.nodes[self._node_index[node_id]]
        except KeyError:
            raise UnknownNode(node_id) from None

    def incident_edges(self, node_id: NodeId) -> list[Edge]:
        self.node(node_id)
        return [self.edges[i] for i in self._incident.get(node_id, ())]

    # -- contract operations ------------------------------------------------

    def degree(self, node_id: NodeId, mode: DegreeMode = "total") -> int:
        """Count of incident edge endpoints.

        Undirected graphs return the same value for all modes, with a
        self-loop counting 2.  Directed graphs count a self-loop once for
        ``in``, once for ``out``, twice for ``total``.
        """
        self.node(node_id)
        if mode not in ("in", "out", "total"):
            raise ValueError(f"invalid degree mode: {mode!r}")
        count = 0
        for i in self._incident.get(node_id, ()):
            edge = self.edges[i]
            if not self.directed:
                count += 2 if edge.is_self_loop else 1
            else:
                at_source = edge.source == node_id
                at_target = edge.target == node_id
                if mode in ("out", "total") and at_source:
                    count += 1
                if mode in ("in", "total") and at_target:
                    count += 1
        return count

    def neighbors(self, node_id: NodeId) -> set[NodeId]:
        """All adjacent node ids, ignoring edge direction.

        Excludes the node itself unless it carries a self-loop.
        """
        self.node(node_id)
        result: set[NodeId] = set()
        for i in self._incident.get(node_id, ()):
            edge = self.edges[i]
            if edge.is_self_loop:
                result.add(node_id)
            elif edge.source == node_id:
                result.add(edge.target)
            else:
                result.add(edge.source)
        return result

    def induced_edges(self, visible: Iterable[NodeId]) -> list[Edge]:
        """Edges whose both endpoints are in ``visible``, in edge order."""
        visible = set(visible)
        for node_id in visible:
            self.node(node_id)
        return [
            edge
            for edge in self.edges
            if edge.source in visible and edge.target in visible
        ]

    def undirected_adjacency(self) -> dict[NodeId, set[NodeId]]:
        """Neighbor sets ignoring direction, parallel edges collapsed and
        self-loops dropped.  Shared by traversal-based analytics."""
        adjacency: dict[NodeId, set[NodeId]] = {node.id: set() for node in self.nodes}
        for edge in self.edges:
            if edge.is_self_loop:
                continue
            adjacency[edge.source].add(edge.target)
            adjacency[edge.target].add(edge.source)
        return adjacency


def build_graph(
    nodes: Sequence[Node | NodeId | Mapping[str, object]],
    edges: Sequence[Edge | tuple],
    directed: bool = False,
) -> Graph:
    """Validate and index a graph.

    Nodes may be given as :class:`Node`, bare id strings, or
    ``{"id": ..., "attributes": ...}`` mappings; edges as :class:`Edge` or
    ``(source, target[, weight])`` tuples.  Rejects duplicate node ids and
    edges whose endpoints are not among the nodes.
    """
    node_objs: list[Node] = []
    for item in nodes:
        if isinstance(item, Node):
            node_objs.append(item)
        elif isinstance(item, str):
            node_objs.append(Node(item))
        else:
            node_objs.append(
                Node(str(item["id"]), dict(item.get("attributes", {})))  # type: ignore[index]
            )

    edge_objs: list[Edge] = []
    for item in edges:
        if isinstance(item, Edge):
            edge_objs.append(item)
        else:
            edge_objs.append(Edge(*item))

    node_index: dict[NodeId, int] = {}
    for position, node in enumerate(node_objs):
        if node.id in node_index:
            raise DuplicateNodeId(node.id)
        node_index[node.id] = position

    incident: dict[NodeId, list[int]] = {node.id: [] for node in node_objs}
    for position, edge in enumerate(edge_objs):
        for endpoint in (edge.source, edge.target):
            if endpoint not in node_index:
                raise DanglingEndpoint(position, endpoint)
        incident[edge.source].append(position)
        if not edge.is_self_loop:
            incident[edge.target].append(position)

    return Graph(
        directed=directed,
        nodes=tuple(node_objs),
        edges=tuple(edge_objs),
        _node_index=node_index,
        _incident={node_id: tuple(ix) for node_id, ix in incident.items()},
    )
