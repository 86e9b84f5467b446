"""Exploration state: visibility, neighbor expansion, data sheet, styling.

A :class:`ViewState` owns the mutable exploration state for one session.
Hidden nodes keep their positions and style overrides so re-showing them
restores the prior picture.  All orderings tie-break by ascending node id,
which keeps candidate lists and snapshots reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from . import layout as layout_mod
from .analytics import PageRankParams, ScoreMap, pagerank
from .errors import MissingPosition, UnknownAttribute, UnknownNode
from .graph import AttributeValue, Graph, NodeId
from .layout import LayoutParams, LayoutState

SHAPES = ("circle", "square", "triangle")

# selector strings: "pagerank", "degree", "constant", or "attribute:<name>"
SELECTOR_KINDS = ("pagerank", "degree", "constant", "attribute")


def parse_selector(selector: str) -> tuple[str, str | None]:
    if selector in ("pagerank", "degree", "constant"):
        return selector, None
    if selector.startswith("attribute:") and len(selector) > len("attribute:"):
        return "attribute", selector[len("attribute:"):]
    raise ValueError(f"invalid selector: {selector!r}")


def is_valid_color(color: str) -> bool:
    if not isinstance(color, str) or len(color) != 7 or color[0] != "#":
        return False
    try:
        int(color[1:], 16)
    except ValueError:
        return False
    return True


@dataclass
class StyleMapping:
    """Global rule mapping a node quantity onto size and color."""

    size_by: str = "pagerank"
    size_range: tuple[float, float] = (3.0, 15.0)
    color_by: str = "pagerank"
    color_scale: tuple[str, ...] = ("#9ecae1", "#08306b")
    shape: str = "circle"
    label_by: str | None = None
    label_size: float = 10.0

    def __post_init__(self) -> None:
        parse_selector(self.size_by)
        parse_selector(self.color_by)
        lo, hi = self.size_range
        if not (0 < lo <= hi):
            raise ValueError("size_range must satisfy 0 < min <= max")
        if len(self.color_scale) < 1:
            raise ValueError("color_scale needs at least one stop")
        for stop in self.color_scale:
            if not is_valid_color(stop):
                raise ValueError(f"invalid color stop: {stop!r}")
        if self.shape not in SHAPES:
            raise ValueError(f"invalid shape: {self.shape!r}")
        if self.label_by is not None:
            parse_selector(self.label_by)
        if self.label_size <= 0:
            raise ValueError("label_size must be positive")


@dataclass
class StyleOverride:
    """Per-node style; only the set fields replace the mapped style."""

    size: float | None = None
    color: str | None = None
    shape: str | None = None
    label: str | None = None

    def __post_init__(self) -> None:
        if self.size is not None and self.size <= 0:
            raise ValueError("override size must be positive")
        if self.color is not None and not is_valid_color(self.color):
            raise ValueError(f"invalid override color: {self.color!r}")
        if self.shape is not None and self.shape not in SHAPES:
            raise ValueError(f"invalid override shape: {self.shape!r}")

    def is_empty(self) -> bool:
        return (
            self.size is None
            and self.color is None
            and self.shape is None
            and self.label is None
        )


@dataclass
class ResolvedStyle:
    size: float
    color: str
    shape: str
    label: str


@dataclass
class ViewState:
    """Exploration state for one session over an immutable graph."""

    visible: set[NodeId] = field(default_factory=set)
    layout: LayoutState = field(default_factory=LayoutState)
    global_style: StyleMapping = field(default_factory=StyleMapping)
    overrides: dict[NodeId, StyleOverride] = field(default_factory=dict)
    pagerank_cache: ScoreMap | None = None


@dataclass(frozen=True)
class NeighborCandidate:
    id: NodeId
    pagerank: float
    degree: int
    attributes: dict[str, AttributeValue]
    already_visible: bool


def _ensure_pagerank(graph: Graph, view: ViewState) -> ScoreMap:
    if view.pagerank_cache is None:
        view.pagerank_cache = pagerank(graph, PageRankParams()).scores
    return view.pagerank_cache


def show(
    graph: Graph,
    view: ViewState,
    ids: Iterable[NodeId],
    params: LayoutParams | None = None,
    anchor: NodeId | None = None,
) -> ViewState:
    """Make nodes visible, seeding positions for ones never placed before.

    With ``anchor`` set (neighbor expansion), new nodes appear jittered next
    to the anchor; otherwise they get their deterministic random position.
    Already-visible ids are no-ops.
    """
    params = params or LayoutParams()
    ids = list(ids)
    for node_id in ids:
        graph.node(node_id)
    anchor_pos = None
    if anchor is not None:
        if anchor not in view.layout.positions:
            raise MissingPosition(anchor)
        anchor_pos = view.layout.positions[anchor]
    fresh: dict[NodeId, layout_mod.Position] = {}
    for node_id in ids:
        if node_id not in view.layout.positions:
            if anchor_pos is not None:
                fresh[node_id] = layout_mod.jitter_near(anchor_pos, node_id, params)
            else:
                fresh[node_id] = layout_mod.position_for(node_id, params)
    if fresh:
        view.layout = layout_mod.with_positions(view.layout, fresh)
    view.visible.update(ids)
    return view


def hide(graph: Graph, view: ViewState, ids: Iterable[NodeId]) -> ViewState:
    """Remove nodes from the visible set; positions and overrides persist."""
    ids = list(ids)
    for node_id in ids:
        graph.node(node_id)
    view.visible.difference_update(ids)
    return view


def _attribute_exists(graph: Graph, name: str) -> bool:
    return any(name in node.attributes for node in graph.nodes)


def _sort_value(
    candidate: NeighborCandidate, kind: str, name: str | None
) -> tuple[int, float | str]:
    """Orderable key for one candidate; missing values rank lowest."""
    if kind == "pagerank":
        return (1, candidate.pagerank)
    if kind == "degree":
        return (1, float(candidate.degree))
    value = candidate.attributes.get(name or "")
    if value is None:
        return (0, 0.0)
    if isinstance(value, bool):
        return (1, float(value))
    if isinstance(value, float):
        return (1, value)
    return (2, value)


def _sorted_candidates(
    graph: Graph,
    candidates: list[NeighborCandidate],
    sort_key: str,
    descending: bool,
) -> list[NeighborCandidate]:
    kind, name = parse_selector(sort_key)
    if kind == "constant":
        raise ValueError("cannot sort by the constant selector")
    if kind == "attribute" and not _attribute_exists(graph, name or ""):
        raise UnknownAttribute(name or "")
    # mixed-type keys (missing < numeric < text) cannot be compared directly,
    # so sort each type rank separately; stability keeps the id tie-break
    ordered = sorted(candidates, key=lambda c: c.id)
    ranked: dict[int, list[tuple[float | str, NeighborCandidate]]] = {0: [], 1: [], 2: []}
    for candidate in ordered:
        rank, value = _sort_value(candidate, kind, name)
        ranked[rank].append((value, candidate))
    result: list[NeighborCandidate] = []
    for rank in sorted(ranked, reverse=descending):
        bucket = ranked[rank]
        bucket.sort(key=lambda pair: pair[0], reverse=descending)
        result.extend(candidate for _, candidate in bucket)
    return result


def _candidate(
    graph: Graph, view: ViewState, node_id: NodeId, scores: ScoreMap
) -> NeighborCandidate:
    node = graph.node(node_id)
    return NeighborCandidate(
        id=node_id,
        pagerank=scores[node_id],
        degree=graph.degree(node_id),
        attributes=dict(node.attributes),
        already_visible=node_id in view.visible,
    )


def neighbor_candidates(
    graph: Graph,
    view: ViewState,
    node_id: NodeId,
    sort_key: str = "pagerank",
    descending: bool = True,
) -> list[NeighborCandidate]:
    """All neighbors of a visible node, ordered for the neighbor table.

    Visible neighbors are flagged; hidden ones are what expansion may add.
    Ties always break by ascending node id.
    """
    graph.node(node_id)
    if node_id not in view.visible:
        raise ValueError(f"node {node_id!r} is not visible")
    scores = _ensure_pagerank(graph, view)
    candidates = [
        _candidate(graph, view, neighbor, scores)
        for neighbor in graph.neighbors(node_id)
    ]
    return _sorted_candidates(graph, candidates, sort_key, descending)


def expansion_ids(
    graph: Graph,
    view: ViewState,
    node_id: NodeId,
    k: int,
    sort_key: str = "pagerank",
) -> list[NodeId]:
    """The hidden neighbors that expand() would reveal, best first."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    hidden = [
        c for c in neighbor_candidates(graph, view, node_id, sort_key, True)
        if not c.already_visible
    ]
    return [c.id for c in hidden[:k]]


def expand(
    graph: Graph,
    view: ViewState,
    node_id: NodeId,
    k: int,
    sort_key: str = "pagerank",
    params: LayoutParams | None = None,
) -> ViewState:
    """Reveal the top-k hidden neighbors of a visible node.

    Fewer than k are added when fewer are hidden.  New nodes are seeded
    next to the node they were expanded from.
    """
    ids = expansion_ids(graph, view, node_id, k, sort_key)
    return show(graph, view, ids, params=params, anchor=node_id)


def data_sheet(
    graph: Graph,
    view: ViewState,
    sort_key: str = "degree",
    descending: bool = True,
    offset: int = 0,
    limit: int | None = None,
) -> list[NeighborCandidate]:
    """One row per node of the whole graph (visible or not), sorted and
    paginated with the same total order as the neighbor table."""
    if offset < 0:
        raise ValueError("offset must be nonnegative")
    if limit is not None and limit < 0:
        raise ValueError("limit must be nonnegative")
    scores = _ensure_pagerank(graph, view)
    rows = [_candidate(graph, view, node.id, scores) for node in graph.nodes]
    rows = _sorted_candidates(graph, rows, sort_key, descending)
    end = None if limit is None else offset + limit
    return rows[offset:end]


def _numeric_quantity(
    graph: Graph, view: ViewState, node_id: NodeId, kind: str, name: str | None
) -> float | None:
    if kind == "pagerank":
        return _ensure_pagerank(graph, view)[node_id]
    if kind == "degree":
        return float(graph.degree(node_id))
    value = graph.node(node_id).attributes.get(name or "")
    if isinstance(value, bool):
        return float(value)
    if isinstance(value, float):
        return value
    return None  # missing or non-numeric: maps to the range minimum


def _observed_range(
    graph: Graph, view: ViewState, kind: str, name: str | None
) -> tuple[float, float] | None:
    values = [
        q
        for node in graph.nodes
        if (q := _numeric_quantity(graph, view, node.id, kind, name)) is not None
    ]
    if not values:
        return None
    return (min(values), max(values))


def _fraction(
    graph: Graph, view: ViewState, node_id: NodeId, selector: str
) -> float:
    """Position of the node's quantity in the observed [min, max], in [0, 1].

    Constant selectors and degenerate ranges sit at 0.5; missing values at 0.
    """
    kind, name = parse_selector(selector)
    if kind == "constant":
        return 0.5
    if kind == "attribute" and not _attribute_exists(graph, name or ""):
        raise UnknownAttribute(name or "")
    value = _numeric_quantity(graph, view, node_id, kind, name)
    if value is None:
        return 0.0
    observed = _observed_range(graph, view, kind, name)
    assert observed is not None
    lo, hi = observed
    if hi <= lo:
        return 0.5
    return (value - lo) / (hi - lo)


def interpolate_color(scale: tuple[str, ...], fraction: float) -> str:
    """Linear RGB interpolation across the ordered stops."""
    fraction = min(max(fraction, 0.0), 1.0)
    if len(scale) == 1:
        return scale[0].lower()
    t = fraction * (len(scale) - 1)
    i = min(int(math.floor(t)), len(scale) - 2)
    f = t - i
    a = [int(scale[i][j:j + 2], 16) for j in (1, 3, 5)]
    b = [int(scale[i + 1][j:j + 2], 16) for j in (1, 3, 5)]
    mixed = [round(x + (y - x) * f) for x, y in zip(a, b)]
    return "#" + "".join(f"{c:02x}" for c in mixed)


def _mapped_label(
    graph: Graph, view: ViewState, node_id: NodeId, selector: str | None
) -> str:
    if selector is None:
        return ""
    kind, name = parse_selector(selector)
    if kind == "pagerank":
        return f"{_ensure_pagerank(graph, view)[node_id]:.4g}"
    if kind == "degree":
        return str(graph.degree(node_id))
    if kind == "constant":
        return ""
    value = graph.node(node_id).attributes.get(name or "")
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:g}"
    return value


def resolve_style(graph: Graph, view: ViewState, node_id: NodeId) -> ResolvedStyle:
    """Final rendered style: the global mapping evaluated on the node, with
    any set override fields taking precedence."""
    graph.node(node_id)
    mapping = view.global_style
    lo, hi = mapping.size_range
    size = lo + _fraction(graph, view, node_id, mapping.size_by) * (hi - lo)
    color = interpolate_color(
        mapping.color_scale, _fraction(graph, view, node_id, mapping.color_by)
    )
    style = ResolvedStyle(
        size=size,
        color=color,
        shape=mapping.shape,
        label=_mapped_label(graph, view, node_id, mapping.label_by),
    )
    override = view.overrides.get(node_id)
    if override is not None:
        if override.size is not None:
            style.size = override.size
        if override.color is not None:
            style.color = override.color.lower()
        if override.shape is not None:
            style.shape = override.shape
        if override.label is not None:
            style.label = override.label
    return style
