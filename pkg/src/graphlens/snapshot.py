"""Versioned JSON snapshot codec: a full graph plus its exploration state.

A snapshot is the unit of saving and sharing.  Encoding is deterministic,
byte for byte: object keys appear in a fixed documented order, node and
edge arrays keep graph order, id collections are sorted, and floats use
the shortest representation that round-trips.  Decoding validates strictly
but ignores unknown fields, so documents written by newer versions with
additive fields stay readable.

Document layout (version 1)::

    {"version": 1,
     "metadata": {"name", "created", "generator"},
     "graph": {"directed", "nodes": [{"id", "attributes"}],
               "edges": [{"source", "target", "weight"}]},
     "view": {"visible", "positions", "pinned", "overrides", "global_style"}}
"""

from __future__ import annotations

import json
import math
import re
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import NamedTuple

from .errors import (
    DanglingReference,
    InconsistentView,
    JsonError,
    SchemaError,
    SnapshotError,
    UnsupportedVersion,
)
from .explore import SHAPES, StyleMapping, StyleOverride, ViewState, parse_selector
from .graph import Graph, NodeId, build_graph
from .layout import LayoutParams, LayoutState

SNAPSHOT_VERSION = 1
GENERATOR = "graphlens"

_UUID4 = re.compile(
    r"^[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12}$"
)


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _is_utc_iso(text: str) -> bool:
    candidate = text[:-1] + "+00:00" if text.endswith("Z") else text
    try:
        parsed = datetime.fromisoformat(candidate)
    except ValueError:
        return False
    offset = parsed.utcoffset()
    return offset is not None and offset.total_seconds() == 0


@dataclass(frozen=True)
class SnapshotMetadata:
    name: str = ""
    created: str = ""
    generator: str = GENERATOR

    def __post_init__(self) -> None:
        if not self.created:
            object.__setattr__(self, "created", utc_now_iso())
        if not _is_utc_iso(self.created):
            raise ValueError(
                f"created must be an ISO-8601 UTC timestamp, got {self.created!r}"
            )


class Snapshot(NamedTuple):
    graph: Graph
    view: ViewState
    metadata: SnapshotMetadata


# -- snapshot ids and URL fragments --------------------------------------


def is_snapshot_id(text: object) -> bool:
    """True for a canonical lowercase hyphenated UUIDv4."""
    return isinstance(text, str) and _UUID4.match(text) is not None


def new_snapshot_id() -> str:
    return str(uuid.uuid4())


def fragment_for(snapshot_id: str) -> str:
    if not is_snapshot_id(snapshot_id):
        raise ValueError(f"not a snapshot id: {snapshot_id!r}")
    return f"#{snapshot_id}"


def id_from_fragment(fragment: str) -> str | None:
    """Extract the snapshot id from a URL fragment, or None if it is not one."""
    candidate = fragment[1:] if fragment.startswith("#") else fragment
    return candidate if is_snapshot_id(candidate) else None


# -- encoding -------------------------------------------------------------


def _check_consistency(graph: Graph, view: ViewState) -> None:
    for node_id in view.visible:
        if not graph.has_node(node_id):
            raise InconsistentView(f"visible node {node_id!r} is not in the graph")
        if node_id not in view.layout.positions:
            raise InconsistentView(f"visible node {node_id!r} has no position")
    for node_id, (x, y) in view.layout.positions.items():
        if not graph.has_node(node_id):
            raise InconsistentView(f"position for unknown node {node_id!r}")
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InconsistentView(f"non-finite position for node {node_id!r}")
    for node_id in view.layout.pinned:
        if node_id not in view.layout.positions:
            raise InconsistentView(f"pinned node {node_id!r} has no position")
    for node_id in view.overrides:
        if not graph.has_node(node_id):
            raise InconsistentView(f"override for unknown node {node_id!r}")


def _override_object(override: StyleOverride) -> dict:
    out: dict[str, object] = {}
    if override.size is not None:
        out["size"] = float(override.size)
    if override.color is not None:
        out["color"] = override.color
    if override.shape is not None:
        out["shape"] = override.shape
    if override.label is not None:
        out["label"] = override.label
    return out


def _style_object(style: StyleMapping) -> dict:
    return {
        "size_by": style.size_by,
        "size_range": [float(style.size_range[0]), float(style.size_range[1])],
        "color_by": style.color_by,
        "color_scale": list(style.color_scale),
        "shape": style.shape,
        "label_by": style.label_by,
        "label_size": float(style.label_size),
    }


def encode(
    graph: Graph, view: ViewState, metadata: SnapshotMetadata | None = None
) -> bytes:
    """Serialize to canonical UTF-8 JSON bytes.

    Positions and overrides of hidden nodes are included, preserving the
    hide/re-show retention contract across a save/load cycle.  With no
    metadata given, the snapshot is stamped with the current time, so pass
    explicit metadata when byte-identical output matters.
    """
    _check_consistency(graph, view)
    metadata = metadata or SnapshotMetadata()
    document = {
        "version": SNAPSHOT_VERSION,
        "metadata": {
            "name": metadata.name,
            "created": metadata.created,
            "generator": metadata.generator,
        },
        "graph": {
            "directed": graph.directed,
            "nodes": [
                {
                    "id": node.id,
                    "attributes": {
                        key: node.attributes[key] for key in sorted(node.attributes)
                    },
                }
                for node in graph.nodes
            ],
            "edges": [
                {"source": e.source, "target": e.target, "weight": e.weight}
                for e in graph.edges
            ],
        },
        "view": {
            "visible": sorted(view.visible),
            "positions": {
                node_id: [float(x), float(y)]
                for node_id, (x, y) in sorted(view.layout.positions.items())
            },
            "pinned": sorted(view.layout.pinned),
            "overrides": {
                node_id: _override_object(view.overrides[node_id])
                for node_id in sorted(view.overrides)
                if not view.overrides[node_id].is_empty()
            },
            "global_style": _style_object(view.global_style),
        },
    }
    return json.dumps(
        document, ensure_ascii=False, separators=(",", ":"), allow_nan=False
    ).encode("utf-8")


# -- validation and decoding ----------------------------------------------


def _is_number(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _finite_number(value: object) -> bool:
    return _is_number(value) and math.isfinite(float(value))


_COLOR = re.compile(r"^#[0-9a-fA-F]{6}$")


def _valid_selector(value: object) -> bool:
    if not isinstance(value, str):
        return False
    try:
        parse_selector(value)
    except ValueError:
        return False
    return True


class _Checker:
    """Walks a parsed document collecting every structural error.

    decode raises the first collected error; validate returns them all.
    The two therefore accept exactly the same documents.
    """

    def __init__(self, document: object):
        self.document = document
        self.errors: list[SnapshotError] = []
        self.node_ids: set[NodeId] = set()

    def fail(self, error: SnapshotError) -> None:
        self.errors.append(error)

    def require(
        self, obj: dict, path: str, key: str, expected: str, allow_null: bool = False
    ) -> object | None:
        full = f"{path}.{key}" if path else key
        if key not in obj:
            self.fail(SchemaError(full, "missing required field"))
            return None
        value = obj[key]
        if value is None and not allow_null:
            # JSON null is not absence: every later check guards on
            # `is not None`, so null must be rejected here or it sails
            # through validation and explodes in decode.
            self.fail(SchemaError(full, f"expected {expected}"))
        return value

    def check(self) -> list[SnapshotError]:
        doc = self.document
        if not isinstance(doc, dict):
            self.fail(SchemaError("$", "expected a JSON object"))
            return self.errors
        version = self.require(doc, "", "version", "an integer")
        if version is not None:
            if not isinstance(version, int) or isinstance(version, bool):
                self.fail(SchemaError("version", "expected an integer"))
            elif version != SNAPSHOT_VERSION:
                self.fail(UnsupportedVersion(version))
        self._metadata(doc)
        self._graph(doc)
        self._view(doc)
        return self.errors

    def _metadata(self, doc: dict) -> None:
        metadata = self.require(doc, "", "metadata", "an object")
        if metadata is None:
            return
        if not isinstance(metadata, dict):
            self.fail(SchemaError("metadata", "expected an object"))
            return
        for key in ("name", "created", "generator"):
            value = self.require(metadata, "metadata", key, "a string")
            if value is not None and not isinstance(value, str):
                self.fail(SchemaError(f"metadata.{key}", "expected a string"))
        created = metadata.get("created")
        if isinstance(created, str) and not _is_utc_iso(created):
            self.fail(
                SchemaError("metadata.created", "expected an ISO-8601 UTC timestamp")
            )

    def _graph(self, doc: dict) -> None:
        graph = self.require(doc, "", "graph", "an object")
        if not isinstance(graph, dict):
            if graph is not None:
                self.fail(SchemaError("graph", "expected an object"))
            return
        directed = self.require(graph, "graph", "directed", "a boolean")
        if directed is not None and not isinstance(directed, bool):
            self.fail(SchemaError("graph.directed", "expected a boolean"))

        nodes = self.require(graph, "graph", "nodes", "an array")
        if nodes is not None and not isinstance(nodes, list):
            self.fail(SchemaError("graph.nodes", "expected an array"))
            nodes = None
        if isinstance(nodes, list):
            for i, node in enumerate(nodes):
                self._node(i, node)

        edges = self.require(graph, "graph", "edges", "an array")
        if edges is not None and not isinstance(edges, list):
            self.fail(SchemaError("graph.edges", "expected an array"))
            edges = None
        if isinstance(edges, list):
            for i, edge in enumerate(edges):
                self._edge(i, edge)

    def _node(self, i: int, node: object) -> None:
        path = f"graph.nodes[{i}]"
        if not isinstance(node, dict):
            self.fail(SchemaError(path, "expected an object"))
            return
        node_id = self.require(node, path, "id", "a non-empty string")
        if node_id is not None:
            if not isinstance(node_id, str) or not node_id:
                self.fail(SchemaError(f"{path}.id", "expected a non-empty string"))
            elif node_id in self.node_ids:
                self.fail(SchemaError(f"{path}.id", f"duplicate node id {node_id!r}"))
            else:
                self.node_ids.add(node_id)
        attributes = self.require(node, path, "attributes", "an object")
        if attributes is None:
            return
        if not isinstance(attributes, dict):
            self.fail(SchemaError(f"{path}.attributes", "expected an object"))
            return
        for key, value in attributes.items():
            if isinstance(value, (str, bool)):
                continue
            if not _finite_number(value):
                self.fail(
                    SchemaError(
                        f"{path}.attributes.{key}",
                        "expected a finite number, string, or boolean",
                    )
                )

    def _edge(self, i: int, edge: object) -> None:
        path = f"graph.edges[{i}]"
        if not isinstance(edge, dict):
            self.fail(SchemaError(path, "expected an object"))
            return
        for key in ("source", "target"):
            endpoint = self.require(edge, path, key, "a non-empty string")
            if endpoint is None:
                continue
            if not isinstance(endpoint, str) or not endpoint:
                self.fail(SchemaError(f"{path}.{key}", "expected a non-empty string"))
            elif endpoint not in self.node_ids:
                self.fail(DanglingReference(f"{path}.{key}", endpoint))
        if "weight" in edge:
            weight = edge["weight"]
            if not _finite_number(weight) or float(weight) <= 0:
                self.fail(
                    SchemaError(f"{path}.weight", "expected a positive finite number")
                )

    def _view(self, doc: dict) -> None:
        view = self.require(doc, "", "view", "an object")
        if not isinstance(view, dict):
            if view is not None:
                self.fail(SchemaError("view", "expected an object"))
            return

        positions = self.require(view, "view", "positions", "an object")
        position_keys: set[str] = set()
        if positions is not None and not isinstance(positions, dict):
            self.fail(SchemaError("view.positions", "expected an object"))
        elif isinstance(positions, dict):
            for node_id, value in positions.items():
                path = f"view.positions.{node_id}"
                if node_id not in self.node_ids:
                    self.fail(DanglingReference(path, node_id))
                    continue
                if not isinstance(value, list) or len(value) != 2:
                    self.fail(SchemaError(path, "expected 2 elements"))
                    continue
                if not all(_finite_number(c) for c in value):
                    self.fail(SchemaError(path, "expected finite numbers"))
                    continue
                position_keys.add(node_id)

        visible = self.require(view, "view", "visible", "an array")
        if visible is not None and not isinstance(visible, list):
            self.fail(SchemaError("view.visible", "expected an array"))
        elif isinstance(visible, list):
            for i, node_id in enumerate(visible):
                path = f"view.visible[{i}]"
                if not isinstance(node_id, str):
                    self.fail(SchemaError(path, "expected a string"))
                elif node_id not in self.node_ids:
                    self.fail(DanglingReference(path, node_id))
                elif node_id not in position_keys:
                    self.fail(
                        SchemaError(path, f"visible node {node_id!r} has no position")
                    )

        pinned = self.require(view, "view", "pinned", "an array")
        if pinned is not None and not isinstance(pinned, list):
            self.fail(SchemaError("view.pinned", "expected an array"))
        elif isinstance(pinned, list):
            for i, node_id in enumerate(pinned):
                path = f"view.pinned[{i}]"
                if not isinstance(node_id, str):
                    self.fail(SchemaError(path, "expected a string"))
                elif node_id not in self.node_ids:
                    self.fail(DanglingReference(path, node_id))
                elif node_id not in position_keys:
                    self.fail(
                        SchemaError(path, f"pinned node {node_id!r} has no position")
                    )

        overrides = self.require(view, "view", "overrides", "an object")
        if overrides is not None and not isinstance(overrides, dict):
            self.fail(SchemaError("view.overrides", "expected an object"))
        elif isinstance(overrides, dict):
            for node_id, value in overrides.items():
                self._override(node_id, value)

        style = self.require(view, "view", "global_style", "an object")
        if style is not None and not isinstance(style, dict):
            self.fail(SchemaError("view.global_style", "expected an object"))
        elif isinstance(style, dict):
            self._style(style)

    def _override(self, node_id: str, value: object) -> None:
        path = f"view.overrides.{node_id}"
        if node_id not in self.node_ids:
            self.fail(DanglingReference(path, node_id))
            return
        if not isinstance(value, dict):
            self.fail(SchemaError(path, "expected an object"))
            return
        if "size" in value and (
            not _finite_number(value["size"]) or float(value["size"]) <= 0
        ):
            self.fail(SchemaError(f"{path}.size", "expected a positive finite number"))
        if "color" in value and (
            not isinstance(value["color"], str) or not _COLOR.match(value["color"])
        ):
            self.fail(SchemaError(f"{path}.color", "expected a #rrggbb color"))
        if "shape" in value and value["shape"] not in SHAPES:
            self.fail(SchemaError(f"{path}.shape", f"expected one of {SHAPES}"))
        if "label" in value and not isinstance(value["label"], str):
            self.fail(SchemaError(f"{path}.label", "expected a string"))

    def _style(self, style: dict) -> None:
        base = "view.global_style"
        size_by = self.require(style, base, "size_by", "a selector")
        if size_by is not None and not _valid_selector(size_by):
            self.fail(SchemaError(f"{base}.size_by", "invalid selector"))
        color_by = self.require(style, base, "color_by", "a selector")
        if color_by is not None and not _valid_selector(color_by):
            self.fail(SchemaError(f"{base}.color_by", "invalid selector"))

        size_range = self.require(style, base, "size_range", "an array")
        if size_range is not None:
            ok = (
                isinstance(size_range, list)
                and len(size_range) == 2
                and all(_finite_number(v) for v in size_range)
                and 0 < float(size_range[0]) <= float(size_range[1])
            )
            if not ok:
                self.fail(
                    SchemaError(
                        f"{base}.size_range",
                        "expected [min, max] with 0 < min <= max",
                    )
                )

        scale = self.require(style, base, "color_scale", "an array")
        if scale is not None:
            ok = (
                isinstance(scale, list)
                and len(scale) >= 1
                and all(isinstance(c, str) and _COLOR.match(c) for c in scale)
            )
            if not ok:
                self.fail(
                    SchemaError(
                        f"{base}.color_scale",
                        "expected a non-empty array of #rrggbb colors",
                    )
                )

        shape = self.require(style, base, "shape", "a string")
        if shape is not None and shape not in SHAPES:
            self.fail(SchemaError(f"{base}.shape", f"expected one of {SHAPES}"))

        label_by = self.require(style, base, "label_by", "a selector or null", allow_null=True)
        if label_by is not None and not _valid_selector(label_by):
            self.fail(SchemaError(f"{base}.label_by", "expected a selector or null"))

        label_size = self.require(style, base, "label_size", "a number")
        if label_size is not None and (
            not _finite_number(label_size) or float(label_size) <= 0
        ):
            self.fail(
                SchemaError(f"{base}.label_size", "expected a positive finite number")
            )


def _parse_json(data: bytes | bytearray | str) -> object:
    if isinstance(data, (bytes, bytearray)):
        try:
            data = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise JsonError(exc.start, "invalid UTF-8") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise JsonError(exc.pos, exc.msg) from None


def validate(data: bytes | bytearray | str) -> list[SnapshotError]:
    """Every structural problem in the document; empty means valid.

    Accepts exactly the inputs :func:`decode` accepts.
    """
    try:
        document = _parse_json(data)
    except JsonError as exc:
        return [exc]
    return _Checker(document).check()


def decode(data: bytes | bytearray | str) -> Snapshot:
    """Parse and validate a snapshot document into live objects.

    Unknown fields are ignored.  The restored layout state starts a fresh
    cooling schedule (temperature is presentation state, not persisted).
    """
    document = _parse_json(data)
    errors = _Checker(document).check()
    if errors:
        raise errors[0]
    assert isinstance(document, dict)

    graph_obj = document["graph"]
    graph = build_graph(
        [
            {"id": node["id"], "attributes": node["attributes"]}
            for node in graph_obj["nodes"]
        ],
        [
            (edge["source"], edge["target"], float(edge.get("weight", 1.0)))
            for edge in graph_obj["edges"]
        ],
        directed=graph_obj["directed"],
    )

    view_obj = document["view"]
    style_obj = view_obj["global_style"]
    style = StyleMapping(
        size_by=style_obj["size_by"],
        size_range=(
            float(style_obj["size_range"][0]),
            float(style_obj["size_range"][1]),
        ),
        color_by=style_obj["color_by"],
        color_scale=tuple(style_obj["color_scale"]),
        shape=style_obj["shape"],
        label_by=style_obj["label_by"],
        label_size=float(style_obj["label_size"]),
    )
    overrides = {
        node_id: StyleOverride(
            size=float(o["size"]) if "size" in o else None,
            color=o.get("color"),
            shape=o.get("shape"),
            label=o.get("label"),
        )
        for node_id, o in view_obj["overrides"].items()
    }
    layout = LayoutState(
        positions={
            node_id: (float(x), float(y))
            for node_id, (x, y) in view_obj["positions"].items()
        },
        pinned=set(view_obj["pinned"]),
        temperature=LayoutParams().initial_temperature or 0.0,
        iteration=0,
    )
    view = ViewState(
        visible=set(view_obj["visible"]),
        layout=layout,
        global_style=style,
        overrides=overrides,
    )

    metadata_obj = document["metadata"]
    metadata = SnapshotMetadata(
        name=metadata_obj["name"],
        created=metadata_obj["created"],
        generator=metadata_obj["generator"],
    )
    return Snapshot(graph=graph, view=view, metadata=metadata)
