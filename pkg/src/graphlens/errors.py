"""Exception types raised across the engine.

Every error carries its identifying data as attributes so callers (CLI,
server) can report structured detail without parsing messages.
"""

from __future__ import annotations


class GraphLensError(Exception):
    """Base class for all engine errors."""


# ---------------------------------------------------------------------------
# graph core
# ---------------------------------------------------------------------------


class DuplicateNodeId(GraphLensError):
    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"duplicate node id: {node_id!r}")


class DanglingEndpoint(GraphLensError):
    def __init__(self, edge_index: int, missing_id: str):
        self.edge_index = edge_index
        self.missing_id = missing_id
        super().__init__(
            f"edge {edge_index} references unknown node {missing_id!r}"
        )


class UnknownNode(GraphLensError):
    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"unknown node: {node_id!r}")


class InvalidAttributeValue(GraphLensError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(detail)


# ---------------------------------------------------------------------------
# analytics
# ---------------------------------------------------------------------------


class EmptyGraph(GraphLensError):
    def __init__(self, detail: str = "operation requires a nonempty graph"):
        super().__init__(detail)


class TooFewNodes(GraphLensError):
    def __init__(self, node_count: int):
        self.node_count = node_count
        super().__init__(f"density requires at least 2 nodes, got {node_count}")


class UnknownAttribute(GraphLensError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no node carries attribute {name!r}")


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------


class MissingPosition(GraphLensError):
    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"node {node_id!r} has no position")


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------


class InvalidImportSpec(GraphLensError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(detail)


class MalformedRow(GraphLensError):
    def __init__(self, line: int, expected_cells: int, got_cells: int):
        self.line = line
        self.expected_cells = expected_cells
        self.got_cells = got_cells
        super().__init__(
            f"line {line}: expected {expected_cells} cells, got {got_cells}"
        )


class EmptyInput(GraphLensError):
    def __init__(self) -> None:
        super().__init__("input contains no rows")


class EmptyEndpoint(GraphLensError):
    def __init__(self, line: int):
        self.line = line
        super().__init__(f"line {line}: empty endpoint token")


class NonNumericWeight(GraphLensError):
    def __init__(self, line: int, value: str = ""):
        self.line = line
        self.value = value
        super().__init__(
            f"line {line}: weight must be a finite positive number, got {value!r}"
        )


class XmlError(GraphLensError):
    def __init__(self, position: tuple[int, int], detail: str = ""):
        self.position = position
        super().__init__(
            f"malformed XML at line {position[0]}, column {position[1]}"
            + (f": {detail}" if detail else "")
        )


class UnknownNodeReference(GraphLensError):
    def __init__(self, edge_id: str, missing_id: str):
        self.edge_id = edge_id
        self.missing_id = missing_id
        super().__init__(
            f"edge {edge_id!r} references undeclared node {missing_id!r}"
        )


class UnsupportedGexfFeature(GraphLensError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unsupported GEXF feature: {name}")


# ---------------------------------------------------------------------------
# snapshot codec
# ---------------------------------------------------------------------------


class SnapshotError(GraphLensError):
    """Base class for snapshot encode/decode failures."""


class JsonError(SnapshotError):
    def __init__(self, position: int, detail: str = ""):
        self.position = position
        super().__init__(
            f"invalid JSON at offset {position}" + (f": {detail}" if detail else "")
        )


class SchemaError(SnapshotError):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class UnsupportedVersion(SnapshotError):
    def __init__(self, version: object):
        self.version = version
        super().__init__(f"unsupported snapshot version: {version!r}")


class DanglingReference(SnapshotError):
    def __init__(self, path: str, node_id: str = ""):
        self.path = path
        self.node_id = node_id
        super().__init__(
            f"{path}: references unknown node" + (f" {node_id!r}" if node_id else "")
        )


class InconsistentView(GraphLensError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"view is inconsistent with graph: {detail}")
