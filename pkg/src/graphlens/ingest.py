"""Import pipeline: CSV/TSV edge lists, GEXF documents, and initial views.

Tabular parsing is streaming: the preview reads just enough bytes to fill
its row budget, so a multi-gigabyte file can be previewed instantly.  CSV
follows RFC 4180 (quoted fields, embedded delimiters and newlines, doubled
quotes); TSV is hard-tab-delimited with no quoting.  Lines whose first
character is '#' outside any quoted field are skipped as comments.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import IO, Iterator
from xml.etree import ElementTree

from . import layout as layout_mod
from .analytics import pagerank
from .errors import (
    EmptyEndpoint,
    EmptyGraph,
    EmptyInput,
    InvalidImportSpec,
    MalformedRow,
    NonNumericWeight,
    UnknownNodeReference,
    UnsupportedGexfFeature,
    XmlError,
)
from .explore import StyleOverride, ViewState
from .graph import AttributeValue, Edge, Graph, Node, NodeId, build_graph
from .layout import LayoutParams, Position

ColumnRef = int | str

_DELIMITERS = {"csv": ",", "tsv": "\t"}


@dataclass(frozen=True)
class ImportSpec:
    """How to interpret one input file."""

    format: str
    has_header: bool = False
    source_column: ColumnRef = 0
    target_column: ColumnRef = 1
    weight_column: ColumnRef | None = None
    node_attribute_columns: tuple[ColumnRef, ...] = ()
    directed: bool = False
    delimiter: str | None = None

    def __post_init__(self) -> None:
        if self.format not in ("csv", "tsv", "gexf"):
            raise InvalidImportSpec(f"unknown format: {self.format!r}")
        if self.format in _DELIMITERS:
            forced = _DELIMITERS[self.format]
            if self.delimiter is None:
                object.__setattr__(self, "delimiter", forced)
            elif self.delimiter != forced:
                raise InvalidImportSpec(
                    f"{self.format} uses {forced!r} as delimiter, "
                    f"got {self.delimiter!r}"
                )
        if self.source_column == self.target_column:
            raise InvalidImportSpec("source and target columns must differ")
        object.__setattr__(
            self, "node_attribute_columns", tuple(self.node_attribute_columns)
        )


@dataclass(frozen=True)
class ImportPreview:
    column_names: list[str]
    rows: list[list[str]]
    total_row_estimate: int


@dataclass(frozen=True)
class InitialViewPolicy:
    """What to show right after import: everything, or the top-k by PageRank."""

    mode: str = "whole-graph"
    k: int = 250

    def __post_init__(self) -> None:
        if self.mode not in ("whole-graph", "top-pagerank"):
            raise ValueError(f"unknown initial-view mode: {self.mode!r}")
        if self.k < 1:
            raise ValueError("k must be at least 1")


class _RecordStream:
    """Yields (line_number, cells) logical records, reading lazily.

    Bytes are pulled one at a time so no input beyond the requested records
    is ever touched.  A quoted CSV field may span physical lines; the quote
    parity of the accumulated record decides whether a newline ends it.
    """

    def __init__(self, stream: IO[bytes], delimiter: str, quoted: bool):
        self._stream = stream
        self._delimiter = delimiter
        self._quoted = quoted
        self._line = 0
        self._first = True
        self.bytes_consumed = 0
        self.exhausted = False

    def _next_physical_line(self) -> bytes | None:
        buf = bytearray()
        while True:
            byte = self._stream.read(1)
            if not byte:
                self.exhausted = True
                return bytes(buf) if buf else None
            self.bytes_consumed += 1
            buf += byte
            if byte == b"\n":
                return bytes(buf)

    def records(self) -> Iterator[tuple[int, list[str]]]:
        while True:
            record = bytearray()
            start_line = None
            quotes = 0
            while True:
                raw = self._next_physical_line()
                if raw is None:
                    break
                self._line += 1
                if self._first:
                    self._first = False
                    if raw.startswith(b"\xef\xbb\xbf"):
                        raw = raw[3:]
                if not record:
                    stripped = raw.rstrip(b"\r\n")
                    if not stripped:
                        continue  # blank line
                    if stripped.startswith(b"#"):
                        continue  # comment line
                    start_line = self._line
                record += raw
                if self._quoted:
                    quotes += raw.count(b'"')
                if quotes % 2 == 0:
                    break
            if start_line is None:
                return
            text = record.decode("utf-8")
            if text.endswith("\n"):
                text = text[:-1]
            if text.endswith("\r"):
                text = text[:-1]
            yield start_line, self._split(text)

    def _split(self, text: str) -> list[str]:
        if not self._quoted:
            return text.split(self._delimiter)
        return next(csv.reader([text], delimiter=self._delimiter))


def _as_stream(data: bytes | bytearray | str | IO[bytes]) -> IO[bytes]:
    if isinstance(data, str):
        data = data.encode("utf-8")
    if isinstance(data, (bytes, bytearray)):
        return io.BytesIO(bytes(data))
    return data


def _stream_size(stream: IO[bytes]) -> int | None:
    try:
        here = stream.tell()
        end = stream.seek(0, io.SEEK_END)
        stream.seek(here)
        return end - here
    except (OSError, AttributeError, ValueError):
        return None


def _open_records(
    data: bytes | bytearray | str | IO[bytes], spec: ImportSpec
) -> tuple[_RecordStream, int | None]:
    if spec.format not in _DELIMITERS:
        raise InvalidImportSpec(
            f"tabular parsing requires csv or tsv, got {spec.format!r}"
        )
    stream = _as_stream(data)
    size = _stream_size(stream)
    assert spec.delimiter is not None
    return _RecordStream(stream, spec.delimiter, spec.format == "csv"), size


def preview(
    data: bytes | bytearray | str | IO[bytes], spec: ImportSpec, k: int = 10
) -> ImportPreview:
    """First ``k`` data rows plus column names, without parsing the rest.

    The total row count is exact when the input ends within the preview,
    otherwise extrapolated from bytes consumed so far (and equal to ``k``
    when the input size cannot be determined).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    reader, size = _open_records(data, spec)
    records = reader.records()
    first = next(records, None)
    if first is None:
        raise EmptyInput()
    if spec.has_header:
        columns = [cell.strip() for cell in first[1]]
        pending = None
    else:
        columns = [f"col{i}" for i in range(len(first[1]))]
        pending = first
    header_bytes = reader.bytes_consumed if spec.has_header else 0

    rows: list[list[str]] = []
    while len(rows) < k:
        record = pending if pending is not None else next(records, None)
        pending = None
        if record is None:
            break
        line, cells = record
        if len(cells) != len(columns):
            raise MalformedRow(line, len(columns), len(cells))
        rows.append(cells)

    fully_consumed = reader.exhausted or (
        size is not None and reader.bytes_consumed >= size
    )
    if len(rows) < k or fully_consumed:
        estimate = len(rows)
    elif size is None or reader.bytes_consumed <= header_bytes:
        estimate = len(rows)
    else:
        consumed = reader.bytes_consumed - header_bytes
        remaining = size - reader.bytes_consumed
        estimate = len(rows) + round(remaining * len(rows) / consumed)
    return ImportPreview(columns, rows, estimate)


def _resolve_column(
    ref: ColumnRef, header: list[str] | None, width: int, line: int, role: str
) -> int:
    if isinstance(ref, bool) or not isinstance(ref, (int, str)):
        raise InvalidImportSpec(f"{role} column must be an index or name")
    if isinstance(ref, int):
        if ref < 0:
            raise InvalidImportSpec(f"{role} column index must be nonnegative")
        if ref >= width:
            # the data is too narrow for the referenced column, e.g. a
            # tab-delimited file read with the csv format
            raise MalformedRow(line, ref + 1, width)
        return ref
    if header is None:
        raise InvalidImportSpec(
            f"{role} column named {ref!r} requires a header row"
        )
    try:
        return header.index(ref)
    except ValueError:
        raise InvalidImportSpec(
            f"{role} column {ref!r} not found in header {header}"
        ) from None


def _coerce_attribute(raw: str) -> AttributeValue:
    """Edge files carry no type declarations; recognize numbers and booleans,
    keep everything else as text."""
    lowered = raw.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        value = float(raw)
    except ValueError:
        return raw
    return value if math.isfinite(value) else raw


def parse_edge_list(
    data: bytes | bytearray | str | IO[bytes], spec: ImportSpec
) -> Graph:
    """Build a graph from a delimited edge list, one edge per data row.

    Nodes come into existence at their first endpoint occurrence, trimmed of
    surrounding whitespace; repeated rows become parallel edges.  Attribute
    columns attach to the row's source node, first value wins.
    """
    reader, _ = _open_records(data, spec)
    records = reader.records()
    first = next(records, None)
    if first is None:
        raise EmptyInput()

    if spec.has_header:
        header = [cell.strip() for cell in first[1]]
        width = len(header)
        pending = None
    else:
        header = None
        width = len(first[1])
        pending = first

    first_line = first[0]
    si = _resolve_column(spec.source_column, header, width, first_line, "source")
    ti = _resolve_column(spec.target_column, header, width, first_line, "target")
    if si == ti:
        raise InvalidImportSpec("source and target columns must differ")
    wi = (
        _resolve_column(spec.weight_column, header, width, first_line, "weight")
        if spec.weight_column is not None
        else None
    )
    attr_columns: list[tuple[int, str]] = []
    for ref in spec.node_attribute_columns:
        index = _resolve_column(ref, header, width, first_line, "attribute")
        name = header[index] if header is not None else f"col{index}"
        attr_columns.append((index, name))

    nodes: dict[NodeId, dict[str, AttributeValue]] = {}
    edges: list[Edge] = []
    while True:
        record = pending if pending is not None else next(records, None)
        pending = None
        if record is None:
            break
        line, cells = record
        if len(cells) != width:
            raise MalformedRow(line, width, len(cells))
        source = cells[si].strip()
        target = cells[ti].strip()
        if not source or not target:
            raise EmptyEndpoint(line)
        weight = 1.0
        if wi is not None:
            token = cells[wi].strip()
            try:
                weight = float(token)
            except ValueError:
                raise NonNumericWeight(line, token) from None
            if not math.isfinite(weight) or weight <= 0:
                raise NonNumericWeight(line, token)
        nodes.setdefault(source, {})
        nodes.setdefault(target, {})
        for index, name in attr_columns:
            raw = cells[index].strip()
            if raw and name not in nodes[source]:
                nodes[source][name] = _coerce_attribute(raw)
        edges.append(Edge(source, target, weight))

    return build_graph(
        [Node(node_id, attrs) for node_id, attrs in nodes.items()],
        edges,
        directed=spec.directed,
    )


def canonical_edge_list(graph: Graph) -> str:
    """Sorted CSV form (source,target,weight) of the graph's edges.

    Re-importing the result yields an equal graph, provided every node has
    at least one incident edge; isolated nodes have no edge-list encoding.
    """
    rows = []
    for edge in graph.edges:
        a, b = edge.source, edge.target
        if not graph.directed and b < a:
            a, b = b, a
        rows.append((a, b, edge.weight))
    rows.sort()
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    for a, b, weight in rows:
        writer.writerow([a, b, repr(weight)])
    return out.getvalue()


CANONICAL_EDGE_LIST_SPEC = ImportSpec(
    format="csv",
    has_header=True,
    source_column="source",
    target_column="target",
    weight_column="weight",
)


# -- GEXF ---------------------------------------------------------------


@dataclass(frozen=True)
class GexfDocument:
    """Parsed GEXF content: the graph plus any viz positions and colors."""

    graph: Graph
    positions: dict[NodeId, Position] = field(default_factory=dict)
    colors: dict[NodeId, str] = field(default_factory=dict)


_GEXF_NUMERIC = ("integer", "long", "float", "double")


def _strip_namespaces(root: ElementTree.Element) -> None:
    for element in root.iter():
        if "}" in element.tag:
            element.tag = element.tag.split("}", 1)[1]


def _typed_value(text: str, gexf_type: str, context: str) -> AttributeValue:
    if gexf_type in _GEXF_NUMERIC:
        try:
            value = float(text)
        except ValueError:
            raise XmlError((0, 0), f"{context}: non-numeric value {text!r}") from None
        if not math.isfinite(value):
            raise XmlError((0, 0), f"{context}: non-finite value {text!r}")
        return value
    if gexf_type == "boolean":
        lowered = text.strip().lower()
        if lowered not in ("true", "false"):
            raise XmlError((0, 0), f"{context}: invalid boolean {text!r}")
        return lowered == "true"
    return text


def parse_gexf_document(data: bytes | bytearray | str | IO[bytes]) -> GexfDocument:
    """Read a static GEXF 1.2/1.3 document, including viz positions/colors.

    Dynamic (timestamped) and hierarchical graphs are out of scope and
    rejected explicitly.
    """
    if not isinstance(data, (bytes, bytearray, str)):
        data = data.read()
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise XmlError(exc.position or (0, 0), str(exc)) from None
    _strip_namespaces(root)
    if root.tag != "gexf":
        raise XmlError((0, 0), f"expected a <gexf> document, got <{root.tag}>")
    graph_el = root.find("graph")
    if graph_el is None:
        raise XmlError((0, 0), "missing <graph> element")
    if graph_el.get("mode") == "dynamic" or graph_el.get("timeformat"):
        raise UnsupportedGexfFeature("dynamic graph")
    directed = graph_el.get("defaultedgetype", "undirected") == "directed"

    declared: dict[str, tuple[str, str, str | None]] = {}
    for attrs_el in graph_el.findall("attributes"):
        if attrs_el.get("mode") == "dynamic":
            raise UnsupportedGexfFeature("dynamic attributes")
        if attrs_el.get("class") != "node":
            continue
        for attr_el in attrs_el.findall("attribute"):
            attr_id = attr_el.get("id")
            if attr_id is None:
                raise XmlError((0, 0), "attribute declaration without id")
            title = attr_el.get("title") or attr_id
            gexf_type = attr_el.get("type", "string")
            default_el = attr_el.find("default")
            default = default_el.text if default_el is not None else None
            declared[attr_id] = (title, gexf_type, default)

    nodes: list[Node] = []
    positions: dict[NodeId, Position] = {}
    colors: dict[NodeId, str] = {}
    nodes_el = graph_el.find("nodes")
    for node_el in () if nodes_el is None else nodes_el.findall("node"):
        if node_el.find("nodes") is not None or node_el.find("parents") is not None:
            raise UnsupportedGexfFeature("hierarchical graph")
        if node_el.find("spells") is not None:
            raise UnsupportedGexfFeature("dynamic graph")
        node_id = node_el.get("id")
        if node_id is None:
            raise XmlError((0, 0), "node without id")
        attributes: dict[str, AttributeValue] = {}
        attvalues_el = node_el.find("attvalues")
        if attvalues_el is not None:
            for attvalue_el in attvalues_el.findall("attvalue"):
                ref = attvalue_el.get("for") or attvalue_el.get("id")
                if ref is None or ref not in declared:
                    continue  # undeclared attvalues are ignored
                raw = attvalue_el.get("value")
                if raw is None:
                    raise XmlError((0, 0), f"attvalue for {ref!r} without value")
                title, gexf_type, _ = declared[ref]
                attributes[title] = _typed_value(
                    raw, gexf_type, f"node {node_id!r} attribute {title!r}"
                )
        for title, gexf_type, default in declared.values():
            if default is not None and title not in attributes:
                attributes[title] = _typed_value(
                    default, gexf_type, f"default for attribute {title!r}"
                )
        label = node_el.get("label")
        if label is not None:
            # an explicit label attribute beats any attvalue titled "label"
            attributes["label"] = label
        nodes.append(Node(node_id, attributes))

        position_el = node_el.find("position")
        if position_el is not None:
            try:
                x = float(position_el.get("x", ""))
                y = float(position_el.get("y", ""))
            except ValueError:
                raise XmlError(
                    (0, 0), f"node {node_id!r}: malformed viz position"
                ) from None
            positions[node_id] = (x, y)
        color_el = node_el.find("color")
        if color_el is not None:
            try:
                r, g, b = (
                    min(max(int(color_el.get(channel, "")), 0), 255)
                    for channel in ("r", "g", "b")
                )
            except ValueError:
                raise XmlError(
                    (0, 0), f"node {node_id!r}: malformed viz color"
                ) from None
            colors[node_id] = f"#{r:02x}{g:02x}{b:02x}"

    known = {node.id for node in nodes}
    edges: list[Edge] = []
    edges_el = graph_el.find("edges")
    for index, edge_el in enumerate(
        () if edges_el is None else edges_el.findall("edge")
    ):
        if edge_el.find("spells") is not None:
            raise UnsupportedGexfFeature("dynamic graph")
        edge_id = edge_el.get("id") or str(index)
        source = edge_el.get("source")
        target = edge_el.get("target")
        if source is None or target is None:
            raise XmlError((0, 0), f"edge {edge_id!r} missing an endpoint")
        for endpoint in (source, target):
            if endpoint not in known:
                raise UnknownNodeReference(edge_id, endpoint)
        edge_type = edge_el.get("type")
        if edge_type is not None and (edge_type == "directed") != directed:
            raise UnsupportedGexfFeature("mixed edge directedness")
        weight = 1.0
        raw_weight = edge_el.get("weight")
        if raw_weight is not None:
            try:
                weight = float(raw_weight)
            except ValueError:
                raise XmlError(
                    (0, 0), f"edge {edge_id!r}: non-numeric weight {raw_weight!r}"
                ) from None
            if not math.isfinite(weight) or weight <= 0:
                raise XmlError(
                    (0, 0), f"edge {edge_id!r}: weight must be finite and positive"
                )
        edges.append(Edge(source, target, weight))

    return GexfDocument(
        graph=build_graph(nodes, edges, directed=directed),
        positions=positions,
        colors=colors,
    )


def parse_gexf(data: bytes | bytearray | str | IO[bytes]) -> Graph:
    return parse_gexf_document(data).graph


# -- initial view ---------------------------------------------------------


def initial_view(
    graph: Graph,
    policy: InitialViewPolicy | None = None,
    params: LayoutParams | None = None,
) -> ViewState:
    """Visibility and seeded positions for a freshly imported graph.

    Whole-graph mode shows everything; top-pagerank mode shows the
    min(k, n) best-scoring nodes under the default PageRank parameters,
    ties broken by ascending node id.
    """
    policy = policy or InitialViewPolicy()
    view = ViewState()
    if policy.mode == "whole-graph":
        chosen = graph.node_ids()
    else:
        if graph.node_count == 0:
            raise EmptyGraph("top-pagerank initial view requires nodes")
        scores = pagerank(graph).scores
        ranked = sorted(graph.node_ids())
        ranked.sort(key=lambda node_id: scores[node_id], reverse=True)
        chosen = ranked[: min(policy.k, graph.node_count)]
        view.pagerank_cache = scores
    view.layout = layout_mod.seed_positions(chosen, params)
    view.visible = set(chosen)
    return view


def apply_viz(document: GexfDocument, view: ViewState) -> ViewState:
    """Overlay GEXF viz positions and colors onto a view; nodes without viz
    data keep whatever the layout seeding assigned."""
    view.layout.positions.update(document.positions)
    for node_id, color in document.colors.items():
        existing = view.overrides.get(node_id)
        if existing is None:
            view.overrides[node_id] = StyleOverride(color=color)
        else:
            existing.color = color
    return view
