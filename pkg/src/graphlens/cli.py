"""Command-line front door: import, stats, layout, expand, serve.

Each subcommand is a thin composition of engine operations with snapshot
JSON as the interchange format, so commands pipeline naturally.  Exit
codes: 0 success, 1 usage error, 2 data error (malformed input, invalid
snapshot, unknown node), 3 I/O error (unreadable/unwritable paths, port
in use).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .analytics import (
    clustering_coefficient,
    connected_components,
    density,
    diameter,
    pagerank,
)
from .errors import GraphLensError, InvalidImportSpec
from .explore import expansion_ids, show
from .graph import Graph
from .ingest import (
    ImportSpec,
    InitialViewPolicy,
    apply_viz,
    initial_view,
    parse_edge_list,
    parse_gexf_document,
)
from .layout import LayoutParams, LayoutState, run
from .server import ServerConfig, serve
from .snapshot import SnapshotMetadata, decode, encode

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage problems; this tool reserves 2 for
    data errors, so usage failures are remapped to 1."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _column(value: str) -> int | str:
    """Column flags accept a 0-based index or a header name."""
    try:
        return int(value)
    except ValueError:
        return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphlens", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"graphlens {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser(
        "import", help="parse an edge list or GEXF file into a snapshot"
    )
    cmd.add_argument("input", type=Path)
    cmd.add_argument("--format", required=True, choices=("csv", "tsv", "gexf"))
    cmd.add_argument("--source", type=_column, default=0, metavar="COL")
    cmd.add_argument("--target", type=_column, default=1, metavar="COL")
    cmd.add_argument("--weight", type=_column, default=None, metavar="COL")
    cmd.add_argument("--header", action="store_true")
    cmd.add_argument("--directed", action="store_true")
    cmd.add_argument(
        "--top-pagerank",
        type=int,
        default=None,
        metavar="K",
        help="show only the K best-scoring nodes initially (default: whole graph)",
    )
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("-o", "--output", type=Path, required=True)

    cmd = commands.add_parser("stats", help="print whole-graph statistics")
    cmd.add_argument("snapshot", type=Path)
    cmd.add_argument("--json", action="store_true", dest="as_json")

    cmd = commands.add_parser("layout", help="run layout iterations on the visible nodes")
    cmd.add_argument("snapshot", type=Path)
    cmd.add_argument("--iterations", type=int, required=True, metavar="N")
    cmd.add_argument("--seed", type=int, default=0, metavar="S")
    cmd.add_argument("-o", "--output", type=Path, required=True)

    cmd = commands.add_parser("expand", help="reveal top neighbors of a visible node")
    cmd.add_argument("snapshot", type=Path)
    cmd.add_argument("--node", required=True, metavar="ID")
    cmd.add_argument("--k", type=int, required=True)
    cmd.add_argument("--by", choices=("pagerank", "degree"), default="pagerank")
    cmd.add_argument("-o", "--output", type=Path, required=True)

    cmd = commands.add_parser("serve", help="run the snapshot sharing server")
    cmd.add_argument("--dir", type=Path, required=True)
    cmd.add_argument("--bind", default="127.0.0.1:8000", metavar="HOST:PORT")
    cmd.add_argument("--token", default=None)
    cmd.add_argument("--max-bytes", type=int, default=16 * 1024 * 1024, metavar="N")
    return parser


def _cmd_import(args: argparse.Namespace) -> int:
    if args.top_pagerank is not None and args.top_pagerank < 1:
        raise InvalidImportSpec("--top-pagerank must be a positive integer")
    policy = (
        InitialViewPolicy("top-pagerank", args.top_pagerank)
        if args.top_pagerank is not None
        else InitialViewPolicy()
    )
    params = LayoutParams(seed=args.seed)
    if args.format == "gexf":
        with open(args.input, "rb") as handle:
            document = parse_gexf_document(handle)
        graph = document.graph
        view = apply_viz(document, initial_view(graph, policy, params))
    else:
        spec = ImportSpec(
            format=args.format,
            has_header=args.header,
            source_column=args.source,
            target_column=args.target,
            weight_column=args.weight,
            directed=args.directed,
        )
        with open(args.input, "rb") as handle:
            graph = parse_edge_list(handle, spec)
        view = initial_view(graph, policy, params)
    metadata = SnapshotMetadata(name=args.input.stem, generator=f"graphlens {__version__}")
    args.output.write_bytes(encode(graph, view, metadata))
    print(f"nodes: {graph.node_count} edges: {graph.edge_count}")
    return EXIT_OK


def _top_pagerank(graph: Graph, count: int = 10) -> list[tuple[str, float]]:
    scores = pagerank(graph).scores
    ranked = sorted(scores)
    ranked.sort(key=lambda node_id: scores[node_id], reverse=True)
    return [(node_id, scores[node_id]) for node_id in ranked[:count]]


def _cmd_stats(args: argparse.Namespace) -> int:
    graph = decode(args.snapshot.read_bytes()).graph
    components = connected_components(graph)
    dia = diameter(graph)
    stats = {
        "nodes": graph.node_count,
        "edges": graph.edge_count,
        "density": density(graph),
        "components": len(components),
        "diameter": {"value": dia.value, "disconnected": dia.disconnected},
        "clustering": clustering_coefficient(graph),
        "top_pagerank": [
            {"id": node_id, "score": score}
            for node_id, score in _top_pagerank(graph)
        ],
    }
    if args.as_json:
        print(json.dumps(stats, indent=2))
        return EXIT_OK
    print(f"nodes: {stats['nodes']}")
    print(f"edges: {stats['edges']}")
    print(f"density: {stats['density']!r}")
    print(f"components: {stats['components']}")
    suffix = " (disconnected)" if dia.disconnected else ""
    print(f"diameter: {dia.value}{suffix}")
    print(f"clustering: {stats['clustering']!r}")
    print("top pagerank:")
    for node_id, score in _top_pagerank(graph):
        print(f"  {node_id}\t{score!r}")
    return EXIT_OK


def _cmd_layout(args: argparse.Namespace) -> int:
    if args.iterations < 0:
        raise InvalidImportSpec("--iterations must be nonnegative")
    graph, view, metadata = decode(args.snapshot.read_bytes())
    params = LayoutParams(seed=args.seed)
    view.layout = run(
        graph, view.visible, view.layout, params, iterations=args.iterations
    )
    args.output.write_bytes(encode(graph, view, metadata))
    return EXIT_OK


def _cmd_expand(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise InvalidImportSpec("--k must be a positive integer")
    graph, view, metadata = decode(args.snapshot.read_bytes())
    added = expansion_ids(graph, view, args.node, args.k, args.by)
    show(graph, view, added, anchor=args.node)
    args.output.write_bytes(encode(graph, view, metadata))
    for node_id in added:
        print(node_id)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    config = ServerConfig(
        bind_address=args.bind,
        storage_dir=args.dir,
        max_snapshot_bytes=args.max_bytes,
        write_token=args.token,
    )
    try:
        serve(config)
    except KeyboardInterrupt:
        pass
    return EXIT_OK


_COMMANDS = {
    "import": _cmd_import,
    "stats": _cmd_stats,
    "layout": _cmd_layout,
    "expand": _cmd_expand,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except InvalidImportSpec as exc:
        print(f"graphlens: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphLensError as exc:
        print(f"graphlens: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"graphlens: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"graphlens: {exc}", file=sys.stderr)
        return EXIT_IO


def run_main() -> None:
    sys.exit(main())
