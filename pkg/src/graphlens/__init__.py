"""graphlens: incremental graph exploration engine.

Import graphs from edge lists or GEXF, rank nodes with PageRank, lay them
out with a deterministic force-directed algorithm, explore by expanding
neighbors of interesting nodes, and save or share the whole state as a
versioned JSON snapshot served over HTTP.
"""

from .analytics import (
    DiameterResult,
    PageRankParams,
    PageRankResult,
    ScoreMap,
    clustering_coefficient,
    connected_components,
    density,
    diameter,
    pagerank,
)
from .errors import (
    DanglingEndpoint,
    DanglingReference,
    DuplicateNodeId,
    EmptyEndpoint,
    EmptyGraph,
    EmptyInput,
    GraphLensError,
    InconsistentView,
    InvalidAttributeValue,
    InvalidImportSpec,
    JsonError,
    MalformedRow,
    MissingPosition,
    NonNumericWeight,
    SchemaError,
    SnapshotError,
    TooFewNodes,
    UnknownAttribute,
    UnknownNode,
    UnknownNodeReference,
    UnsupportedGexfFeature,
    UnsupportedVersion,
    XmlError,
)
from .explore import (
    NeighborCandidate,
    ResolvedStyle,
    StyleMapping,
    StyleOverride,
    ViewState,
    data_sheet,
    expand,
    expansion_ids,
    hide,
    neighbor_candidates,
    resolve_style,
    show,
)
from .graph import (
    AttributeValue,
    Edge,
    Graph,
    Node,
    NodeId,
    build_graph,
)
from .ingest import (
    GexfDocument,
    ImportPreview,
    ImportSpec,
    InitialViewPolicy,
    apply_viz,
    canonical_edge_list,
    initial_view,
    parse_edge_list,
    parse_gexf,
    parse_gexf_document,
    preview,
)
from .layout import (
    LayoutParams,
    LayoutState,
    Position,
    jitter_near,
    pin,
    position_for,
    run,
    seed_positions,
    step,
    unpin,
    with_positions,
)
from .server import ServerConfig, SnapshotStore, create_server
from .snapshot import (
    SNAPSHOT_VERSION,
    Snapshot,
    SnapshotMetadata,
    decode,
    encode,
    fragment_for,
    id_from_fragment,
    is_snapshot_id,
    new_snapshot_id,
    validate,
)

__version__ = "1.0.0"
