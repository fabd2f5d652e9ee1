"""geoscene: geo-tagged records projected into a metric 3D terrain scene.

The pipeline: ingest a TSV corpus into an immutable Dataset, project lat/lon
into a metric scene frame, mesh a terrain heightmap into vertex-budgeted
chunks, compute analytic layouts (chronological stacks, query walls, user
paths), and serve the lot as an immutable snapshot over HTTP/JSON.
"""

__version__ = "0.1.0"

from .analytics import (
    CellCounts,
    EmptyQueryError,
    TagRule,
    TimeInterval,
    UserPath,
    cluster_stats,
    filter_time,
    search,
    tag_keywords,
    user_path,
)
from .geoproject import (
    CAMBRIDGE_BOUNDS,
    EARTH_RADIUS_M,
    GeoBounds,
    OutOfBoundsError,
    SceneFrame,
    ScenePoint,
    project,
    scene_dimensions,
    unproject,
)
from .ingest import (
    COLUMNS,
    Dataset,
    FormatError,
    RawRow,
    Rejection,
    TweetRecord,
    format_timestamp,
    load_dataset,
    parse_timestamp,
    parse_tsv,
    validate_record,
)
from .layout import (
    Placement,
    PlacementError,
    QueryWall,
    ScalingReport,
    ScalingSample,
    StackParams,
    WallParams,
    benchmark_placement,
    build_wall,
    count_collisions,
    place,
    write_scaling_csv,
)
from .service import BootError, SceneService, ServiceConfig, Snapshot, boot, create_app
from .terrain import (
    VERTEX_BUDGET,
    Heightmap,
    HeightmapFormatError,
    Mesh,
    MeshChunk,
    chunk_mesh,
    export_stl,
    load_heightmap,
    read_stl,
    save_heightmap,
    smooth,
    surface_height,
    triangulate,
)
