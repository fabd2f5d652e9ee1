"""HTTP/JSON service exposing the loaded scene to exploration clients.

The service publishes an immutable Snapshot (dataset, frame, placements,
terrain chunks). Handlers grab the snapshot reference once per request, so
every response reflects exactly one load; POST /admin/reload builds a whole
new snapshot before atomically swapping it in. Numbers are plain JSON
numbers, timestamps ISO-8601 UTC strings.

Run it with ``python -m geoscene.service --config cfg.json`` (flags
--port/--dataset/--heightmap override the file).
"""

from __future__ import annotations

import argparse
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence, Union

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import analytics, layout
from .analytics import CellCounts, TagRule, TimeInterval, UserPath
from .geoproject import CAMBRIDGE_BOUNDS, GeoBounds, SceneFrame, ScenePoint
from .ingest import (
    Dataset,
    FormatError,
    TweetRecord,
    format_timestamp,
    load_dataset,
    parse_timestamp,
)
from .layout import Placement, QueryWall, StackParams, WallParams
from .terrain import (
    VERTEX_BUDGET,
    Heightmap,
    HeightmapFormatError,
    MeshChunk,
    chunk_mesh,
    load_heightmap,
    smooth,
    triangulate,
)

_EPOCH_MIN = datetime(1, 1, 1, tzinfo=timezone.utc)
_EPOCH_MAX = datetime(9999, 12, 31, 23, 59, 59, 999000, tzinfo=timezone.utc)


class BootError(RuntimeError):
    """Startup failed; the message names the failing stage."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


@dataclass(frozen=True)
class Snapshot:
    """One immutable published view of the loaded data."""

    dataset: Dataset
    frame: SceneFrame
    placements: tuple[Placement, ...]
    terrain_chunks: tuple[MeshChunk, ...]
    load_timestamp: datetime

    def __post_init__(self):
        by_id = {rec.id: rec for rec in self.dataset.records}
        placed = {p.record_id for p in self.placements}
        if placed != set(by_id):
            raise ValueError("placements must cover exactly the dataset's record ids")
        object.__setattr__(self, "_by_id", by_id)

    def record(self, record_id: str) -> Optional[TweetRecord]:
        return self._by_id.get(record_id)


@dataclass
class ServiceConfig:
    """Everything boot() needs; unset fields fall back to workable defaults."""

    dataset_path: Union[str, Path]
    bounds: GeoBounds = CAMBRIDGE_BOUNDS
    heightmap_path: Optional[Union[str, Path]] = None
    host: str = "127.0.0.1"
    port: int = 8000
    stack: StackParams = field(default_factory=StackParams)
    wall: WallParams = field(default_factory=WallParams)
    tag_rules: tuple[TagRule, ...] = (TagRule(keyword="danger", tag="skull"),)
    ground_image: Optional[str] = None
    smooth_iterations: int = 3
    smooth_lambda: float = 0.5
    chunk_max_vertices: int = VERTEX_BUDGET

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ServiceConfig":
        """Load config from JSON; see README for the key set."""
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        kwargs: dict = {"dataset_path": raw["dataset"]}
        if "bounds" in raw:
            b = raw["bounds"]
            kwargs["bounds"] = GeoBounds.from_corners(
                b["min_lat"], b["min_lon"], b["max_lat"], b["max_lon"]
            )
        if "heightmap" in raw:
            kwargs["heightmap_path"] = raw["heightmap"]
        for key in ("host", "port", "ground_image"):
            if key in raw:
                kwargs[key] = raw[key]
        if "stack" in raw:
            kwargs["stack"] = StackParams(**raw["stack"])
        if "wall" in raw:
            kwargs["wall"] = WallParams(**raw["wall"])
        if "tag_rules" in raw:
            kwargs["tag_rules"] = tuple(TagRule(**rule) for rule in raw["tag_rules"])
        if "smoothing" in raw:
            kwargs["smooth_iterations"] = raw["smoothing"].get("iterations", 3)
            kwargs["smooth_lambda"] = raw["smoothing"].get("lambda", 0.5)
        if "chunk_max_vertices" in raw:
            kwargs["chunk_max_vertices"] = raw["chunk_max_vertices"]
        return cls(**kwargs)


# --------------------------------------------------------------------------
# Serialization: these are the wire shapes; tests compare endpoint payloads
# against these functions applied to direct library-call results.
# --------------------------------------------------------------------------

def bounds_json(b: GeoBounds) -> dict:
    return {
        "min_lat": b.min_lat,
        "min_lon": b.min_lon,
        "max_lat": b.max_lat,
        "max_lon": b.max_lon,
    }


def frame_json(frame: SceneFrame) -> dict:
    return {
        "bounds": bounds_json(frame.bounds),
        "width_m": frame.width_m,
        "depth_m": frame.depth_m,
    }


def point_json(pt: ScenePoint) -> dict:
    return {"x": pt.x, "y": pt.y, "z": pt.z}


def record_json(rec: TweetRecord) -> dict:
    return {
        "id": rec.id,
        "username": rec.username,
        "follower_count": rec.follower_count,
        "timestamp": format_timestamp(rec.timestamp),
        "latitude": rec.latitude,
        "longitude": rec.longitude,
        "text": rec.text,
        "tags": sorted(rec.tags),
    }


def placement_json(p: Placement) -> dict:
    return {
        "record_id": p.record_id,
        "x": p.position.x,
        "y": p.position.y,
        "z": p.position.z,
        "stack_index": p.stack_index,
        "model_class": p.model_class,
    }


def chunk_json(chunk: MeshChunk) -> dict:
    return {
        "chunk_id": chunk.chunk_id,
        "vertices": chunk.vertices.tolist(),
        "triangles": chunk.triangles.tolist(),
    }


def wall_json(wall: QueryWall) -> dict:
    return {
        "keyword": wall.keyword,
        "origin": point_json(wall.origin),
        "columns": wall.columns,
        "slot_spacing_m": wall.slot_spacing_m,
        "assignments": [list(entry) for entry in wall.assignments],
    }


def user_path_json(path: UserPath) -> dict:
    return {
        "username": path.username,
        "tweet_ids": list(path.tweet_ids),
        "edges": [list(edge) for edge in path.edges],
    }


def cell_counts_json(stats: CellCounts) -> dict:
    cells = [
        {"cell_x": cx, "cell_y": cy, "count": count}
        for (cx, cy), count in sorted(stats.counts.items())
    ]
    return {"cell_size_m": stats.cell_size_m, "counts": cells}


# --------------------------------------------------------------------------
# Service
# --------------------------------------------------------------------------

class SceneService:
    """Owns the current Snapshot and rebuilds it on demand.

    Readers take the ``snapshot`` reference once and work off it; load()
    assembles the replacement completely before the single reference
    assignment, so a reader never sees a half-built snapshot.
    """

    def __init__(self, config: ServiceConfig):
        self.config = config
        self._snapshot: Optional[Snapshot] = None
        self._reload_lock = threading.Lock()

    @property
    def snapshot(self) -> Snapshot:
        snap = self._snapshot
        if snap is None:
            raise RuntimeError("service has not loaded a snapshot yet")
        return snap

    def load(self) -> Snapshot:
        """Build a fresh Snapshot from the configured inputs and publish it."""
        with self._reload_lock:
            cfg = self.config
            try:
                ds = load_dataset(cfg.dataset_path, cfg.bounds)
            except OSError as exc:
                raise BootError("ingest", f"unreadable file: {cfg.dataset_path}") from exc
            except FormatError as exc:
                raise BootError("ingest", str(exc)) from exc

            try:
                ds = analytics.tag_keywords(ds, list(cfg.tag_rules))
            except ValueError as exc:
                raise BootError("analytics", str(exc)) from exc

            try:
                frame = SceneFrame.from_bounds(cfg.bounds)
            except ValueError as exc:
                raise BootError("geoproject", str(exc)) from exc

            heightmap: Optional[Heightmap] = None
            chunks: tuple[MeshChunk, ...] = ()
            if cfg.heightmap_path is not None:
                try:
                    heightmap = load_heightmap(cfg.heightmap_path)
                    heightmap = smooth(heightmap, cfg.smooth_iterations, cfg.smooth_lambda)
                    mesh = triangulate(heightmap)
                    chunks = tuple(chunk_mesh(mesh, cfg.chunk_max_vertices))
                except OSError as exc:
                    raise BootError(
                        "terrain", f"unreadable file: {cfg.heightmap_path}"
                    ) from exc
                except (HeightmapFormatError, ValueError) as exc:
                    raise BootError("terrain", str(exc)) from exc

            try:
                placements = tuple(layout.place(ds, frame, heightmap, cfg.stack))
            except ValueError as exc:
                raise BootError("layout", str(exc)) from exc

            snap = Snapshot(
                dataset=ds,
                frame=frame,
                placements=placements,
                terrain_chunks=chunks,
                load_timestamp=datetime.now(timezone.utc),
            )
            self._snapshot = snap  # atomic publish
            return snap


class QueryRequest(BaseModel):
    keyword: str


def _parse_instant(value: Optional[str], fallback: datetime) -> datetime:
    if value is None:
        return fallback
    try:
        return parse_timestamp(value)
    except ValueError:
        raise HTTPException(status_code=400, detail="bad-timestamp") from None


def _parse_bbox(value: str) -> tuple[float, float, float, float]:
    parts = value.split(",")
    try:
        min_lon, min_lat, max_lon, max_lat = (float(p) for p in parts)
    except ValueError:
        raise HTTPException(status_code=400, detail="bad-bbox") from None
    return min_lon, min_lat, max_lon, max_lat


def create_app(service: SceneService) -> FastAPI:
    """Wire the documented endpoint set onto a SceneService."""
    app = FastAPI(title="geoscene", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def _bad_params(request: Request, exc: RequestValidationError):
        # The API contract is 400 + machine-readable reason, not 422.
        return JSONResponse(status_code=400, content={"detail": "invalid-params"})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/scene")
    def scene():
        snap = service.snapshot
        return {
            "frame": frame_json(snap.frame),
            "ground_image": service.config.ground_image,
        }

    @app.get("/terrain")
    def terrain():
        snap = service.snapshot
        return {"chunks": [chunk_json(c) for c in snap.terrain_chunks]}

    @app.get("/tweets")
    def tweets(
        request: Request,
        bbox: Optional[str] = None,
    ):
        snap = service.snapshot
        since = _parse_instant(request.query_params.get("from"), _EPOCH_MIN)
        until = _parse_instant(request.query_params.get("to"), _EPOCH_MAX)
        try:
            interval = TimeInterval(start=since, end=until)
        except ValueError:
            raise HTTPException(status_code=400, detail="bad-interval") from None
        wanted = set(analytics.filter_time(snap.dataset, interval))
        chosen = [p for p in snap.placements if p.record_id in wanted]
        if bbox is not None:
            min_lon, min_lat, max_lon, max_lat = _parse_bbox(bbox)
            chosen = [
                p
                for p in chosen
                if (rec := snap.record(p.record_id)) is not None
                and min_lat <= rec.latitude <= max_lat
                and min_lon <= rec.longitude <= max_lon
            ]
        return {"placements": [placement_json(p) for p in chosen]}

    @app.get("/tweets/{record_id}")
    def tweet(record_id: str):
        snap = service.snapshot
        rec = snap.record(record_id)
        if rec is None:
            raise HTTPException(status_code=404, detail="unknown-id")
        return record_json(rec)

    @app.post("/query")
    def query(body: QueryRequest):
        snap = service.snapshot
        try:
            ids = analytics.search(snap.dataset, body.keyword)
        except analytics.EmptyQueryError:
            raise HTTPException(status_code=400, detail="empty-query") from None
        wall = layout.build_wall(
            snap.dataset, ids, snap.frame, service.config.wall, keyword=body.keyword.strip()
        )
        return {"wall": wall_json(wall)}

    @app.get("/users/{username}/path")
    def users_path(username: str):
        snap = service.snapshot
        return user_path_json(analytics.user_path(snap.dataset, username))

    @app.get("/stats")
    def stats(cell_size: float):
        snap = service.snapshot
        if cell_size <= 0:
            raise HTTPException(status_code=400, detail="bad-cell-size")
        counts = analytics.cluster_stats(snap.dataset, snap.frame, cell_size)
        return cell_counts_json(counts)

    @app.post("/admin/reload")
    def reload():
        snap = service.load()
        return {"load_timestamp": format_timestamp(snap.load_timestamp)}

    return app


def boot(config: ServiceConfig) -> tuple[SceneService, FastAPI]:
    """Load everything, publish the first snapshot, return (service, app).

    Any failure surfaces as BootError whose message names the failing stage
    ("ingest: ...", "terrain: ...", ...).
    """
    service = SceneService(config)
    service.load()
    return service, create_app(service)


def main(argv: Optional[Sequence[str]] = None) -> None:
    parser = argparse.ArgumentParser(
        prog="geoscene.service", description="Serve a scene snapshot over HTTP/JSON."
    )
    parser.add_argument("--config", type=Path, help="JSON config file")
    parser.add_argument("--port", type=int, help="listen port (overrides config)")
    parser.add_argument("--dataset", type=Path, help="TSV corpus path (overrides config)")
    parser.add_argument("--heightmap", type=Path, help="heightmap grid path (overrides config)")
    args = parser.parse_args(argv)

    if args.config is not None:
        config = ServiceConfig.from_file(args.config)
    elif args.dataset is not None:
        config = ServiceConfig(dataset_path=args.dataset)
    else:
        parser.error("either --config or --dataset is required")

    if args.port is not None:
        config.port = args.port
    if args.dataset is not None:
        config.dataset_path = args.dataset
    if args.heightmap is not None:
        config.heightmap_path = args.heightmap

    service, app = boot(config)
    import uvicorn

    uvicorn.run(app, host=config.host, port=config.port)


if __name__ == "__main__":
    main()
