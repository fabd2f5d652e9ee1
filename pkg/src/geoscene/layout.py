"""3D placement: terrain-anchored chronological stacks, query walls, scaling runs.

Co-location is a shared square grid cell rather than a physics collider:
records in the same cell stack bottom-to-top in timestamp order. A
"collision" is any record that had to stack on top of another (stack index
above zero), which is what the placement benchmark counts while timing.
"""

from __future__ import annotations

import csv
import gc
import math
import time
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .geoproject import GeoBounds, OutOfBoundsError, SceneFrame, ScenePoint, project
from .ingest import Dataset, TweetRecord
from .terrain import Heightmap, surface_height


class PlacementError(ValueError):
    """A record could not be placed in the given frame."""


@dataclass(frozen=True)
class StackParams:
    """Stacking knobs: cell size (co-location), vertical spacing, ground lift."""

    cell_size_m: float = 2.0
    marker_height_m: float = 1.0
    ground_offset_m: float = 0.5

    def __post_init__(self):
        for name in ("cell_size_m", "marker_height_m", "ground_offset_m"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class WallParams:
    """Query-wall geometry: grid columns, slot spacing, altitude over scene centre."""

    columns: int = 10
    slot_spacing_m: float = 3.0
    altitude_m: float = 30.0

    def __post_init__(self):
        if self.columns < 1:
            raise ValueError(f"columns must be positive, got {self.columns}")
        if self.slot_spacing_m <= 0:
            raise ValueError(f"slot spacing must be positive, got {self.slot_spacing_m}")


@dataclass(frozen=True)
class Placement:
    record_id: str
    position: ScenePoint
    stack_index: int
    model_class: str


@dataclass(frozen=True)
class QueryWall:
    """Matches assigned to row-major wall slots, rows growing upward."""

    keyword: str
    origin: ScenePoint
    columns: int
    slot_spacing_m: float
    assignments: tuple[tuple[str, int, int], ...]


@dataclass(frozen=True)
class ScalingSample:
    n: int
    elapsed_s: float
    collisions: int


@dataclass(frozen=True)
class ScalingReport:
    """Placement timings and collision counts for ascending record counts."""

    samples: tuple[ScalingSample, ...]


def place(
    ds: Dataset,
    frame: SceneFrame,
    terrain: Optional[Heightmap],
    params: StackParams,
) -> list[Placement]:
    """Position every record in the scene, stacking co-located ones by time.

    Each record projects to (x, y); its base z is the bilinear terrain
    height there plus ground_offset_m (just the offset with no terrain, or
    off the terrain's edge). Records sharing a floor(x/cell), floor(y/cell)
    cell stack chronologically: z = base + stack_index * marker_height_m.
    Records tagged "skull" get that model class, everything else is "bird".

    The result is sorted by (timestamp, id) and independent of the input
    record order. A record outside the frame raises PlacementError naming it.
    """
    ordered = sorted(ds.records, key=lambda rec: (rec.timestamp, rec.id))
    placements: list[Placement] = []
    occupancy: dict[tuple[int, int], int] = {}
    cell = params.cell_size_m
    for rec in ordered:
        try:
            pt = project(rec.latitude, rec.longitude, frame)
        except OutOfBoundsError as exc:
            raise PlacementError(f"record {rec.id!r} outside frame: {exc}") from None
        key = (math.floor(pt.x / cell), math.floor(pt.y / cell))
        index = occupancy.get(key, 0)
        occupancy[key] = index + 1

        base = params.ground_offset_m
        if terrain is not None:
            height = surface_height(terrain, pt.x, pt.y)
            if height is not None:
                base += height
        z = base + index * params.marker_height_m
        placements.append(
            Placement(
                record_id=rec.id,
                position=ScenePoint(x=pt.x, y=pt.y, z=z),
                stack_index=index,
                model_class="skull" if "skull" in rec.tags else "bird",
            )
        )
    return placements


def count_collisions(placements: Sequence[Placement]) -> int:
    """Records that had to stack on top of another one."""
    return sum(1 for p in placements if p.stack_index > 0)


def build_wall(
    ds: Dataset,
    match_ids: Sequence[str],
    frame: SceneFrame,
    params: WallParams,
    keyword: str = "",
) -> QueryWall:
    """Assign matched ids to wall slots in input order, row-major, rows upward.

    The wall's lower-left anchor floats at params.altitude_m above the scene
    centre. An empty match list gives an empty wall; an id missing from the
    dataset raises ValueError.
    """
    known = {rec.id for rec in ds.records}
    for match in match_ids:
        if match not in known:
            raise ValueError(f"match id {match!r} is not in the dataset")
    origin = ScenePoint(x=frame.width_m / 2.0, y=frame.depth_m / 2.0, z=params.altitude_m)
    assignments = tuple(
        (match, i // params.columns, i % params.columns)
        for i, match in enumerate(match_ids)
    )
    return QueryWall(
        keyword=keyword,
        origin=origin,
        columns=params.columns,
        slot_spacing_m=params.slot_spacing_m,
        assignments=assignments,
    )


def _random_dataset(n: int, bounds: GeoBounds, rng: np.random.Generator) -> Dataset:
    """n uniform records inside bounds with random millisecond timestamps."""
    lats = rng.uniform(bounds.min_lat, bounds.max_lat, n)
    lons = rng.uniform(bounds.min_lon, bounds.max_lon, n)
    start = datetime(2013, 10, 1, tzinfo=timezone.utc)
    offsets_ms = rng.integers(0, 150 * 24 * 3600 * 1000, n)
    records = [
        TweetRecord(
            id=f"bm{i:07d}",
            username=f"user{i % 97}",
            follower_count=int(rng.integers(0, 5000)),
            timestamp=start + timedelta(milliseconds=int(offsets_ms[i])),
            latitude=float(lats[i]),
            longitude=float(lons[i]),
            text="",
        )
        for i in range(n)
    ]
    records.sort(key=lambda rec: (rec.timestamp, rec.id))
    return Dataset(
        records=tuple(records), bounds=bounds, skipped=0, reject_log=(), out_of_bounds=0
    )


def benchmark_placement(
    n_values: Sequence[int],
    frame: SceneFrame,
    params: StackParams,
    seed: int,
    repeats: int = 3,
    warmup: int = 1,
) -> ScalingReport:
    """Time place() over synthetic corpora of each size in n_values.

    Record positions and timestamps are drawn from an RNG seeded with
    (seed, n), so collision counts are reproducible. What is measured is
    always one place() call; measurement hygiene around it: ``warmup``
    untimed runs per size, the sizes interleaved round-robin for
    ``repeats`` rounds (so load drift hits every size alike, not one
    size's whole sample), the garbage collector paused while the clock
    runs, and the minimum per size reported.
    """
    if list(n_values) != sorted(n_values) or any(n < 1 for n in n_values):
        raise ValueError(f"n_values must be ascending positive integers: {n_values}")
    if repeats < 1:
        raise ValueError(f"repeats must be positive, got {repeats}")
    if warmup < 0:
        raise ValueError(f"warmup must be non-negative, got {warmup}")

    datasets = {
        n: _random_dataset(n, frame.bounds, np.random.default_rng([seed, n]))
        for n in n_values
    }
    best: dict[int, float] = {n: math.inf for n in n_values}
    collisions: dict[int, int] = {}
    for n in n_values:
        # The collision-count pass doubles as the first warmup run.
        collisions[n] = count_collisions(place(datasets[n], frame, None, params))
        for _ in range(warmup - 1):
            place(datasets[n], frame, None, params)

    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(repeats):
            for n in n_values:
                t0 = time.perf_counter()
                place(datasets[n], frame, None, params)
                elapsed = time.perf_counter() - t0
                best[n] = min(best[n], elapsed)
    finally:
        if gc_was_enabled:
            gc.enable()

    samples = [
        ScalingSample(n=n, elapsed_s=best[n], collisions=collisions[n])
        for n in n_values
    ]
    return ScalingReport(samples=tuple(samples))


def write_scaling_csv(report: ScalingReport, path: Union[str, Path]) -> None:
    """Dump a ScalingReport as CSV: n, elapsed_ms, collisions, collision_ratio."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "elapsed_ms", "collisions", "collision_ratio"])
        for s in report.samples:
            writer.writerow([s.n, s.elapsed_s * 1000.0, s.collisions, s.collisions / s.n])
