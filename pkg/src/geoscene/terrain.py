"""Heightmap terrain: grid file I/O, smoothing, meshing, chunking, binary STL.

Grid file format (ASCII): line 1 ``ncols <int>``, line 2 ``nrows <int>``,
line 3 ``cellsize <float metres>``, then nrows lines of ncols space-separated
floats, northernmost row first. In memory the grid is stored south-first so
that y = row * resolution_m grows northward, matching the scene frame.

Binary STL layout: 80-byte zero-padded ASCII header, little-endian uint32
triangle count, then 50 bytes per triangle (normal + 3 vertices as float32
triples, plus a zero uint16 attribute byte count).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .geoproject import ScenePoint

VERTEX_BUDGET = 65_000

_STL_HEADER_TEXT = b"geoscene terrain mesh"

_STL_TRI_DTYPE = np.dtype(
    [
        ("normal", "<f4", (3,)),
        ("v1", "<f4", (3,)),
        ("v2", "<f4", (3,)),
        ("v3", "<f4", (3,)),
        ("attr", "<u2"),
    ]
)
assert _STL_TRI_DTYPE.itemsize == 50


class HeightmapFormatError(ValueError):
    """The grid file violates the documented ASCII format."""


@dataclass(frozen=True)
class Heightmap:
    """Regular elevation grid; heights[row, col] with row 0 at the south edge."""

    resolution_m: float
    heights: np.ndarray

    def __post_init__(self):
        if self.resolution_m <= 0:
            raise ValueError(f"resolution must be positive, got {self.resolution_m}")
        if self.heights.ndim != 2 or self.heights.size == 0:
            raise ValueError("heights must be a non-empty 2-D grid")
        if not np.all(np.isfinite(self.heights)):
            raise ValueError("heights must all be finite")

    @property
    def rows(self) -> int:
        return self.heights.shape[0]

    @property
    def cols(self) -> int:
        return self.heights.shape[1]


@dataclass(frozen=True)
class Mesh:
    """Triangle mesh: vertices (N, 3) float, triangles (M, 3) vertex indices."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        verts = self.vertices
        tris = self.triangles
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise ValueError(f"vertices must be (N, 3), got {verts.shape}")
        if tris.ndim != 2 or tris.shape[1] != 3:
            raise ValueError(f"triangles must be (M, 3), got {tris.shape}")
        if len(tris) and (tris.min() < 0 or tris.max() >= len(verts)):
            raise ValueError("triangle index out of range")
        if len(tris):
            a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
            if np.any((a == b) | (b == c) | (a == c)):
                raise ValueError("degenerate triangle: repeated vertex index")


@dataclass(frozen=True)
class MeshChunk(Mesh):
    """A mesh piece remapped to local indices, within the vertex budget."""

    chunk_id: int = 0


def load_heightmap(path: Union[str, Path]) -> Heightmap:
    """Read the ASCII grid format, flipping rows so row 0 is the south edge."""
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise HeightmapFormatError(f"grid file is not ASCII: {exc}") from None
    lines = text.split("\n")
    while lines and lines[-1].strip() == "":
        lines.pop()
    if len(lines) < 4:
        raise HeightmapFormatError("file too short for header plus one row")

    header: dict[str, str] = {}
    for key, line in zip(("ncols", "nrows", "cellsize"), lines[:3]):
        parts = line.split()
        if len(parts) != 2 or parts[0] != key:
            raise HeightmapFormatError(f"expected '{key} <value>', got {line!r}")
        header[key] = parts[1]
    try:
        ncols = int(header["ncols"])
        nrows = int(header["nrows"])
        cellsize = float(header["cellsize"])
    except ValueError as exc:
        raise HeightmapFormatError(f"bad header value: {exc}") from None
    if ncols < 1 or nrows < 1:
        raise HeightmapFormatError(f"grid must be at least 1x1, got {ncols}x{nrows}")

    data_lines = lines[3:]
    if len(data_lines) != nrows:
        raise HeightmapFormatError(
            f"expected {nrows} data rows, found {len(data_lines)}"
        )
    cells = [line.split() for line in data_lines]
    for i, row in enumerate(cells):
        if len(row) != ncols:
            raise HeightmapFormatError(
                f"row {i + 1} has {len(row)} values, expected {ncols}"
            )
    try:
        grid = np.array(cells, dtype=np.float64)
    except ValueError as exc:
        raise HeightmapFormatError(f"non-numeric cell value: {exc}") from None
    if not np.all(np.isfinite(grid)):
        raise HeightmapFormatError("grid contains non-finite values")

    # File order is north-first; storage is south-first.
    return Heightmap(resolution_m=cellsize, heights=np.flipud(grid).copy())


def save_heightmap(hm: Heightmap, path: Union[str, Path]) -> None:
    """Write the ASCII grid format (north row first), inverse of load_heightmap."""
    out = [f"ncols {hm.cols}", f"nrows {hm.rows}", f"cellsize {float(hm.resolution_m)!r}"]
    for row in np.flipud(hm.heights):
        out.append(" ".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(out) + "\n", encoding="ascii")


def smooth(hm: Heightmap, iterations: int, lam: float) -> Heightmap:
    """Laplacian-relax interior cells toward their 4-neighbour mean.

    Each iteration is double-buffered (every update reads the previous
    iteration's grid): h' = h + lam * (mean4 - h). Border cells never move,
    so grids without interior cells come back unchanged.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be positive, got {iterations}")
    if not (0.0 < lam <= 1.0):
        raise ValueError(f"lambda must be in (0, 1], got {lam}")
    h = hm.heights.astype(np.float64, copy=True)
    if hm.rows < 3 or hm.cols < 3:
        return Heightmap(resolution_m=hm.resolution_m, heights=h)
    for _ in range(iterations):
        mean4 = (h[:-2, 1:-1] + h[2:, 1:-1] + h[1:-1, :-2] + h[1:-1, 2:]) / 4.0
        interior = h[1:-1, 1:-1]
        nxt = h.copy()
        nxt[1:-1, 1:-1] = interior + lam * (mean4 - interior)
        h = nxt
    return Heightmap(resolution_m=hm.resolution_m, heights=h)


def triangulate(hm: Heightmap, frame_origin: ScenePoint = ScenePoint(0.0, 0.0, 0.0)) -> Mesh:
    """Grid to triangle mesh: one vertex per cell, two CCW triangles per square.

    Vertex (row, col) sits at (col, row) * resolution_m plus the frame
    origin, at its grid height. Winding is counter-clockwise seen from +z,
    giving 2 * (cols-1) * (rows-1) triangles.
    """
    rows, cols = hm.rows, hm.cols
    if rows < 2 or cols < 2:
        raise ValueError(f"grid must be at least 2x2 to mesh, got {cols}x{rows}")

    col_idx, row_idx = np.meshgrid(np.arange(cols), np.arange(rows))
    vertices = np.column_stack(
        [
            col_idx.ravel() * hm.resolution_m + frame_origin.x,
            row_idx.ravel() * hm.resolution_m + frame_origin.y,
            hm.heights.ravel() + frame_origin.z,
        ]
    )

    c, r = np.meshgrid(np.arange(cols - 1), np.arange(rows - 1))
    i00 = (r * cols + c).ravel()
    i10 = i00 + 1
    i01 = i00 + cols
    i11 = i01 + 1
    tris = np.empty((2 * len(i00), 3), dtype=np.int64)
    tris[0::2] = np.column_stack([i00, i10, i11])
    tris[1::2] = np.column_stack([i00, i11, i01])
    return Mesh(vertices=vertices, triangles=tris)


def chunk_mesh(mesh: Mesh, max_vertices: int = VERTEX_BUDGET) -> list[MeshChunk]:
    """Partition a mesh into chunks whose local vertex counts fit a budget.

    Greedy scan in triangle order: a chunk closes when admitting the next
    triangle would push its (post-duplication) vertex count past
    ``max_vertices``. Every input triangle lands in exactly one chunk with
    indices remapped; vertices used by several chunks are duplicated into
    each, so chunks are self-contained.
    """
    if max_vertices < 3:
        raise ValueError(f"max_vertices must be at least 3, got {max_vertices}")

    chunks: list[MeshChunk] = []
    local_of: dict[int, int] = {}
    chunk_verts: list[int] = []
    chunk_tris: list[tuple[int, int, int]] = []

    def flush() -> None:
        if not chunk_tris:
            return
        chunks.append(
            MeshChunk(
                vertices=mesh.vertices[chunk_verts].copy(),
                triangles=np.array(chunk_tris, dtype=np.int64),
                chunk_id=len(chunks),
            )
        )
        local_of.clear()
        chunk_verts.clear()
        chunk_tris.clear()

    for a, b, c in mesh.triangles:
        tri = (int(a), int(b), int(c))
        fresh = sum(1 for v in tri if v not in local_of)
        if chunk_tris and len(chunk_verts) + fresh > max_vertices:
            flush()
        local = []
        for v in tri:
            idx = local_of.get(v)
            if idx is None:
                idx = len(chunk_verts)
                local_of[v] = idx
                chunk_verts.append(v)
            local.append(idx)
        chunk_tris.append((local[0], local[1], local[2]))
    flush()
    return chunks


def _triangle_soup(meshes: Iterable[Mesh]) -> np.ndarray:
    """Stack all meshes' triangles into an (M, 3, 3) float32 coordinate array."""
    pieces = [
        m.vertices.astype(np.float32)[m.triangles]
        for m in meshes
        if len(m.triangles)
    ]
    if not pieces:
        return np.empty((0, 3, 3), dtype=np.float32)
    return np.concatenate(pieces, axis=0)


def export_stl(mesh_or_chunks: Union[Mesh, Sequence[Mesh]], path: Union[str, Path]) -> int:
    """Write binary STL; returns bytes written (84 + 50 per triangle).

    Normals are recomputed from the winding (unit length, or zero for
    degenerate geometry); the attribute byte count is always 0. Vertex
    coordinates are written as float32, so a re-import is bit-exact at
    32-bit precision.
    """
    meshes = [mesh_or_chunks] if isinstance(mesh_or_chunks, Mesh) else list(mesh_or_chunks)
    soup = _triangle_soup(meshes)

    edge1 = soup[:, 1, :].astype(np.float64) - soup[:, 0, :]
    edge2 = soup[:, 2, :].astype(np.float64) - soup[:, 0, :]
    normals = np.cross(edge1, edge2)
    lengths = np.linalg.norm(normals, axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        normals = np.where(lengths > 0.0, normals / lengths, 0.0)

    body = np.zeros(len(soup), dtype=_STL_TRI_DTYPE)
    body["normal"] = normals.astype(np.float32)
    body["v1"] = soup[:, 0, :]
    body["v2"] = soup[:, 1, :]
    body["v3"] = soup[:, 2, :]

    header = _STL_HEADER_TEXT.ljust(80, b"\x00")
    count = np.uint32(len(soup)).tobytes()
    payload = header + count + body.tobytes()
    Path(path).write_bytes(payload)
    return len(payload)


def read_stl(path: Union[str, Path]) -> tuple[np.ndarray, np.ndarray]:
    """Read binary STL back as (normals (M, 3), triangles (M, 3, 3)) float32."""
    raw = Path(path).read_bytes()
    if len(raw) < 84:
        raise ValueError(f"not a binary STL: {len(raw)} bytes is shorter than header")
    count = int(np.frombuffer(raw, dtype="<u4", count=1, offset=80)[0])
    expected = 84 + 50 * count
    if len(raw) != expected:
        raise ValueError(
            f"binary STL length mismatch: {count} triangles need {expected} bytes, file has {len(raw)}"
        )
    body = np.frombuffer(raw, dtype=_STL_TRI_DTYPE, count=count, offset=84)
    normals = body["normal"].copy()
    tris = np.stack([body["v1"], body["v2"], body["v3"]], axis=1)
    return normals, tris


def surface_height(hm: Heightmap, x: float, y: float) -> Optional[float]:
    """Bilinear terrain height at scene (x, y); None outside the grid extent."""
    max_x = (hm.cols - 1) * hm.resolution_m
    max_y = (hm.rows - 1) * hm.resolution_m
    if x < 0.0 or x > max_x or y < 0.0 or y > max_y:
        return None
    gx = x / hm.resolution_m
    gy = y / hm.resolution_m
    c0 = min(int(gx), hm.cols - 2) if hm.cols > 1 else 0
    r0 = min(int(gy), hm.rows - 2) if hm.rows > 1 else 0
    fx = gx - c0
    fy = gy - r0
    h = hm.heights
    if hm.cols == 1 and hm.rows == 1:
        return float(h[0, 0])
    if hm.cols == 1:
        return float(h[r0, 0] * (1 - fy) + h[r0 + 1, 0] * fy)
    if hm.rows == 1:
        return float(h[0, c0] * (1 - fx) + h[0, c0 + 1] * fx)
    south = h[r0, c0] * (1 - fx) + h[r0, c0 + 1] * fx
    north = h[r0 + 1, c0] * (1 - fx) + h[r0 + 1, c0 + 1] * fx
    return float(south * (1 - fy) + north * fy)
