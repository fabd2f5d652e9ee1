"""Terrain walkthrough: heightmap -> smoothed grid -> mesh -> chunks -> STL.

Builds a campus-scale synthetic grid, knocks the jagged edges off with a few
Laplacian passes, meshes it, splits the mesh under the 65,000-vertex import
budget, and writes a binary STL you can open in any mesh viewer.
"""

from pathlib import Path

from geoscene import chunk_mesh, export_stl, read_stl, smooth, triangulate
from geoscene.synth import make_heightmap
from geoscene.terrain import save_heightmap

out = Path("demo_out")
out.mkdir(exist_ok=True)

hm = make_heightmap(400, 300, resolution_m=2.0, seed=11)
save_heightmap(hm, out / "heightmap.txt")
print(f"heightmap: {hm.cols}x{hm.rows} cells at {hm.resolution_m} m")
print(f"elevation range: {hm.heights.min():.1f} .. {hm.heights.max():.1f} m")

smoothed = smooth(hm, iterations=3, lam=0.5)
roughness_before = abs(hm.heights[1:, :] - hm.heights[:-1, :]).mean()
roughness_after = abs(smoothed.heights[1:, :] - smoothed.heights[:-1, :]).mean()
print(f"mean row-to-row step: {roughness_before:.3f} m -> {roughness_after:.3f} m")

mesh = triangulate(smoothed)
print(f"mesh: {len(mesh.vertices)} vertices, {len(mesh.triangles)} triangles")

chunks = chunk_mesh(mesh, max_vertices=65_000)
print(f"chunks under the 65,000-vertex budget: {len(chunks)}")
for c in chunks:
    print(f"  chunk {c.chunk_id}: {len(c.vertices):6d} vertices, {len(c.triangles):6d} triangles")

stl_path = out / "terrain.stl"
written = export_stl(chunks, stl_path)
print(f"\nwrote {stl_path} ({written:,} bytes)")

normals, tris = read_stl(stl_path)
print(f"re-imported {len(tris)} triangles; normals all unit-ish: "
      f"{abs((normals ** 2).sum(axis=1) - 1.0).max():.2e} max deviation")
