"""Projection walkthrough: lat/lon to metres and back.

The reference campus bounds span about 0.74 km east-west by 0.78 km
north-south. Corners land exactly on the frame corners, and the round trip
is accurate to well under a nanodegree.
"""

import numpy as np

from geoscene import CAMBRIDGE_BOUNDS, SceneFrame, project, unproject

frame = SceneFrame.from_bounds(CAMBRIDGE_BOUNDS)
b = frame.bounds
print(f"bounds: ({b.min_lat}, {b.min_lon}) .. ({b.max_lat}, {b.max_lon})")
print(f"scene:  {frame.width_m:.2f} m wide (E-W) x {frame.depth_m:.2f} m deep (N-S)")

for label, lat, lon in [
    ("southwest corner", b.min_lat, b.min_lon),
    ("northeast corner", b.max_lat, b.max_lon),
    ("centre", (b.min_lat + b.max_lat) / 2, (b.min_lon + b.max_lon) / 2),
]:
    pt = project(lat, lon, frame)
    print(f"{label:18s} ({lat:.5f}, {lon:.5f}) -> x={pt.x:8.2f}  y={pt.y:8.2f}")

rng = np.random.default_rng(0)
lats = rng.uniform(b.min_lat, b.max_lat, 100_000)
lons = rng.uniform(b.min_lon, b.max_lon, 100_000)
worst = 0.0
for lat, lon in zip(lats, lons):
    pt = project(lat, lon, frame)
    back = unproject(pt.x, pt.y, frame)
    worst = max(worst, abs(back[0] - lat), abs(back[1] - lon))
print(f"\nworst round-trip error over 100k points: {worst:.2e} degrees")
