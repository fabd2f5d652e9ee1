"""Placement scaling: time-to-place grows near-linearly, collision ratio climbs.

Reproduces the qualitative shape of the placement benchmark: doubling the
record count roughly doubles placement time (never worse than 3x here),
while the fraction of records that collide with an earlier one keeps rising
as the frame fills up.
"""

from pathlib import Path

from geoscene import (
    CAMBRIDGE_BOUNDS,
    SceneFrame,
    StackParams,
    benchmark_placement,
    write_scaling_csv,
)

out = Path("demo_out")
out.mkdir(exist_ok=True)

frame = SceneFrame.from_bounds(CAMBRIDGE_BOUNDS)
params = StackParams(cell_size_m=10.0, marker_height_m=1.0, ground_offset_m=0.5)

report = benchmark_placement(
    [1000, 2000, 4000, 8000, 16000], frame, params, seed=2026, repeats=3
)

print(f"{'n':>6}  {'elapsed_ms':>10}  {'collisions':>10}  {'ratio':>6}")
prev = None
for s in report.samples:
    ratio = s.collisions / s.n
    growth = f"  ({s.elapsed_s / prev.elapsed_s:.2f}x time)" if prev else ""
    print(f"{s.n:>6}  {s.elapsed_s * 1000:>10.2f}  {s.collisions:>10}  {ratio:>6.3f}{growth}")
    prev = s

csv_path = out / "scaling.csv"
write_scaling_csv(report, csv_path)
print(f"\nwrote {csv_path}")
