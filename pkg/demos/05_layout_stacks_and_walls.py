"""Layout walkthrough: chronological stacks on terrain and a floating query wall.

Co-located records pile up bottom-to-top in timestamp order; records matching
a query get reassigned to wall slots above the scene centre.
"""

from collections import Counter
from pathlib import Path

from geoscene import (
    CAMBRIDGE_BOUNDS,
    SceneFrame,
    StackParams,
    TagRule,
    WallParams,
    build_wall,
    count_collisions,
    load_dataset,
    place,
    search,
    smooth,
    tag_keywords,
)
from geoscene.synth import make_heightmap, write_corpus

out = Path("demo_out")
out.mkdir(exist_ok=True)
corpus = out / "layout_corpus.tsv"
write_corpus(corpus, 2500, CAMBRIDGE_BOUNDS, seed=17)

frame = SceneFrame.from_bounds(CAMBRIDGE_BOUNDS)
ds = tag_keywords(
    load_dataset(corpus, CAMBRIDGE_BOUNDS),
    [TagRule(keyword="danger", tag="skull")],
)
terrain = smooth(make_heightmap(80, 82, resolution_m=10.0, seed=18), 3, 0.5)

params = StackParams(cell_size_m=2.0, marker_height_m=1.0, ground_offset_m=0.5)
placements = place(ds, frame, terrain, params)
print(f"placed {len(placements)} markers; {count_collisions(placements)} stacked on another")

models = Counter(p.model_class for p in placements)
print(f"marker classes: {dict(models)}")

deepest = max(placements, key=lambda p: p.stack_index)
stack_cell = [
    p for p in placements
    if int(p.position.x // 2) == int(deepest.position.x // 2)
    and int(p.position.y // 2) == int(deepest.position.y // 2)
]
stack_cell.sort(key=lambda p: p.stack_index)
print(f"\ntallest stack ({len(stack_cell)} markers, bottom to top):")
for p in stack_cell:
    print(f"  #{p.stack_index}  {p.record_id}  z={p.position.z:6.2f} m  [{p.model_class}]")

matches = search(ds, "danger")
wall = build_wall(ds, matches, frame, WallParams(columns=10, slot_spacing_m=3.0), keyword="danger")
print(f"\nquery wall for 'danger': {len(wall.assignments)} slots, "
      f"anchored at ({wall.origin.x:.0f}, {wall.origin.y:.0f}, {wall.origin.z:.0f}) m")
rows = 1 + max((row for _, row, _ in wall.assignments), default=0)
print(f"grid: {rows} rows x {wall.columns} columns")
