"""Analytics tour: tagging, time filters, search, user paths, spatial clusters.

Everything runs against an immutable in-memory dataset; each call is a pure
read, so these are exactly the operations the HTTP service exposes.
"""

from datetime import timedelta
from pathlib import Path

from geoscene import (
    CAMBRIDGE_BOUNDS,
    SceneFrame,
    TagRule,
    TimeInterval,
    cluster_stats,
    filter_time,
    load_dataset,
    search,
    tag_keywords,
    user_path,
)
from geoscene.synth import write_corpus

out = Path("demo_out")
out.mkdir(exist_ok=True)
corpus = out / "analytics_corpus.tsv"
write_corpus(corpus, 3000, CAMBRIDGE_BOUNDS, seed=13)

ds = load_dataset(corpus, CAMBRIDGE_BOUNDS)
frame = SceneFrame.from_bounds(CAMBRIDGE_BOUNDS)
print(f"loaded {len(ds.records)} records")

# Keyword tagging: records mentioning "danger" get the skull marker class.
tagged = tag_keywords(ds, [TagRule(keyword="danger", tag="skull")])
skulls = [rec for rec in tagged.records if "skull" in rec.tags]
print(f"\n{len(skulls)} records tagged 'skull' via the danger rule")
print(f"  e.g. @{skulls[0].username}: {skulls[0].text!r}")

# Time filtering: a closed one-week window.
start = ds.records[0].timestamp
week = TimeInterval(start, start + timedelta(days=7))
in_week = filter_time(ds, week)
print(f"\nfirst week of the corpus: {len(in_week)} records")

# String search: case-insensitive substring.
hits = search(ds, "SNOW")
print(f"search 'SNOW': {len(hits)} matches (case-insensitive)")

# User path: one user's consecutive locations.
busiest = max({rec.username for rec in ds.records},
              key=lambda name: sum(rec.username == name for rec in ds.records))
path = user_path(ds, busiest)
print(f"\nbusiest user @{busiest}: {len(path.tweet_ids)} posts, {len(path.edges)} path edges")

# Spatial clustering: per-cell counts over a 50 m grid.
stats = cluster_stats(ds, frame, cell_size_m=50.0)
top = sorted(stats.counts.items(), key=lambda kv: -kv[1])[:5]
print(f"\nbusiest 50 m cells ({len(stats.counts)} occupied):")
for (cx, cy), count in top:
    print(f"  cell ({cx:2d},{cy:2d}) around ({cx * 50 + 25:5.0f} m, {cy * 50 + 25:5.0f} m): {count} records")
assert sum(stats.counts.values()) == len(ds.records)
