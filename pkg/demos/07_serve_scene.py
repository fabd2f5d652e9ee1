"""Stand up the HTTP/JSON service on generated fixture data.

Writes a corpus, a heightmap and a config file under demo_out/, then boots
the service. Once it is up, try:

    curl localhost:8030/health
    curl localhost:8030/scene
    curl "localhost:8030/tweets?from=2013-10-01T00:00:00Z&to=2013-11-01T00:00:00Z"
    curl -X POST localhost:8030/query -H 'content-type: application/json' \
         -d '{"keyword": "danger"}'
    curl localhost:8030/users/user3/path
    curl "localhost:8030/stats?cell_size=50"
    curl -X POST localhost:8030/admin/reload

This is the same thing as: python -m geoscene.service --config demo_out/config.json
"""

import json
from pathlib import Path

from geoscene import CAMBRIDGE_BOUNDS
from geoscene.service import main
from geoscene.synth import make_heightmap, write_corpus
from geoscene.terrain import save_heightmap

out = Path("demo_out")
out.mkdir(exist_ok=True)

write_corpus(out / "service_corpus.tsv", 4000, CAMBRIDGE_BOUNDS, seed=23)
save_heightmap(make_heightmap(80, 82, resolution_m=10.0, seed=24), out / "service_heightmap.txt")

config = {
    "dataset": str(out / "service_corpus.tsv"),
    "heightmap": str(out / "service_heightmap.txt"),
    "bounds": {
        "min_lat": CAMBRIDGE_BOUNDS.min_lat,
        "min_lon": CAMBRIDGE_BOUNDS.min_lon,
        "max_lat": CAMBRIDGE_BOUNDS.max_lat,
        "max_lon": CAMBRIDGE_BOUNDS.max_lon,
    },
    "port": 8030,
    "tag_rules": [{"keyword": "danger", "tag": "skull"}],
    "smoothing": {"iterations": 3, "lambda": 0.5},
}
config_path = out / "config.json"
config_path.write_text(json.dumps(config, indent=2))
print(f"wrote {config_path}; serving on port {config['port']} (Ctrl-C to stop)")

main(["--config", str(config_path)])
