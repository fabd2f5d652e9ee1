"""Builders shared by the test modules: records, datasets, random corpora."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import numpy as np

from geoscene import Dataset, GeoBounds, TweetRecord

T0 = datetime(2013, 10, 1, tzinfo=timezone.utc)

WORDS = (
    "coffee", "exam", "snow", "danger", "library", "party", "lecture",
    "bridge", "pizza", "river", "SNOW", "Danger", "quiet", "crowded",
)


def record(
    rid: str,
    *,
    ts: datetime | None = None,
    minutes: float = 0.0,
    lat: float = 42.3535,
    lon: float = -71.0945,
    username: str = "alice",
    text: str = "hello",
    followers: int = 10,
    tags: frozenset[str] = frozenset(),
) -> TweetRecord:
    if ts is None:
        ts = T0 + timedelta(minutes=minutes)
    return TweetRecord(
        id=rid,
        username=username,
        follower_count=followers,
        timestamp=ts,
        latitude=lat,
        longitude=lon,
        text=text,
        tags=tags,
    )


def dataset(records, bounds: GeoBounds) -> Dataset:
    """Dataset from loose records, sorted the way load_dataset sorts."""
    ordered = tuple(sorted(records, key=lambda r: (r.timestamp, r.id)))
    return Dataset(records=ordered, bounds=bounds, skipped=0, reject_log=(), out_of_bounds=0)


def random_dataset(
    n: int, bounds: GeoBounds, seed: int, n_users: int = 12
) -> Dataset:
    """n random in-bounds records with word-salad text, unique ids."""
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n):
        words = rng.choice(len(WORDS), size=int(rng.integers(1, 6)))
        records.append(
            record(
                f"r{i:05d}",
                ts=T0 + timedelta(milliseconds=int(rng.integers(0, 10_000_000_000))),
                lat=float(rng.uniform(bounds.min_lat, bounds.max_lat)),
                lon=float(rng.uniform(bounds.min_lon, bounds.max_lon)),
                username=f"user{int(rng.integers(0, n_users))}",
                text=" ".join(WORDS[w] for w in words),
                followers=int(rng.integers(0, 9000)),
            )
        )
    return dataset(records, bounds)
