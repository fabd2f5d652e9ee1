"""Analytic reads over a loaded Dataset: tagging, filtering, search, paths, grids.

Everything here is a pure function of an immutable Dataset, so concurrent
callers need no coordination. String matching is case-insensitive substring
with ASCII-only case folding (full Unicode folding is a known limitation).
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, replace
from datetime import datetime

from .geoproject import SceneFrame, project
from .ingest import Dataset, TweetRecord

_ASCII_FOLD = str.maketrans(string.ascii_uppercase, string.ascii_lowercase)


class EmptyQueryError(ValueError):
    """Search keyword is empty after trimming whitespace."""

    def __init__(self):
        super().__init__("empty-query")


def _fold(text: str) -> str:
    return text.translate(_ASCII_FOLD)


@dataclass(frozen=True)
class TagRule:
    """Records whose text contains ``keyword`` gain ``tag``."""

    keyword: str
    tag: str
    case_sensitive: bool = False

    def __post_init__(self):
        if not self.keyword:
            raise ValueError("rule keyword must be non-empty")

    def matches(self, text: str) -> bool:
        if self.case_sensitive:
            return self.keyword in text
        return _fold(self.keyword) in _fold(text)


@dataclass(frozen=True)
class TimeInterval:
    """Closed interval of UTC instants."""

    start: datetime
    end: datetime

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"interval start {self.start} after end {self.end}")

    def covers(self, instant: datetime) -> bool:
        return self.start <= instant <= self.end


@dataclass(frozen=True)
class UserPath:
    """One user's chronologically ordered records plus consecutive edges."""

    username: str
    tweet_ids: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class CellCounts:
    """Record counts per square grid cell of the scene plane."""

    cell_size_m: float
    counts: dict[tuple[int, int], int]


def tag_keywords(ds: Dataset, rules: list[TagRule]) -> Dataset:
    """Return a new Dataset with rule tags added to matching records.

    A record gains every tag whose rule keyword occurs in its text
    (substring; case-insensitive unless the rule says otherwise). All other
    fields, ordering and counts are untouched; an empty rule list returns
    the input unchanged. Idempotent because tags are a set.
    """
    if not rules:
        return ds
    out: list[TweetRecord] = []
    for rec in ds.records:
        gained = {rule.tag for rule in rules if rule.matches(rec.text)}
        if gained:
            rec = replace(rec, tags=rec.tags | gained)
        out.append(rec)
    return replace(ds, records=tuple(out))


def filter_time(ds: Dataset, interval: TimeInterval) -> list[str]:
    """Ids of records with start <= timestamp <= end, chronological order."""
    return [rec.id for rec in ds.records if interval.covers(rec.timestamp)]


def search(ds: Dataset, keyword: str) -> list[str]:
    """Ids of records whose text contains the trimmed keyword, chronological.

    Matching is case-insensitive substring on the trimmed keyword. Raises
    EmptyQueryError when nothing is left after trimming.
    """
    needle = keyword.strip()
    if not needle:
        raise EmptyQueryError()
    needle = _fold(needle)
    return [rec.id for rec in ds.records if needle in _fold(rec.text)]


def user_path(ds: Dataset, username: str) -> UserPath:
    """A user's records sorted by (timestamp, id), edged consecutively.

    Unknown usernames give an empty path rather than an error.
    """
    mine = sorted(
        (rec for rec in ds.records if rec.username == username),
        key=lambda rec: (rec.timestamp, rec.id),
    )
    ids = tuple(rec.id for rec in mine)
    edges = tuple((ids[i], ids[i + 1]) for i in range(len(ids) - 1))
    return UserPath(username=username, tweet_ids=ids, edges=edges)


def cluster_stats(ds: Dataset, frame: SceneFrame, cell_size_m: float) -> CellCounts:
    """Bin records into floor(x/cell), floor(y/cell) grid cells and count."""
    if cell_size_m <= 0:
        raise ValueError(f"cell size must be positive, got {cell_size_m}")
    counts: dict[tuple[int, int], int] = {}
    for rec in ds.records:
        pt = project(rec.latitude, rec.longitude, frame)
        cell = (math.floor(pt.x / cell_size_m), math.floor(pt.y / cell_size_m))
        counts[cell] = counts.get(cell, 0) + 1
    return CellCounts(cell_size_m=cell_size_m, counts=counts)
