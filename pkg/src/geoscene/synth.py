"""Synthetic fixtures: TSV corpora with a corruption ledger, campus heightmaps.

The original LADAR collection and tweet extract are not redistributable, so
tests and demos run on generated stand-ins shaped like them: a few thousand
records over a five-month window inside campus-scale bounds, and a gently
rolling terrain grid with building-like blocks. The corpus generator records
exactly which lines it corrupted and why, which is what ingest accounting is
checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .geoproject import GeoBounds
from .ingest import COLUMNS, format_timestamp
from .terrain import Heightmap

DEFAULT_WINDOW = (
    datetime(2013, 10, 1, tzinfo=timezone.utc),
    datetime(2014, 2, 28, tzinfo=timezone.utc),
)

# Cycle of corruption kinds; each maps to the rejection reason ingest must log.
_CORRUPTION_KINDS = (
    "column-count",
    "bad-timestamp",
    "bad-coordinate",
    "bad-integer",
    "empty-required-field",
    "invalid-utf8",
    "duplicate-id",
)

_WORDS = (
    "coffee", "exam", "snow", "danger", "library", "party", "lecture", "bridge",
    "pizza", "river", "robot", "hack", "midterm", "sunset", "crowded", "quiet",
)


@dataclass(frozen=True)
class CorpusLedger:
    """What the generator wrote: totals plus every corrupted line and reason."""

    total_rows: int
    clean_rows: int
    corrupted: tuple[tuple[int, str], ...]  # (line_number, expected reason)


def _clean_row(i: int, bounds: GeoBounds, window, rng: np.random.Generator) -> list[str]:
    start, end = window
    span_ms = int((end - start).total_seconds() * 1000)
    ts = start + timedelta(milliseconds=int(rng.integers(0, span_ms)))
    lat = rng.uniform(bounds.min_lat, bounds.max_lat)
    lon = rng.uniform(bounds.min_lon, bounds.max_lon)
    words = rng.choice(len(_WORDS), size=int(rng.integers(2, 6)))
    text = " ".join(_WORDS[w] for w in words)
    return [
        f"t{i:06d}",
        f"user{int(rng.integers(0, 40))}",
        str(int(rng.integers(0, 20000))),
        format_timestamp(ts),
        f"{lat:.6f}",
        f"{lon:.6f}",
        text,
    ]


def _corrupt(
    cells: list[str], kind: str, prev_clean_id: Optional[str], rng: np.random.Generator
) -> bytes:
    """Damage one row so ingest rejects it with exactly ``kind`` as the reason."""
    if kind == "column-count":
        cells = cells[:-1]
    elif kind == "bad-timestamp":
        cells[3] = "2013-13-40T99:99:99Z"
    elif kind == "bad-coordinate":
        cells[4] = f"{91.0 + float(rng.uniform(0, 5)):.4f}"
    elif kind == "bad-integer":
        cells[2] = "-42"
    elif kind == "empty-required-field":
        cells[1] = ""
    elif kind == "invalid-utf8":
        line = "\t".join(cells).encode("utf-8")
        return line + b" \xff\xfe"
    elif kind == "duplicate-id":
        # Needs an already-accepted id; caller guarantees one exists.
        cells[0] = prev_clean_id
    else:
        raise ValueError(f"unknown corruption kind {kind!r}")
    return "\t".join(cells).encode("utf-8")


def make_corpus(
    n_rows: int,
    bounds: GeoBounds,
    corrupt_count: int = 0,
    seed: int = 0,
    window=DEFAULT_WINDOW,
) -> tuple[bytes, CorpusLedger]:
    """Generate a TSV corpus as bytes plus the ledger of planted corruptions.

    Rows are valid, unique-id, in-bounds records except for corrupt_count
    rows at deterministic pseudo-random positions, each damaged so ingest
    rejects it with a known reason. Line numbers in the ledger are 1-based
    file lines (the header is line 1). The first row is always clean so a
    duplicate-id corruption has a target.
    """
    if corrupt_count < 0 or corrupt_count >= n_rows:
        raise ValueError(f"corrupt_count must be in [0, n_rows), got {corrupt_count}")
    rng = np.random.default_rng(seed)

    # Data rows live on lines 2..n_rows+1; keep line 2 clean.
    candidates = np.arange(3, n_rows + 2)
    corrupt_lines = set(
        int(v) for v in rng.choice(candidates, size=corrupt_count, replace=False)
    )

    lines = ["\t".join(COLUMNS).encode("utf-8")]
    ledger: list[tuple[int, str]] = []
    prev_clean_id: Optional[str] = None
    kind_cursor = 0
    for i in range(n_rows):
        line_number = i + 2
        cells = _clean_row(i, bounds, window, rng)
        if line_number in corrupt_lines:
            kind = _CORRUPTION_KINDS[kind_cursor % len(_CORRUPTION_KINDS)]
            kind_cursor += 1
            lines.append(_corrupt(cells, kind, prev_clean_id, rng))
            ledger.append((line_number, kind))
        else:
            prev_clean_id = cells[0]
            lines.append("\t".join(cells).encode("utf-8"))

    payload = b"\n".join(lines) + b"\n"
    return payload, CorpusLedger(
        total_rows=n_rows,
        clean_rows=n_rows - corrupt_count,
        corrupted=tuple(sorted(ledger)),
    )


def write_corpus(
    path: Union[str, Path],
    n_rows: int,
    bounds: GeoBounds,
    corrupt_count: int = 0,
    seed: int = 0,
    window=DEFAULT_WINDOW,
) -> CorpusLedger:
    """make_corpus straight to a file; returns the ledger."""
    payload, ledger = make_corpus(n_rows, bounds, corrupt_count, seed, window)
    Path(path).write_bytes(payload)
    return ledger


def make_heightmap(
    cols: int, rows: int, resolution_m: float = 1.0, seed: int = 0
) -> Heightmap:
    """Campus-like terrain: gentle swells plus rectangular building blocks."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:rows, 0:cols].astype(np.float64)

    ground = (
        2.0 * np.sin(x / max(cols, 2) * 2.8)
        + 1.5 * np.cos(y / max(rows, 2) * 3.4)
        + 0.5 * np.sin((x + y) / max(cols + rows, 2) * 5.0)
    )
    heights = ground - ground.min()

    n_buildings = max(1, (rows * cols) // 2500)
    for _ in range(n_buildings):
        h = float(rng.uniform(6.0, 25.0))
        w = int(rng.integers(3, max(4, cols // 8)))
        d = int(rng.integers(3, max(4, rows // 8)))
        c0 = int(rng.integers(0, max(1, cols - w)))
        r0 = int(rng.integers(0, max(1, rows - d)))
        heights[r0 : r0 + d, c0 : c0 + w] += h

    return Heightmap(resolution_m=resolution_m, heights=heights)
