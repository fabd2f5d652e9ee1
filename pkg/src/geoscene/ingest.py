"""TSV ingestion: parse delimited geo-tagged records, skip malformed rows.

File contract: UTF-8, LF line endings, first line is the exact header
``id<TAB>username<TAB>follower_count<TAB>timestamp<TAB>latitude<TAB>longitude<TAB>text``,
one record per line, no quoting or escaping. Timestamps are ISO-8601 UTC
text ("2013-10-05T14:23:31Z" or with a +00:00 offset, up to 6 fractional
digits, stored at millisecond precision). Rows that do not fit are skipped
and accounted for, never repaired.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import BinaryIO, Sequence, Union

from .geoproject import GeoBounds

COLUMNS = ("id", "username", "follower_count", "timestamp", "latitude", "longitude", "text")

# All required except text, which may legitimately be empty.
_REQUIRED_IDX = range(6)

_TIMESTAMP_RE = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})(?:\.(\d{1,6}))?(?:Z|\+00:00)$"
)

_INT_RE = re.compile(r"^\d+$")


class FormatError(ValueError):
    """Fatal file-level problem: bad header or empty input."""


@dataclass(frozen=True)
class RawRow:
    """One tab-split input line, 1-based line number included."""

    line_number: int
    cells: tuple[str, ...]


@dataclass(frozen=True)
class Rejection:
    """Why a structurally complete row was not turned into a record."""

    line_number: int
    reason: str


@dataclass(frozen=True)
class TweetRecord:
    id: str
    username: str
    follower_count: int
    timestamp: datetime
    latitude: float
    longitude: float
    text: str
    tags: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Dataset:
    """An immutable loaded corpus, chronologically sorted.

    ``skipped`` counts malformed rows (== len(reject_log)); rows that were
    well-formed but outside ``bounds`` are counted in ``out_of_bounds``
    instead, so accepted + skipped + out_of_bounds equals the number of
    non-header input lines.
    """

    records: tuple[TweetRecord, ...]
    bounds: GeoBounds
    skipped: int
    reject_log: tuple[tuple[int, str], ...]
    out_of_bounds: int = 0


def parse_timestamp(text: str) -> datetime:
    """Parse ISO-8601 UTC text to an aware datetime, truncated to milliseconds.

    Raises ValueError for anything that is not an explicit-UTC instant with
    in-range date and time fields.
    """
    m = _TIMESTAMP_RE.match(text)
    if m is None:
        raise ValueError(f"not an ISO-8601 UTC timestamp: {text!r}")
    year, month, day, hour, minute, second = (int(g) for g in m.groups()[:6])
    frac = m.group(7)
    micros = int(frac.ljust(6, "0")) if frac else 0
    micros -= micros % 1000
    return datetime(year, month, day, hour, minute, second, micros, tzinfo=timezone.utc)


def format_timestamp(instant: datetime) -> str:
    """Render a UTC instant the way the TSV files carry it (millisecond Z form)."""
    return f"{instant:%Y-%m-%dT%H:%M:%S}.{instant.microsecond // 1000:03d}Z"


def parse_tsv(
    source: Union[bytes, BinaryIO], header: Sequence[str] = COLUMNS
) -> tuple[list[RawRow], list[tuple[int, str]]]:
    """Split a TSV byte stream into rows, flagging wrong-width lines.

    The first line must equal ``header`` exactly (strict UTF-8); that is a
    fatal FormatError, as is empty input. Data lines are decoded with
    surrogateescape so undecodable bytes survive into cells and get rejected
    per-row later, rather than aborting the load. Returns (rows, errors)
    where errors are (line_number, "column-count") pairs.
    """
    data = source if isinstance(source, bytes) else source.read()
    if isinstance(data, str):
        raise TypeError("parse_tsv expects bytes; open the file in binary mode")
    if data == b"":
        raise FormatError("empty input")

    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()  # trailing newline is file termination, not an empty record
    if not lines:
        raise FormatError("empty input")

    try:
        header_cells = tuple(lines[0].decode("utf-8").split("\t"))
    except UnicodeDecodeError as exc:
        raise FormatError(f"header is not valid UTF-8: {exc}") from None
    expected = tuple(header)
    if header_cells != expected:
        raise FormatError(
            f"header mismatch: expected {list(expected)}, got {list(header_cells)}"
        )

    rows: list[RawRow] = []
    errors: list[tuple[int, str]] = []
    ncols = len(expected)
    for offset, line in enumerate(lines[1:], start=2):
        cells = line.decode("utf-8", "surrogateescape").split("\t")
        if len(cells) != ncols:
            errors.append((offset, "column-count"))
        else:
            rows.append(RawRow(line_number=offset, cells=tuple(cells)))
    return rows, errors


def validate_record(row: RawRow) -> Union[TweetRecord, Rejection]:
    """Turn a width-correct row into a TweetRecord, or say why not.

    Checks run in a fixed order and the first failure wins: invalid-utf8
    (surrogates left by lenient decoding), empty-required-field (every
    column but text), bad-integer (follower_count), bad-timestamp,
    bad-coordinate (latitude then longitude). Rejection is a normal return.
    """
    cells = row.cells
    for cell in cells:
        try:
            cell.encode("utf-8")
        except UnicodeEncodeError:
            return Rejection(row.line_number, "invalid-utf8")

    for idx in _REQUIRED_IDX:
        if cells[idx] == "":
            return Rejection(row.line_number, "empty-required-field")

    if not _INT_RE.match(cells[2]):
        return Rejection(row.line_number, "bad-integer")
    follower_count = int(cells[2])

    try:
        timestamp = parse_timestamp(cells[3])
    except ValueError:
        return Rejection(row.line_number, "bad-timestamp")

    try:
        latitude = float(cells[4])
        longitude = float(cells[5])
    except ValueError:
        return Rejection(row.line_number, "bad-coordinate")
    if not (math.isfinite(latitude) and -90.0 <= latitude <= 90.0):
        return Rejection(row.line_number, "bad-coordinate")
    if not (math.isfinite(longitude) and -180.0 <= longitude <= 180.0):
        return Rejection(row.line_number, "bad-coordinate")

    return TweetRecord(
        id=cells[0],
        username=cells[1],
        follower_count=follower_count,
        timestamp=timestamp,
        latitude=latitude,
        longitude=longitude,
        text=cells[6],
    )


def load_dataset(path: Union[str, Path], bounds: GeoBounds) -> Dataset:
    """Parse, validate, bounds-filter and sort a TSV corpus from disk.

    Malformed rows (wrong width, failed validation, duplicate id) land in
    reject_log; well-formed records outside ``bounds`` are dropped and only
    counted. Records come back sorted by (timestamp, id). Deterministic:
    identical bytes give an identical Dataset, reject_log in line order.
    """
    with open(path, "rb") as fh:
        rows, errors = parse_tsv(fh)

    rejections: list[tuple[int, str]] = list(errors)
    accepted: list[TweetRecord] = []
    out_of_bounds = 0
    seen_ids: set[str] = set()
    for row in rows:
        result = validate_record(row)
        if isinstance(result, Rejection):
            rejections.append((result.line_number, result.reason))
            continue
        if result.id in seen_ids:
            rejections.append((row.line_number, "duplicate-id"))
            continue
        seen_ids.add(result.id)
        if not bounds.contains(result.latitude, result.longitude):
            out_of_bounds += 1
            continue
        accepted.append(result)

    rejections.sort(key=lambda entry: entry[0])
    accepted.sort(key=lambda rec: (rec.timestamp, rec.id))
    return Dataset(
        records=tuple(accepted),
        bounds=bounds,
        skipped=len(rejections),
        reject_log=tuple(rejections),
        out_of_bounds=out_of_bounds,
    )
