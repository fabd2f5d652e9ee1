import io
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoscene import (
    COLUMNS,
    FormatError,
    GeoBounds,
    RawRow,
    Rejection,
    TweetRecord,
    format_timestamp,
    load_dataset,
    parse_timestamp,
    parse_tsv,
    validate_record,
)
from geoscene.synth import make_corpus, write_corpus

HEADER = "\t".join(COLUMNS).encode()

GOOD_CELLS = (
    "t1",
    "alice",
    "120",
    "2013-10-05T14:23:31.000Z",
    "42.3535",
    "-71.0945",
    "snow on the bridge",
)


def tsv(*rows: bytes) -> bytes:
    return b"\n".join((HEADER,) + rows) + b"\n"


def row_bytes(cells=GOOD_CELLS, **overrides) -> bytes:
    cells = list(cells)
    names = {name: i for i, name in enumerate(COLUMNS)}
    for key, value in overrides.items():
        cells[names[key]] = value
    return "\t".join(cells).encode()


class TestParseTimestamp:
    def test_z_and_offset_forms(self):
        expect = datetime(2013, 10, 5, 14, 23, 31, 251000, tzinfo=timezone.utc)
        assert parse_timestamp("2013-10-05T14:23:31.251Z") == expect
        assert parse_timestamp("2013-10-05T14:23:31.251+00:00") == expect

    def test_truncates_to_milliseconds(self):
        ts = parse_timestamp("2013-10-05T14:23:31.251999Z")
        assert ts.microsecond == 251000

    @pytest.mark.parametrize(
        "bad",
        [
            "2013-13-40T99:99:99Z",  # out-of-range fields
            "2013-10-05 14:23:31Z",  # no T
            "2013-10-05T14:23:31",  # no zone
            "2013-10-05T14:23:31+01:00",  # not UTC
            "not a date",
            "",
        ],
    )
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_timestamp(bad)

    def test_format_round_trip(self):
        text = "2014-02-28T23:59:59.999Z"
        assert format_timestamp(parse_timestamp(text)) == text


class TestParseTsv:
    def test_minimal_well_formed_file(self):
        rows, errors = parse_tsv(tsv(row_bytes()))
        assert len(rows) == 1 and errors == []
        assert rows[0] == RawRow(line_number=2, cells=GOOD_CELLS)

    def test_accepts_binary_stream(self):
        rows, errors = parse_tsv(io.BytesIO(tsv(row_bytes())))
        assert len(rows) == 1 and errors == []

    def test_missing_field_is_column_count_error(self):
        short = b"\t".join(row_bytes().split(b"\t")[:-1])
        rows, errors = parse_tsv(tsv(short))
        assert rows == [] and errors == [(2, "column-count")]

    def test_extra_field_is_column_count_error(self):
        rows, errors = parse_tsv(tsv(row_bytes() + b"\textra"))
        assert rows == [] and errors == [(2, "column-count")]

    def test_header_mismatch_is_fatal(self):
        data = b"id\tuser\n" + row_bytes() + b"\n"
        with pytest.raises(FormatError, match="header mismatch"):
            parse_tsv(data)

    def test_empty_input_is_fatal(self):
        with pytest.raises(FormatError, match="empty"):
            parse_tsv(b"")

    def test_header_only_is_valid_and_empty(self):
        rows, errors = parse_tsv(HEADER + b"\n")
        assert rows == [] and errors == []

    def test_interior_blank_line_is_column_count_error(self):
        rows, errors = parse_tsv(tsv(row_bytes(), b"", row_bytes(id="t2")))
        assert len(rows) == 2
        assert errors == [(3, "column-count")]

    def test_corpus_errors_match_generator_ledger(self, bounds):
        payload, ledger = make_corpus(1000, bounds, corrupt_count=20, seed=42)
        rows, errors = parse_tsv(payload)
        planted_column_errors = [
            entry for entry in ledger.corrupted if entry[1] == "column-count"
        ]
        assert errors == planted_column_errors
        assert len(rows) == 1000 - len(planted_column_errors)


class TestValidateRecord:
    def make_row(self, **overrides) -> RawRow:
        cells = row_bytes(**overrides).decode().split("\t")
        return RawRow(line_number=7, cells=tuple(cells))

    def test_happy_path_has_empty_tags(self):
        rec = validate_record(self.make_row())
        assert isinstance(rec, TweetRecord)
        assert rec.tags == frozenset()
        assert rec.follower_count == 120
        assert rec.latitude == 42.3535

    @pytest.mark.parametrize(
        "overrides,reason",
        [
            (dict(latitude="91.0"), "bad-coordinate"),
            (dict(latitude="-90.5"), "bad-coordinate"),
            (dict(longitude="181.0"), "bad-coordinate"),
            (dict(latitude="nan"), "bad-coordinate"),
            (dict(latitude="abc"), "bad-coordinate"),
            (dict(timestamp="2013-13-40T99:99:99Z"), "bad-timestamp"),
            (dict(timestamp="yesterday"), "bad-timestamp"),
            (dict(follower_count="-3"), "bad-integer"),
            (dict(follower_count="12.5"), "bad-integer"),
            (dict(follower_count="many"), "bad-integer"),
            (dict(username=""), "empty-required-field"),
            (dict(id=""), "empty-required-field"),
        ],
    )
    def test_rejections(self, overrides, reason):
        result = validate_record(self.make_row(**overrides))
        assert result == Rejection(line_number=7, reason=reason)

    def test_empty_text_is_allowed(self):
        rec = validate_record(self.make_row(text=""))
        assert isinstance(rec, TweetRecord)
        assert rec.text == ""

    def test_boundary_coordinates_accepted(self):
        rec = validate_record(self.make_row(latitude="90", longitude="-180"))
        assert isinstance(rec, TweetRecord)

    def test_invalid_utf8_detected_via_lenient_decode(self):
        line = row_bytes()[:-1] + b"\xff"
        rows, errors = parse_tsv(tsv(line))
        assert errors == []
        result = validate_record(rows[0])
        assert result == Rejection(line_number=2, reason="invalid-utf8")

    def test_first_failing_check_wins(self):
        # bad integer and bad timestamp together: integer is checked first
        result = validate_record(
            self.make_row(follower_count="-1", timestamp="nope")
        )
        assert result.reason == "bad-integer"


class TestLoadDataset:
    def test_all_valid_inside_bounds(self, tmp_path, bounds):
        path = tmp_path / "corpus.tsv"
        write_corpus(path, 50, bounds, corrupt_count=0, seed=1)
        ds = load_dataset(path, bounds)
        assert len(ds.records) == 50
        assert ds.skipped == 0 and ds.reject_log == () and ds.out_of_bounds == 0

    def test_sorted_by_timestamp_then_id(self, tmp_path, bounds):
        path = tmp_path / "corpus.tsv"
        write_corpus(path, 200, bounds, corrupt_count=0, seed=2)
        ds = load_dataset(path, bounds)
        keys = [(rec.timestamp, rec.id) for rec in ds.records]
        assert keys == sorted(keys)

    def test_out_of_bounds_counted_separately(self, tmp_path, bounds):
        inside = row_bytes()
        outside = row_bytes(id="t2", latitude="10.0")
        path = tmp_path / "corpus.tsv"
        path.write_bytes(tsv(inside, outside))
        ds = load_dataset(path, bounds)
        assert [rec.id for rec in ds.records] == ["t1"]
        assert ds.out_of_bounds == 1
        assert ds.skipped == 0 and ds.reject_log == ()

    def test_duplicate_id_rejected_with_reason(self, tmp_path, bounds):
        path = tmp_path / "corpus.tsv"
        path.write_bytes(tsv(row_bytes(), row_bytes()))
        ds = load_dataset(path, bounds)
        assert len(ds.records) == 1
        assert ds.reject_log == ((3, "duplicate-id"),)

    def test_unreadable_file(self, tmp_path, bounds):
        with pytest.raises(OSError):
            load_dataset(tmp_path / "missing.tsv", bounds)

    def test_deterministic_across_runs(self, tmp_path, bounds):
        path = tmp_path / "corpus.tsv"
        write_corpus(path, 300, bounds, corrupt_count=12, seed=3)
        assert load_dataset(path, bounds) == load_dataset(path, bounds)

    def test_campus_scale_corpus_loads(self, tmp_path, bounds):
        # ~6,000 records over a five-month window inside campus bounds.
        path = tmp_path / "big.tsv"
        ledger = write_corpus(path, 6000, bounds, corrupt_count=0, seed=4)
        ds = load_dataset(path, bounds)
        assert len(ds.records) == ledger.clean_rows == 6000
        times = [rec.timestamp for rec in ds.records]
        assert times == sorted(times)
        assert times[0] >= datetime(2013, 10, 1, tzinfo=timezone.utc)
        assert times[-1] <= datetime(2014, 2, 28, tzinfo=timezone.utc)


# Fuzzed accounting: accepted + column-count + rejections + out-of-bounds
# always equals the number of non-header lines.
_cell_text = st.text(
    alphabet=st.characters(blacklist_characters="\t\n", blacklist_categories=("Cs",)),
    max_size=12,
)
_line = st.lists(_cell_text, min_size=5, max_size=9).map("\t".join)


class TestAccounting:
    @given(lines=st.lists(_line, max_size=40))
    @settings(max_examples=200, deadline=None)
    def test_every_line_is_accounted_for(self, tmp_path_factory, lines):
        bounds = GeoBounds(min_lat=42.0, min_lon=-72.0, max_lat=43.0, max_lon=-71.0)
        payload = HEADER + b"\n"
        if lines:
            payload += "\n".join(lines).encode() + b"\n"
        path = tmp_path_factory.mktemp("fuzz") / "corpus.tsv"
        path.write_bytes(payload)
        ds = load_dataset(path, bounds)
        assert (
            len(ds.records) + len(ds.reject_log) + ds.out_of_bounds == len(lines)
        )
        assert ds.skipped == len(ds.reject_log)
        for rec in ds.records:
            assert -90 <= rec.latitude <= 90
            assert -180 <= rec.longitude <= 180
            assert rec.follower_count >= 0
            assert bounds.contains(rec.latitude, rec.longitude)
