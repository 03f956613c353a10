"""Parsing and validation of delimited interaction and attribute files.

Two input shapes are supported:

* interaction files: one directed, typed event per row
  (``post_id, author_id, target_id, interaction_type[, timestamp]``);
* attribute files: one ``(account_id, dimension, value)`` observation per
  row, tagged on ingest with an aspect label such as ``hashtags`` or
  ``topics``.

Header names are matched case-insensitively; ``tweet_id`` / ``tweet_type``
are accepted as synonyms for ``post_id`` / ``interaction_type``. Malformed
rows are skipped and reported rather than aborting the parse: large social
datasets routinely contain dirty rows. A missing required column, by
contrast, is a fatal :class:`~practicemap.errors.SchemaError`.
"""

from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from math import fsum
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

from .errors import InputError, SchemaError

INTERACTION_COLUMNS = ("post_id", "author_id", "target_id", "interaction_type")
ATTRIBUTE_COLUMNS = ("account_id", "dimension", "value")
TIMESTAMP_COLUMN = "timestamp"

# Synonyms seen in the wild for the canonical column names.
_COLUMN_ALIASES = {"tweet_id": "post_id", "tweet_type": "interaction_type"}


@dataclass(frozen=True, slots=True)
class InteractionRecord:
    """One directed, typed interaction event (author -> target)."""

    post_id: str
    author_id: str
    target_id: str
    interaction_type: str
    timestamp: datetime | None = None


@dataclass(frozen=True, slots=True)
class AttributeRecord:
    """One (account, aspect, dimension, value) observation."""

    account_id: str
    aspect: str
    dimension: str
    value: float


@dataclass(frozen=True, slots=True)
class SkippedRow:
    """A data row rejected during parsing, with the line number and reason."""

    line: int
    reason: str
    detail: str = ""


@dataclass(frozen=True, slots=True)
class InteractionParseResult:
    records: tuple[InteractionRecord, ...]
    skipped: tuple[SkippedRow, ...]

    @property
    def total_rows(self) -> int:
        return len(self.records) + len(self.skipped)


@dataclass(frozen=True, slots=True)
class AttributeParseResult:
    aspect: str
    records: tuple[AttributeRecord, ...]
    skipped: tuple[SkippedRow, ...]
    raw_rows_accepted: int = 0

    @property
    def total_rows(self) -> int:
        return self.raw_rows_accepted + len(self.skipped)


@dataclass(frozen=True)
class ValidationReport:
    """Row and coverage counts for a parsed interaction file."""

    accepted: int
    skipped: int
    skipped_by_reason: dict[str, int] = field(default_factory=dict)
    distinct_posts: int = 0
    distinct_authors: int = 0
    distinct_targets: int = 0
    distinct_accounts: int = 0
    distinct_types: int = 0
    timestamp_coverage: float = 0.0

    def as_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "skipped": self.skipped,
            "skipped_by_reason": dict(sorted(self.skipped_by_reason.items())),
            "distinct_posts": self.distinct_posts,
            "distinct_authors": self.distinct_authors,
            "distinct_targets": self.distinct_targets,
            "distinct_accounts": self.distinct_accounts,
            "distinct_types": self.distinct_types,
            "timestamp_coverage": self.timestamp_coverage,
        }


@dataclass(frozen=True)
class AttributeValidationReport:
    """Row counts for a parsed attribute file."""

    aspect: str
    accepted: int
    skipped: int
    skipped_by_reason: dict[str, int] = field(default_factory=dict)
    distinct_accounts: int = 0
    distinct_dimensions: int = 0

    def as_dict(self) -> dict:
        return {
            "aspect": self.aspect,
            "accepted": self.accepted,
            "skipped": self.skipped,
            "skipped_by_reason": dict(sorted(self.skipped_by_reason.items())),
            "distinct_accounts": self.distinct_accounts,
            "distinct_dimensions": self.distinct_dimensions,
        }


@contextmanager
def _as_text(source: str | Path | IO[str]) -> Iterator[IO[str]]:
    """Yield a text stream for a path or pass an open stream through."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise InputError(f"input file not found: {path}")
        with open(path, "r", encoding="utf-8", newline="") as handle:
            yield handle
    else:
        yield source


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 instant or UNIX seconds into an aware UTC datetime.

    Sub-second precision is truncated; naive ISO timestamps are taken as UTC.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty timestamp")
    try:
        seconds = float(text)
    except ValueError:
        pass
    else:
        return datetime.fromtimestamp(int(seconds), tz=timezone.utc)
    normalized = text[:-1] + "+00:00" if text.endswith(("Z", "z")) else text
    parsed = datetime.fromisoformat(normalized)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(instant: datetime) -> str:
    return instant.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _header_map(header: Sequence[str], required: Sequence[str], optional: Sequence[str] = ()) -> dict[str, int]:
    """Map canonical column names to indices, or raise SchemaError."""
    positions: dict[str, int] = {}
    for index, raw_name in enumerate(header):
        name = raw_name.strip().lower()
        name = _COLUMN_ALIASES.get(name, name)
        if name not in positions:
            positions[name] = index
    for name in required:
        if name not in positions:
            raise SchemaError(f"required column '{name}' missing from header {list(header)!r}")
    return {name: positions[name] for name in (*required, *optional) if name in positions}


def parse_interactions(
    source: str | Path | IO[str], delimiter: str = ","
) -> InteractionParseResult:
    """Parse an interaction file into records, preserving file order.

    Rows with an unparseable timestamp, or with an empty author, target, or
    type field, are skipped and collected into the result's ``skipped`` list.
    """
    records: list[InteractionRecord] = []
    skipped: list[SkippedRow] = []
    with _as_text(source) as stream:
        reader = csv.reader(stream, delimiter=delimiter)
        header = next(reader, None)
        if header is None:
            raise SchemaError("input is empty: no header row")
        columns = _header_map(header, INTERACTION_COLUMNS, (TIMESTAMP_COLUMN,))
        has_timestamp = TIMESTAMP_COLUMN in columns
        for row in reader:
            if not row:
                continue
            line = reader.line_num
            if len(row) <= max(columns.values()):
                skipped.append(SkippedRow(line, "short_row", f"{len(row)} fields"))
                continue
            post_id = row[columns["post_id"]].strip()
            author_id = row[columns["author_id"]].strip()
            target_id = row[columns["target_id"]].strip()
            interaction_type = row[columns["interaction_type"]].strip()
            if not author_id:
                skipped.append(SkippedRow(line, "empty_author"))
                continue
            if not target_id:
                skipped.append(SkippedRow(line, "empty_target"))
                continue
            if not interaction_type:
                skipped.append(SkippedRow(line, "empty_type"))
                continue
            timestamp = None
            if has_timestamp:
                raw = row[columns[TIMESTAMP_COLUMN]].strip()
                if raw:
                    try:
                        timestamp = parse_timestamp(raw)
                    except ValueError:
                        skipped.append(SkippedRow(line, "bad_timestamp", raw))
                        continue
            records.append(
                InteractionRecord(post_id, author_id, target_id, interaction_type, timestamp)
            )
    return InteractionParseResult(tuple(records), tuple(skipped))


def parse_attributes(
    source: str | Path | IO[str], aspect: str, delimiter: str = ","
) -> AttributeParseResult:
    """Parse an attribute file, tagging records with ``aspect``.

    Duplicate (account, dimension) rows are summed; order of first
    appearance is preserved. Negative or non-numeric values are skipped
    and reported.
    """
    if not aspect:
        raise ValueError("aspect label must be non-empty")
    sums: dict[tuple[str, str], list[float]] = defaultdict(list)
    order: list[tuple[str, str]] = []
    skipped: list[SkippedRow] = []
    accepted_rows = 0
    with _as_text(source) as stream:
        reader = csv.reader(stream, delimiter=delimiter)
        header = next(reader, None)
        if header is None:
            raise SchemaError("input is empty: no header row")
        columns = _header_map(header, ATTRIBUTE_COLUMNS)
        for row in reader:
            if not row:
                continue
            line = reader.line_num
            if len(row) <= max(columns.values()):
                skipped.append(SkippedRow(line, "short_row", f"{len(row)} fields"))
                continue
            account_id = row[columns["account_id"]].strip()
            dimension = row[columns["dimension"]].strip()
            raw_value = row[columns["value"]].strip()
            if not account_id:
                skipped.append(SkippedRow(line, "empty_account"))
                continue
            if not dimension:
                skipped.append(SkippedRow(line, "empty_dimension"))
                continue
            try:
                value = float(raw_value)
            except ValueError:
                skipped.append(SkippedRow(line, "bad_value", raw_value))
                continue
            if value < 0:
                skipped.append(SkippedRow(line, "negative_value", raw_value))
                continue
            key = (account_id, dimension)
            if key not in sums:
                order.append(key)
            sums[key].append(value)
            accepted_rows += 1
    # fsum keeps aggregation exactly order-independent.
    records = tuple(
        AttributeRecord(account, aspect, dimension, fsum(sums[(account, dimension)]))
        for account, dimension in order
    )
    return AttributeParseResult(aspect, records, tuple(skipped), accepted_rows)


def validation_report(
    result: InteractionParseResult | AttributeParseResult,
) -> ValidationReport | AttributeValidationReport:
    """Summarize a parse result: row counts, distinct entities, coverage."""
    by_reason = dict(Counter(row.reason for row in result.skipped))
    if isinstance(result, AttributeParseResult):
        return AttributeValidationReport(
            aspect=result.aspect,
            accepted=result.raw_rows_accepted,
            skipped=len(result.skipped),
            skipped_by_reason=by_reason,
            distinct_accounts=len({r.account_id for r in result.records}),
            distinct_dimensions=len({r.dimension for r in result.records}),
        )
    records = result.records
    authors = {r.author_id for r in records}
    targets = {r.target_id for r in records}
    with_timestamp = sum(1 for r in records if r.timestamp is not None)
    return ValidationReport(
        accepted=len(records),
        skipped=len(result.skipped),
        skipped_by_reason=by_reason,
        distinct_posts=len({r.post_id for r in records}),
        distinct_authors=len(authors),
        distinct_targets=len(targets),
        distinct_accounts=len(authors | targets),
        distinct_types=len({r.interaction_type for r in records}),
        timestamp_coverage=(with_timestamp / len(records)) if records else 0.0,
    )


def write_interactions(
    records: Iterable[InteractionRecord], dest: str | Path | IO[str], delimiter: str = ","
) -> None:
    """Write interaction records in the canonical input format."""
    _write_rows(
        dest,
        delimiter,
        (*INTERACTION_COLUMNS, TIMESTAMP_COLUMN),
        (
            (
                r.post_id,
                r.author_id,
                r.target_id,
                r.interaction_type,
                format_timestamp(r.timestamp) if r.timestamp is not None else "",
            )
            for r in records
        ),
    )


def write_attributes(
    records: Iterable[AttributeRecord], dest: str | Path | IO[str], delimiter: str = ","
) -> None:
    """Write attribute records in the canonical input format."""
    _write_rows(
        dest,
        delimiter,
        ATTRIBUTE_COLUMNS,
        ((r.account_id, r.dimension, repr(r.value)) for r in records),
    )


def _write_rows(
    dest: str | Path | IO[str], delimiter: str, header: Sequence[str], rows: Iterable[Sequence]
) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            _write_rows(handle, delimiter, header, rows)
        return
    writer = csv.writer(dest, delimiter=delimiter, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def records_from_text(text: str, delimiter: str = ",") -> InteractionParseResult:
    """Convenience wrapper: parse interactions from an in-memory string."""
    return parse_interactions(io.StringIO(text), delimiter=delimiter)
