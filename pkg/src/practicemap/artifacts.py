"""Readers and writers for the pipeline's file artifacts.

All artifacts are delimited text with a fixed header row, written with
``\n`` line endings so identical runs produce byte-identical files. The
edge and cluster tables use the column names Gephi's Data Laboratory
expects (``Source,Target,Weight`` and a node table keyed by ``Id``); the
edges file must be imported as an *undirected* network.

Weights and other similarity-derived reals are printed with 6 decimal
places. The intermediate vector table instead stores full-precision
``repr`` floats, because downstream stages re-read it and must see
exactly the values an in-process run would use.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .errors import SchemaError
from .metrics import EIIndexValue, TemporalSeries
from .records import format_timestamp, parse_timestamp
from .similarity import SimilarityEdge
from .vectors import PracticeVector

EDGES_HEADER = ("Source", "Target", "Weight")
CLUSTERS_HEADER = ("Id", "Cluster", "IntraClusterWeightedDegree")
ARCHETYPES_HEADER = ("Cluster", "Rank", "Id", "IntraClusterWeightedDegree")
EI_HEADER = ("Cluster", "Type", "External", "Internal", "EIIndex")
TEMPORAL_HEADER = ("BinStart", "Cluster", "Count", "Share")
TARGETS_HEADER = ("Cluster", "Type", "Target", "Count")
BACKPROJECTION_HEADER = ("Id", "Cluster")
VECTORS_HEADER = ("Account", "Aspect", "Direction", "Dimension", "Raw", "Normalized", "Total")


def _weight(value: float) -> str:
    return f"{value:.6f}"


def write_table(
    dest: str | Path | IO[str],
    header: Sequence[str],
    rows: Iterable[Sequence],
    delimiter: str = ",",
) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            write_table(handle, header, rows, delimiter)
        return
    writer = csv.writer(dest, delimiter=delimiter, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def read_table(
    source: str | Path | IO[str],
    expected_header: Sequence[str],
    delimiter: str = ",",
) -> list[list[str]]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return read_table(handle, expected_header, delimiter)
    reader = csv.reader(source, delimiter=delimiter)
    header = next(reader, None)
    if header != list(expected_header):
        raise SchemaError(f"expected header {list(expected_header)}, found {header}")
    return [row for row in reader if row]


def write_edges(
    dest: str | Path | IO[str], edges: Iterable[SimilarityEdge], delimiter: str = ","
) -> None:
    write_table(
        dest,
        EDGES_HEADER,
        ((e.source, e.target, _weight(e.weight)) for e in edges),
        delimiter,
    )


def read_edges(source: str | Path | IO[str], delimiter: str = ",") -> list[SimilarityEdge]:
    return [
        SimilarityEdge(row[0], row[1], float(row[2]))
        for row in read_table(source, EDGES_HEADER, delimiter)
    ]


def write_clusters(
    dest: str | Path | IO[str],
    assignment_membership: Mapping[str, int],
    degrees: Mapping[str, float],
    delimiter: str = ",",
) -> None:
    write_table(
        dest,
        CLUSTERS_HEADER,
        (
            (node, assignment_membership[node], _weight(degrees[node]))
            for node in sorted(assignment_membership)
        ),
        delimiter,
    )


def read_clusters(
    source: str | Path | IO[str], delimiter: str = ","
) -> tuple[dict[str, int], dict[str, float]]:
    membership: dict[str, int] = {}
    degrees: dict[str, float] = {}
    for row in read_table(source, CLUSTERS_HEADER, delimiter):
        membership[row[0]] = int(row[1])
        degrees[row[0]] = float(row[2])
    return membership, degrees


def write_archetypes(
    dest: str | Path | IO[str],
    report: Mapping[int, Sequence[tuple[str, float]]],
    delimiter: str = ",",
) -> None:
    rows = []
    for cluster in sorted(report):
        for rank, (account, degree) in enumerate(report[cluster], start=1):
            rows.append((cluster, rank, account, _weight(degree)))
    write_table(dest, ARCHETYPES_HEADER, rows, delimiter)


def read_archetypes(
    source: str | Path | IO[str], delimiter: str = ","
) -> dict[int, list[tuple[str, float]]]:
    report: dict[int, list[tuple[str, float]]] = {}
    for row in read_table(source, ARCHETYPES_HEADER, delimiter):
        report.setdefault(int(row[0]), []).append((row[2], float(row[3])))
    return report


def write_ei(
    dest: str | Path | IO[str], values: Iterable[EIIndexValue], delimiter: str = ","
) -> None:
    write_table(
        dest,
        EI_HEADER,
        (
            (
                v.cluster,
                v.interaction_type,
                v.external,
                v.internal,
                _weight(v.value) if v.defined else "",
            )
            for v in values
        ),
        delimiter,
    )


def write_temporal(
    dest: str | Path | IO[str], series: Iterable[TemporalSeries], delimiter: str = ","
) -> None:
    rows = []
    for one in series:
        for tbin in one.bins:
            rows.append((format_timestamp(tbin.start), one.cluster, tbin.count, _weight(tbin.share)))
    rows.sort(key=lambda row: (row[0], row[1]))
    write_table(dest, TEMPORAL_HEADER, rows, delimiter)


def write_targets(
    dest: str | Path | IO[str],
    per_cluster: Mapping[int, Mapping[str, Sequence[tuple[str, int]]]],
    delimiter: str = ",",
) -> None:
    rows = []
    for cluster in sorted(per_cluster):
        for interaction_type in sorted(per_cluster[cluster]):
            for target, count in per_cluster[cluster][interaction_type]:
                rows.append((cluster, interaction_type, target, count))
    write_table(dest, TARGETS_HEADER, rows, delimiter)


def write_backprojection(
    dest: str | Path | IO[str], membership: Mapping[str, int], delimiter: str = ","
) -> None:
    write_table(
        dest,
        BACKPROJECTION_HEADER,
        ((node, membership[node]) for node in sorted(membership)),
        delimiter,
    )


def vector_rows(
    raw: Mapping[str, PracticeVector], normalized: Mapping[str, PracticeVector]
) -> list[tuple[str, str, str, str, str, str, str]]:
    """Rows for the vector table, full-precision so they re-read exactly."""
    rows = []
    for account in sorted(normalized):
        norm = normalized[account]
        raw_entries = raw[account].entries
        for dimension in sorted(norm.entries):
            rows.append(
                (
                    account,
                    norm.aspect,
                    norm.direction,
                    dimension,
                    repr(raw_entries[dimension]),
                    repr(norm.entries[dimension]),
                    repr(norm.total),
                )
            )
    return rows


def write_vector_table(
    dest: str | Path | IO[str], rows: Iterable[Sequence[str]], delimiter: str = ","
) -> None:
    write_table(dest, VECTORS_HEADER, rows, delimiter)


def read_vector_table(
    source: str | Path | IO[str], delimiter: str = ","
) -> dict[tuple[str, str], dict[str, PracticeVector]]:
    """Rebuild normalized vectors, grouped by (aspect, direction).

    Groups appear in file order, entries in row order, so a re-read
    reproduces exactly the vectors an in-process run would hold.
    """
    grouped: dict[tuple[str, str], dict[str, dict[str, float]]] = {}
    totals: dict[tuple[str, str, str], float] = {}
    for row in read_table(source, VECTORS_HEADER, delimiter):
        account, aspect, direction, dimension, _, normalized_value, total = row
        key = (aspect, direction)
        grouped.setdefault(key, {}).setdefault(account, {})[dimension] = float(normalized_value)
        totals[(aspect, direction, account)] = float(total)
    result: dict[tuple[str, str], dict[str, PracticeVector]] = {}
    for (aspect, direction), accounts in grouped.items():
        result[(aspect, direction)] = {
            account: PracticeVector(
                account_id=account,
                aspect=aspect,
                direction=direction,
                entries=entries,
                total=totals[(aspect, direction, account)],
                normalized=True,
            )
            for account, entries in accounts.items()
        }
    return result


def write_json(dest: str | Path, payload: object) -> None:
    with open(dest, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def parse_bin_start(text: str) -> datetime:
    return parse_timestamp(text)
