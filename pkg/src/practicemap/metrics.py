"""Interpretation-support analytics over clustered interaction data.

Three views of what a practice cluster actually does:

* E-I indices — per cluster and interaction type, how inward- or
  outward-facing the cluster's interactions are, on the scale −1 (only
  amongst themselves) to +1 (only with outsiders);
* temporal contribution series — distinct posts per UTC time bin, split
  by the author's cluster, with per-bin shares;
* top targets — whom a set of accounts (typically a cluster's archetype
  members) @mentions, retweets, etc. most often.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Iterable, Mapping, Sequence

from .errors import MissingTimestampError
from .records import InteractionRecord

ALL_TYPES = "all"
UNCLUSTERED = "unclustered"

# Week bins are aligned to Monday 00:00 UTC; this anchor is the Monday
# before the UNIX epoch, so epoch-era and modern timestamps bin alike.
_BIN_ANCHOR = datetime(1969, 12, 29, tzinfo=timezone.utc)

Membership = Mapping[str, int]


@dataclass(frozen=True, slots=True)
class EIIndexValue:
    """External minus internal interaction balance for one cluster."""

    cluster: int
    interaction_type: str
    external: int
    internal: int

    @property
    def defined(self) -> bool:
        return (self.external + self.internal) > 0

    @property
    def value(self) -> float | None:
        """(external − internal) / (external + internal), in [−1, 1]."""
        if not self.defined:
            return None
        return (self.external - self.internal) / (self.external + self.internal)


@dataclass(frozen=True, slots=True)
class TemporalBin:
    start: datetime
    count: int
    share: float


@dataclass(frozen=True, slots=True)
class TemporalSeries:
    """Post volume over time for one cluster label (or "unclustered")."""

    cluster: str
    bins: tuple[TemporalBin, ...]


def _membership_of(assignment: Membership | object) -> Membership:
    membership = getattr(assignment, "membership", assignment)
    if not isinstance(membership, Mapping):
        raise TypeError("expected a cluster assignment or a node -> cluster mapping")
    return membership


def ei_index(
    records: Iterable[InteractionRecord],
    assignment: Membership | object,
    cluster: int,
    type_filter: str | None = None,
) -> EIIndexValue:
    """Count one cluster's interactions as internal or external.

    Every record authored by a cluster member counts: internal when the
    target belongs to the same cluster, external otherwise (targets not
    present in the assignment are outsiders). With no matching records
    the index is undefined and flagged, not zero.
    """
    membership = _membership_of(assignment)
    external = internal = 0
    for record in records:
        if type_filter is not None and record.interaction_type != type_filter:
            continue
        if membership.get(record.author_id) != cluster:
            continue
        if membership.get(record.target_id) == cluster:
            internal += 1
        else:
            external += 1
    return EIIndexValue(cluster, type_filter if type_filter is not None else ALL_TYPES, external, internal)


def ei_report(
    records: Sequence[InteractionRecord], assignment: Membership | object
) -> list[EIIndexValue]:
    """E-I values for every cluster, over all types and per type."""
    membership = _membership_of(assignment)
    clusters = sorted(set(membership.values()))
    types = sorted({record.interaction_type for record in records})
    report = []
    for cluster in clusters:
        report.append(ei_index(records, membership, cluster))
        for interaction_type in types:
            report.append(ei_index(records, membership, cluster, interaction_type))
    return report


def timestamp_coverage(records: Sequence[InteractionRecord]) -> float:
    if not records:
        return 0.0
    return sum(1 for r in records if r.timestamp is not None) / len(records)


def temporal_contributions(
    records: Sequence[InteractionRecord],
    assignment: Membership | object,
    bin_width: timedelta = timedelta(weeks=1),
) -> list[TemporalSeries]:
    """Distinct posts per time bin, split by the author's cluster.

    Posts are deduplicated by post_id (a post with one retweet and three
    mentions is still one post), binned into UTC intervals aligned so the
    default one-week width starts bins on Monday 00:00 UTC, and counted
    under the author's cluster or "unclustered". Shares are per bin and
    sum to 1 across labels. Bins with no posts are omitted.
    """
    if bin_width <= timedelta(0):
        raise ValueError(f"bin width must be positive, got {bin_width}")
    membership = _membership_of(assignment)
    missing = sum(1 for r in records if r.timestamp is None)
    if missing:
        raise MissingTimestampError(
            f"temporal contributions need a timestamp on every record, but "
            f"{missing} of {len(records)} records have none; add a timestamp "
            f"column or disable temporal metrics"
        )
    posts: dict[str, InteractionRecord] = {}
    for record in records:
        posts.setdefault(record.post_id, record)
    counts: dict[tuple[datetime, str], int] = Counter()
    totals: dict[datetime, int] = Counter()
    for record in posts.values():
        index = (record.timestamp - _BIN_ANCHOR) // bin_width
        start = _BIN_ANCHOR + index * bin_width
        cluster = membership.get(record.author_id)
        label = UNCLUSTERED if cluster is None else str(cluster)
        counts[(start, label)] += 1
        totals[start] += 1
    by_label: dict[str, list[TemporalBin]] = defaultdict(list)
    for (start, label), count in sorted(counts.items()):
        by_label[label].append(TemporalBin(start, count, count / totals[start]))
    return [TemporalSeries(label, tuple(bins)) for label, bins in sorted(by_label.items())]


def top_targets(
    records: Iterable[InteractionRecord],
    accounts: Iterable[str],
    k: int,
    per_type: bool = True,
) -> dict[str, list[tuple[str, int]]]:
    """The k most frequent targets of the given accounts' interactions.

    Grouped per interaction type, or under "all" when per_type is false.
    Ties are broken by target id ascending. Record order never affects
    the result.
    """
    if k < 1:
        raise ValueError(f"target count must be >= 1, got {k}")
    wanted = set(accounts)
    tallies: dict[str, Counter[str]] = defaultdict(Counter)
    for record in records:
        if record.author_id not in wanted:
            continue
        group = record.interaction_type if per_type else ALL_TYPES
        tallies[group][record.target_id] += 1
    report: dict[str, list[tuple[str, int]]] = {}
    for group in sorted(tallies):
        ranked = sorted(tallies[group].items(), key=lambda item: (-item[1], item[0]))
        report[group] = ranked[:k]
    return report


def cluster_backprojection(assignment: Membership | object) -> list[tuple[str, int]]:
    """(account, cluster) rows for coloring the original interaction network."""
    membership = _membership_of(assignment)
    return [(node, membership[node]) for node in sorted(membership)]
