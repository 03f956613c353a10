"""Per-account sparse practice vectors.

Interaction records are counted into vectors whose dimensions are
"<counterparty> <interaction_type>" labels; attribute records (hashtag
counts, topic affinities, ...) are summed into vectors keyed by their raw
dimension labels. Vectors are sum-normalized so they describe how an
account distributes its activity, not how much of it there is, and
accounts below a minimum raw activity total can be filtered out before
comparison.

Direction modes for interaction vectors:

* ``outgoing`` — what the account does to others (keys use the target);
* ``incoming`` — what others do to the account (keys use the author);
* ``combined`` — both at once, stored under ``out:``/``in:`` key prefixes,
  with each sub-block normalized separately by its own total.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from math import fsum
from typing import Iterable, Mapping

from .errors import ConfigError
from .records import AttributeRecord, InteractionRecord

OUTGOING = "outgoing"
INCOMING = "incoming"
COMBINED = "combined"
DIRECTIONS = (OUTGOING, INCOMING, COMBINED)

# Default aspect label for vectors built from interaction records.
INTERACTION_ASPECT = "interactions"

# Sub-block key prefixes used by the combined direction mode.
OUT_PREFIX = "out:"
IN_PREFIX = "in:"


@dataclass(frozen=True)
class PracticeVector:
    """A sparse map of practice dimensions to non-negative values.

    ``total`` always holds the raw (pre-normalization) entry sum, so the
    activity filter keeps working after normalization.
    """

    account_id: str
    aspect: str
    direction: str
    entries: dict[str, float]
    total: float
    normalized: bool = False

    @property
    def degenerate(self) -> bool:
        """True when the vector has no activity at all (zero magnitude)."""
        return self.total == 0

    def magnitude(self) -> float:
        """Euclidean length of the entry vector."""
        return fsum(value * value for value in self.entries.values()) ** 0.5


def dimension_key(counterparty: str, interaction_type: str) -> str:
    """Form the "<counterparty> <interaction_type>" dimension label."""
    return f"{counterparty} {interaction_type}"


def accumulate_interaction_vectors(
    records: Iterable[InteractionRecord],
    direction: str = OUTGOING,
    type_filter: Iterable[str] | None = None,
    include_self: bool = True,
    aspect: str = INTERACTION_ASPECT,
) -> dict[str, PracticeVector]:
    """Count interaction records into raw per-account vectors.

    Outgoing vectors key each record by its target, incoming vectors by
    its author; combined mode gives every account one vector holding both
    sub-blocks. Accumulation is order-independent: any permutation of the
    records produces the same vectors. An empty record sequence yields an
    empty map.
    """
    if direction not in DIRECTIONS:
        raise ConfigError(f"unknown direction mode {direction!r}; expected one of {DIRECTIONS}")
    wanted = set(type_filter) if type_filter is not None else None
    counts: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    for record in records:
        if wanted is not None and record.interaction_type not in wanted:
            continue
        if not include_self and record.author_id == record.target_id:
            continue
        if direction == OUTGOING:
            counts[record.author_id][dimension_key(record.target_id, record.interaction_type)] += 1
        elif direction == INCOMING:
            counts[record.target_id][dimension_key(record.author_id, record.interaction_type)] += 1
        else:
            counts[record.author_id][
                OUT_PREFIX + dimension_key(record.target_id, record.interaction_type)
            ] += 1
            counts[record.target_id][
                IN_PREFIX + dimension_key(record.author_id, record.interaction_type)
            ] += 1
    return {
        account: PracticeVector(
            account_id=account,
            aspect=aspect,
            direction=direction,
            entries=dict(sorted(entry_map.items())),
            total=float(sum(entry_map.values())),
        )
        for account, entry_map in sorted(counts.items())
    }


def accumulate_attribute_vectors(
    records: Iterable[AttributeRecord], direction: str = OUTGOING
) -> dict[str, PracticeVector]:
    """Sum attribute records into raw per-account vectors.

    All records must share one aspect label. Zero-valued dimensions are
    not stored, but an account whose records are all zero still gets a
    (degenerate) vector, so it can be reported rather than silently lost.
    Attribute vectors carry no inherent direction; they are labeled
    outgoing, the account-does-this reading.
    """
    aspect: str | None = None
    parts: dict[str, dict[str, list[float]]] = defaultdict(lambda: defaultdict(list))
    for record in records:
        if aspect is None:
            aspect = record.aspect
        elif record.aspect != aspect:
            raise ValueError(
                f"mixed aspects in one accumulation: {aspect!r} and {record.aspect!r}"
            )
        parts[record.account_id][record.dimension].append(record.value)
    vectors: dict[str, PracticeVector] = {}
    for account in sorted(parts):
        # fsum per dimension, then fsum of the dimension sums: the total is
        # exactly the entry sum regardless of record order.
        sums = {dim: fsum(values) for dim, values in sorted(parts[account].items())}
        entries = {dim: value for dim, value in sums.items() if value != 0}
        vectors[account] = PracticeVector(
            account_id=account,
            aspect=aspect or "",
            direction=direction,
            entries=entries,
            total=fsum(sums.values()),
        )
    return vectors


def normalize(vector: PracticeVector) -> PracticeVector:
    """Divide each entry by its (sub-block) sum; keep the raw total.

    For combined-direction vectors the outgoing and incoming sub-blocks
    are normalized separately, each by its own sum. Zero-total vectors
    stay empty and remain flagged degenerate.
    """
    if vector.normalized:
        raise ValueError(f"vector for {vector.account_id!r} is already normalized")
    if vector.direction == COMBINED:
        block_totals = {
            prefix: fsum(v for k, v in vector.entries.items() if k.startswith(prefix))
            for prefix in (OUT_PREFIX, IN_PREFIX)
        }
        entries = {
            key: value
            / block_totals[OUT_PREFIX if key.startswith(OUT_PREFIX) else IN_PREFIX]
            for key, value in vector.entries.items()
        }
    else:
        total = fsum(vector.entries.values())
        entries = (
            {key: value / total for key, value in vector.entries.items()} if total else {}
        )
    return replace(vector, entries=entries, normalized=True)


def normalize_all(vectors: Mapping[str, PracticeVector]) -> dict[str, PracticeVector]:
    return {account: normalize(vector) for account, vector in vectors.items()}


def filter_by_activity(
    vectors: Mapping[str, PracticeVector], min_total: float
) -> dict[str, PracticeVector]:
    """Retain exactly the vectors whose raw total is >= ``min_total``."""
    if min_total < 0:
        raise ConfigError(f"minimum activity total must be >= 0, got {min_total}")
    return {account: v for account, v in vectors.items() if v.total >= min_total}


def split_degenerate(
    vectors: Mapping[str, PracticeVector],
) -> tuple[dict[str, PracticeVector], list[str]]:
    """Separate zero-magnitude vectors, which have no defined similarity."""
    kept = {account: v for account, v in vectors.items() if not v.degenerate}
    dropped = sorted(account for account, v in vectors.items() if v.degenerate)
    return kept, dropped
