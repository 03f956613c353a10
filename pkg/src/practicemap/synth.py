"""Synthetic polarized scenarios and brute-force reference implementations.

The default scenario is the classic two-camp construction: every account
supports its own group by retweeting each fellow member and attacks the
other group by @mentioning each opponent. Group sizes, interaction-type
labels, and per-pair repetition counts are parameterizable so the
normalization and scale-invariance properties can be exercised beyond
the 5-vs-5 base case.

The brute-force functions trade speed for obviousness; they exist as
independent oracles for the optimized pairwise-similarity and Louvain
implementations and refuse inputs large enough to be impractical.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from math import fsum, sqrt
from string import ascii_uppercase
from typing import Iterator, Mapping

from .errors import ConfigError
from .graph import PracticeGraph
from .records import InteractionRecord
from .similarity import SimilarityEdge, _clamp
from .vectors import PracticeVector

# All synthetic timestamps start on a fixed Monday so weekly bins line up.
_START = datetime(2024, 1, 1, tzinfo=timezone.utc)

_MAX_BRUTE_NODES = 12
_MAX_BRUTE_VECTORS = 200


@dataclass(frozen=True)
class PolarizedScenario:
    """Groups that interact one way internally and another way across."""

    group_sizes: tuple[int, ...] = (5, 5)
    in_group_type: str = "retweet"
    out_group_type: str = "mention"
    repetitions: int = 1

    def __post_init__(self) -> None:
        if len(self.group_sizes) < 2:
            raise ConfigError("a polarized scenario needs at least 2 groups")
        if len(self.group_sizes) > len(ascii_uppercase):
            raise ConfigError(f"at most {len(ascii_uppercase)} groups are supported")
        if any(size < 1 for size in self.group_sizes):
            raise ConfigError("every group needs at least 1 member")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if not self.in_group_type or not self.out_group_type:
            raise ConfigError("interaction type labels must be non-empty")

    def account_ids(self) -> list[list[str]]:
        """Member ids per group: A1..A5, B1..B5, ... (zero-padded as needed)."""
        groups = []
        for letter, size in zip(ascii_uppercase, self.group_sizes):
            width = len(str(size))
            groups.append([f"{letter}{str(member).zfill(width)}" for member in range(1, size + 1)])
        return groups


def generate_polarized(scenario: PolarizedScenario) -> tuple[InteractionRecord, ...]:
    """Emit the scenario's records, deterministically.

    Every account sends `repetitions` in-group records to each other
    member of its group (never to itself) and `repetitions` out-group
    records to every member of every other group. Post ids are
    sequential; each account's whole emission batch is stamped one week
    after the previous account's, so temporal metrics have real spread.
    """
    groups = scenario.account_ids()
    records: list[InteractionRecord] = []
    counter = 0
    account_index = 0
    for group_number, members in enumerate(groups):
        for author in members:
            stamp = _START + account_index * timedelta(weeks=1)
            account_index += 1
            for target in members:
                if target == author:
                    continue
                for _ in range(scenario.repetitions):
                    counter += 1
                    records.append(
                        InteractionRecord(
                            f"p{counter:08d}", author, target, scenario.in_group_type, stamp
                        )
                    )
            for other_number, other_members in enumerate(groups):
                if other_number == group_number:
                    continue
                for target in other_members:
                    for _ in range(scenario.repetitions):
                        counter += 1
                        records.append(
                            InteractionRecord(
                                f"p{counter:08d}", author, target, scenario.out_group_type, stamp
                            )
                        )
    return tuple(records)


def brute_force_pairwise(
    vectors: Mapping[str, PracticeVector], min_weight: float = 0.0
) -> list[SimilarityEdge]:
    """Naive dense double-loop cosine over all pairs; the reference output.

    Vectors are expanded onto the full dimension union and compared pair
    by pair, with no pruning of any kind. Refuses more than
    200 vectors.
    """
    if len(vectors) > _MAX_BRUTE_VECTORS:
        raise ValueError(f"brute-force pairwise is limited to {_MAX_BRUTE_VECTORS} vectors")
    accounts = sorted(vectors)
    dimensions = sorted({key for account in accounts for key in vectors[account].entries})
    dense = {
        account: [vectors[account].entries.get(dim, 0.0) for dim in dimensions]
        for account in accounts
    }
    magnitude = {
        account: sqrt(fsum(value * value for value in dense[account])) for account in accounts
    }
    zero = [account for account in accounts if magnitude[account] == 0.0]
    if zero:
        raise ValueError(f"zero-magnitude vectors have no defined similarity: {zero[:5]}")
    edges = []
    for j in range(1, len(accounts)):
        row_j = dense[accounts[j]]
        for i in range(j):
            row_i = dense[accounts[i]]
            dot = fsum(x * y for x, y in zip(row_i, row_j))
            weight = _clamp(dot / (magnitude[accounts[i]] * magnitude[accounts[j]]))
            if weight >= min_weight:
                edges.append(SimilarityEdge(accounts[j], accounts[i], weight))
    return edges


def _set_partitions(count: int) -> Iterator[list[int]]:
    """All partitions of range(count) as restricted growth strings."""
    if count == 0:
        yield []
        return
    labels = [0] * count
    ceiling = [1] * count
    while True:
        yield list(labels)
        position = count - 1
        while position > 0 and labels[position] == ceiling[position]:
            position -= 1
        if position == 0:
            return
        labels[position] += 1
        next_ceiling = (
            labels[position] + 1 if labels[position] == ceiling[position] else ceiling[position]
        )
        for tail in range(position + 1, count):
            labels[tail] = 0
            ceiling[tail] = next_ceiling


def brute_force_modularity(
    graph: PracticeGraph, resolution: float = 1.0
) -> tuple[dict[str, int], float]:
    """Exhaustive maximum-modularity partition; refuses more than 12 nodes.

    Evaluates every set partition of the node set and returns the first
    one achieving the maximum modularity, with its score. Enumeration
    order is fixed, so the result is deterministic.
    """
    nodes = graph.nodes
    if len(nodes) > _MAX_BRUTE_NODES:
        raise ValueError(
            f"brute-force modularity is limited to {_MAX_BRUTE_NODES} nodes, got {len(nodes)}"
        )
    index = {node: position for position, node in enumerate(nodes)}
    edge_list = [(index[e.source], index[e.target], e.weight) for e in graph.edges]
    degree = [0.0] * len(nodes)
    for i, j, weight in edge_list:
        degree[i] += weight
        degree[j] += weight
    total = sum(weight for _, _, weight in edge_list)
    if total == 0:
        return {node: 0 for node in nodes}, 0.0
    best_labels: list[int] = [0] * len(nodes)
    best_score = float("-inf")
    for labels in _set_partitions(len(nodes)):
        blocks = max(labels) + 1
        internal = [0.0] * blocks
        strength = [0.0] * blocks
        for i, j, weight in edge_list:
            if labels[i] == labels[j]:
                internal[labels[i]] += weight
        for node, label in enumerate(labels):
            strength[label] += degree[node]
        score = 0.0
        for block in range(blocks):
            score += internal[block] / total - resolution * (strength[block] / (2.0 * total)) ** 2
        if score > best_score:
            best_score = score
            best_labels = labels
    return {node: best_labels[position] for position, node in enumerate(nodes)}, best_score
