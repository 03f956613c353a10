"""Thresholded all-pairs cosine similarity over practice vectors.

This is the performance-critical core. The all-pairs join is realized as
a blocked sparse matrix product over L2-normalized rows: only account
pairs sharing at least one dimension ever produce work, which is exactly
the inverted-index pruning idea (a pair with no shared dimension has
similarity 0 and, for positive thresholds, never emits an edge). The
result is output-equivalent to the naive pair loop.

Multi-aspect analysis is supported two ways, mirroring how composite
practices can be compared:

* weighted sums of per-aspect similarities (weights normalized by their
  sum so combined values stay in [0, 1]);
* concatenated composite vectors with aspect-prefixed dimensions,
  compared in a single cosine pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum, sqrt
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

from .errors import ConfigError
from .vectors import COMBINED, PracticeVector

# Dot products within one ulp-cloud of 1.0 are exact-duplicate practices;
# snapping keeps identity pairs at weight 1.0 so an inclusive threshold of
# 1.0 still matches them.
_ONE_SNAP = 1e-12

# Rows per block in the blocked matrix product; bounds peak memory.
_BLOCK_ROWS = 1024


@dataclass(frozen=True, slots=True)
class SimilarityEdge:
    """One undirected similarity, canonically oriented source > target."""

    source: str
    target: str
    weight: float


def _clamp(value: float) -> float:
    if value > 1.0 or 1.0 - value < _ONE_SNAP:
        return 1.0
    return 0.0 if value < 0.0 else value


def cosine_similarity(u: PracticeVector, v: PracticeVector) -> float:
    """Cosine of the angle between two practice vectors, in [0, 1].

    Raises ValueError for zero-magnitude input (the similarity of an
    account with no activity is undefined; callers filter degenerates
    first) or for vectors from different aspects or direction modes.
    """
    if u.aspect != v.aspect or u.direction != v.direction:
        raise ValueError(
            f"cannot compare {u.aspect!r}/{u.direction!r} with {v.aspect!r}/{v.direction!r}"
        )
    if not u.entries or not v.entries:
        raise ValueError("cosine similarity is undefined for zero-magnitude vectors")
    small, large = (u.entries, v.entries) if len(u.entries) <= len(v.entries) else (v.entries, u.entries)
    dot = fsum(value * large[key] for key, value in small.items() if key in large)
    return _clamp(dot / (u.magnitude() * v.magnitude()))


def _as_normalized_rows(
    vectors: Mapping[str, PracticeVector],
) -> tuple[list[str], sparse.csr_matrix]:
    """Sorted account list plus a CSR matrix of unit-length rows."""
    accounts = sorted(vectors)
    aspects = {vectors[a].aspect for a in accounts}
    directions = {vectors[a].direction for a in accounts}
    if len(aspects) > 1 or len(directions) > 1:
        raise ValueError(
            f"pairwise similarity needs one aspect and direction, got {sorted(aspects)}/{sorted(directions)}"
        )
    dim_index: dict[str, int] = {}
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for account in accounts:
        vector = vectors[account]
        if not vector.entries:
            raise ValueError(
                f"account {account!r} has a zero-magnitude vector; filter degenerates first"
            )
        norm = vector.magnitude()
        for key, value in vector.entries.items():
            indices.append(dim_index.setdefault(key, len(dim_index)))
            data.append(value / norm)
        indptr.append(len(indices))
    matrix = sparse.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(accounts), len(dim_index)),
    )
    return accounts, matrix


def pairwise_similarities(
    vectors: Mapping[str, PracticeVector],
    min_weight: float = 0.6,
    block_rows: int = _BLOCK_ROWS,
) -> list[SimilarityEdge]:
    """All-pairs cosine similarities, keeping pairs with weight >= min_weight.

    Every unordered pair is evaluated exactly once and emitted at most
    once, oriented source > target. Output is sorted by (source, target).
    With min_weight 0 this emits exactly n(n-1)/2 edges, including
    zero-weight pairs that share no dimension.
    """
    if not 0.0 <= min_weight <= 1.0:
        raise ConfigError(f"similarity threshold must be in [0, 1], got {min_weight}")
    if len(vectors) < 2:
        return []
    accounts, matrix = _as_normalized_rows(vectors)
    transposed = matrix.T.tocsr()
    edges: list[SimilarityEdge] = []
    for start in range(0, len(accounts), block_rows):
        stop = min(start + block_rows, len(accounts))
        block = (matrix[start:stop] @ transposed).tocsr()
        block.sort_indices()
        for row in range(stop - start):
            j = start + row
            lo, hi = block.indptr[row], block.indptr[row + 1]
            cols = block.indices[lo:hi]
            vals = block.data[lo:hi]
            below = cols < j
            cols = cols[below]
            vals = vals[below]
            vals = np.where(vals > 1.0 - _ONE_SNAP, 1.0, np.maximum(vals, 0.0))
            source = accounts[j]
            if min_weight > 0.0:
                passing = vals >= min_weight
                edges.extend(
                    SimilarityEdge(source, accounts[i], w)
                    for i, w in zip(cols[passing].tolist(), vals[passing].tolist())
                )
            else:
                dense = np.zeros(j)
                dense[cols] = vals
                edges.extend(
                    SimilarityEdge(source, accounts[i], w) for i, w in enumerate(dense.tolist())
                )
    return edges


def threshold_edges(edges: Iterable[SimilarityEdge], min_weight: float) -> list[SimilarityEdge]:
    """Keep edges whose weight is >= min_weight (inclusive)."""
    if not 0.0 <= min_weight <= 1.0:
        raise ConfigError(f"similarity threshold must be in [0, 1], got {min_weight}")
    return [edge for edge in edges if edge.weight >= min_weight]


def combine_aspect_similarities(
    per_aspect_edges: Mapping[str, Sequence[SimilarityEdge]],
    weights: Mapping[str, float],
) -> list[SimilarityEdge]:
    """Weighted sum of per-aspect similarities over the union of pairs.

    Weights are normalized by their sum, so combined weights stay in
    [0, 1]. Per-aspect inputs must be computed without thresholding; the
    caller applies the similarity threshold to the combined result. A pair
    missing from one aspect (an account degenerate there) contributes 0
    for that aspect.
    """
    if not per_aspect_edges:
        raise ConfigError("no aspects to combine")
    unknown = sorted(set(weights) - set(per_aspect_edges))
    if unknown:
        raise ConfigError(f"weights given for unknown aspects: {unknown}")
    missing = sorted(set(per_aspect_edges) - set(weights))
    if missing:
        raise ConfigError(f"no weights given for aspects: {missing}")
    for aspect, weight in weights.items():
        if not (weight >= 0.0 and weight == weight and weight != float("inf")):
            raise ConfigError(f"aspect weight must be finite and >= 0, got {aspect}={weight}")
    total = fsum(weights[aspect] for aspect in per_aspect_edges)
    if total <= 0.0:
        raise ConfigError("at least one aspect weight must be positive")
    combined: dict[tuple[str, str], float] = {}
    for aspect, edges in per_aspect_edges.items():
        share = weights[aspect] / total
        for edge in edges:
            pair = (edge.source, edge.target)
            combined[pair] = combined.get(pair, 0.0) + share * edge.weight
    return [
        SimilarityEdge(source, target, _clamp(weight))
        for (source, target), weight in sorted(combined.items())
    ]


def concat_composite_vector(per_aspect: Sequence[PracticeVector]) -> PracticeVector:
    """Concatenate one account's normalized per-aspect vectors.

    Entries are merged under aspect-prefixed keys, so dimensions from
    different aspects can never collide. The composite is itself flagged
    normalized (each aspect block sums to 1) and can be fed straight into
    the pairwise comparison for the single-pass combined analysis.
    """
    if not per_aspect:
        raise ValueError("composite vector needs at least one aspect vector")
    account = per_aspect[0].account_id
    seen: set[str] = set()
    entries: dict[str, float] = {}
    for vector in per_aspect:
        if vector.account_id != account:
            raise ValueError(f"mixed accounts in composite: {account!r} and {vector.account_id!r}")
        if not vector.normalized:
            raise ValueError(f"composite inputs must be normalized ({vector.aspect!r} is raw)")
        if vector.aspect in seen:
            raise ValueError(f"duplicate aspect in composite: {vector.aspect!r}")
        seen.add(vector.aspect)
        for key, value in vector.entries.items():
            entries[f"{vector.aspect}:{key}"] = value
    directions = {vector.direction for vector in per_aspect}
    return PracticeVector(
        account_id=account,
        aspect="+".join(vector.aspect for vector in per_aspect),
        direction=directions.pop() if len(directions) == 1 else COMBINED,
        entries=entries,
        total=fsum(vector.total for vector in per_aspect),
        normalized=True,
    )
