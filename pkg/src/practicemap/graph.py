"""Undirected practice network: construction, Louvain clustering, archetypes.

The similarity edges form a weighted undirected graph. Clusters are found
with the classic two-phase Louvain method: greedy local moves that
maximize modularity gain, then aggregation of communities into
super-nodes, repeated until no move improves modularity. The
implementation is deliberately deterministic — nodes are visited in
sorted-id order and ties between equally good moves are broken by a
seeded random generator — so identical inputs and seeds always reproduce
identical clusterings.

Archetype extraction ranks each cluster's members by intra-cluster
weighted degree: the summed weight of their edges to other members of the
same cluster, i.e. how similar an account's practices are to the rest of
its cluster.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from math import fsum
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, InputError
from .similarity import SimilarityEdge

# Smallest modularity gain that justifies a move; blocks float-noise
# oscillation between equally good communities.
_MIN_GAIN = 1e-9


@dataclass(frozen=True)
class PracticeGraph:
    """Weighted undirected graph over account nodes (no self-loops)."""

    nodes: tuple[str, ...]
    edges: tuple[SimilarityEdge, ...]
    adjacency: dict[str, tuple[tuple[str, float], ...]]

    @property
    def total_weight(self) -> float:
        return fsum(edge.weight for edge in self.edges)


@dataclass(frozen=True)
class ClusterAssignment:
    """A complete node -> cluster labeling with its modularity."""

    membership: dict[str, int]
    modularity: float
    resolution: float
    seed: int
    trace: tuple[float, ...]

    def clusters(self) -> dict[int, list[str]]:
        """Cluster id -> sorted member list."""
        grouped: dict[int, list[str]] = defaultdict(list)
        for node in sorted(self.membership):
            grouped[self.membership[node]].append(node)
        return dict(sorted(grouped.items()))

    @property
    def n_clusters(self) -> int:
        return len(set(self.membership.values()))


def build_graph(edges: Iterable[SimilarityEdge], all_accounts: Iterable[str]) -> PracticeGraph:
    """Assemble the undirected graph, keeping isolated accounts as nodes.

    Edges are stored in canonical orientation (source > target); reversed
    inputs are flipped. Self-loops, duplicate pairs, and weights outside
    [0, 1] are rejected: they cannot come out of the similarity stage, so
    their presence means a corrupted edge file.
    """
    canonical: list[SimilarityEdge] = []
    seen: set[tuple[str, str]] = set()
    for edge in edges:
        if edge.source == edge.target:
            raise InputError(f"self-loop edge on {edge.source!r}")
        if not 0.0 <= edge.weight <= 1.0 + 1e-9:
            raise InputError(
                f"edge {edge.source!r}->{edge.target!r} weight {edge.weight} outside [0, 1]"
            )
        if edge.source < edge.target:
            edge = SimilarityEdge(edge.target, edge.source, edge.weight)
        pair = (edge.source, edge.target)
        if pair in seen:
            raise InputError(f"duplicate edge for pair {pair}")
        seen.add(pair)
        canonical.append(edge)
    canonical.sort(key=lambda e: (e.source, e.target))
    nodes = set(all_accounts)
    nodes.update(e.source for e in canonical)
    nodes.update(e.target for e in canonical)
    neighbor_map: dict[str, list[tuple[str, float]]] = {node: [] for node in nodes}
    for edge in canonical:
        neighbor_map[edge.source].append((edge.target, edge.weight))
        neighbor_map[edge.target].append((edge.source, edge.weight))
    adjacency = {node: tuple(sorted(neighbor_map[node])) for node in neighbor_map}
    return PracticeGraph(tuple(sorted(nodes)), tuple(canonical), adjacency)


def modularity_of_partition(
    graph: PracticeGraph,
    membership: Mapping[str, int],
    resolution: float = 1.0,
) -> float:
    """Newman modularity of a node labeling, with a resolution factor.

    Q = sum over clusters of [ w_in/m - resolution * (w_tot/(2m))^2 ],
    where w_in is the intra-cluster edge weight, w_tot the summed degree
    of the cluster's nodes, and m the total edge weight. An edgeless
    graph scores 0 for any labeling.
    """
    m = graph.total_weight
    if m == 0:
        return 0.0
    in_weights: dict[int, list[float]] = defaultdict(list)
    tot_weights: dict[int, list[float]] = defaultdict(list)
    for edge in graph.edges:
        if membership[edge.source] == membership[edge.target]:
            in_weights[membership[edge.source]].append(edge.weight)
    for node in graph.nodes:
        degree = fsum(weight for _, weight in graph.adjacency[node])
        tot_weights[membership[node]].append(degree)
    return fsum(
        fsum(in_weights.get(cluster, ())) / m
        - resolution * (fsum(tot_weights[cluster]) / (2.0 * m)) ** 2
        for cluster in tot_weights
    )


def louvain(graph: PracticeGraph, resolution: float = 1.0, seed: int = 0) -> ClusterAssignment:
    """Cluster the graph by greedy modularity maximization.

    Repeats local-move sweeps (in sorted node order, seeded random
    tie-breaks) and community aggregation until no move gains more than
    a minimal threshold. Isolated nodes end up as singleton clusters.
    Cluster ids are dense integers from 0, ordered by each cluster's
    smallest member account id. The modularity trace holds the score
    before clustering and after each completed level; it never decreases.
    """
    if resolution <= 0:
        raise ConfigError(f"resolution must be positive, got {resolution}")
    nodes = graph.nodes
    index = {node: position for position, node in enumerate(nodes)}
    neighbors: list[list[tuple[int, float]]] = [
        [(index[other], weight) for other, weight in graph.adjacency[node]] for node in nodes
    ]
    loops = [0.0] * len(nodes)
    degrees = [fsum(weight for _, weight in adj) for adj in neighbors]
    m2 = fsum(degrees)
    membership = list(range(len(nodes)))
    trace = [modularity_of_partition(graph, dict(zip(nodes, membership)), resolution)]
    rng = random.Random(seed)
    while m2 > 0:
        community, moved = _local_moves(neighbors, loops, degrees, m2, resolution, rng)
        community, count = _renumber(community)
        if not moved:
            break
        membership = [community[label] for label in membership]
        trace.append(
            modularity_of_partition(graph, dict(zip(nodes, membership)), resolution)
        )
        if count == len(degrees):
            break
        neighbors, loops, degrees = _aggregate(neighbors, loops, community, count)
    membership, _ = _renumber(membership)
    final = dict(zip(nodes, membership))
    return ClusterAssignment(
        membership=final,
        modularity=trace[-1],
        resolution=resolution,
        seed=seed,
        trace=tuple(trace),
    )


def _local_moves(
    neighbors: list[list[tuple[int, float]]],
    loops: list[float],
    degrees: list[float],
    m2: float,
    resolution: float,
    rng: random.Random,
) -> tuple[list[int], bool]:
    """One Louvain level: sweep nodes until no move improves modularity."""
    count = len(degrees)
    community = list(range(count))
    # Degree here includes twice the self-loop weight, the null-model mass.
    strength = [degrees[node] + 2.0 * loops[node] for node in range(count)]
    sum_tot = strength.copy()
    moved_any = False
    while True:
        moves = 0
        for node in range(count):
            current = community[node]
            links: dict[int, float] = defaultdict(float)
            for other, weight in neighbors[node]:
                links[community[other]] += weight
            sum_tot[current] -= strength[node]
            scale = resolution * strength[node] / m2
            stay_gain = links.get(current, 0.0) - scale * sum_tot[current]
            best_gain: float | None = None
            best: list[int] = []
            for candidate in sorted(links):
                if candidate == current:
                    continue
                gain = links[candidate] - scale * sum_tot[candidate]
                if best_gain is None or gain > best_gain:
                    best_gain, best = gain, [candidate]
                elif gain == best_gain:
                    best.append(candidate)
            if best_gain is not None and best_gain - stay_gain > _MIN_GAIN:
                chosen = best[0] if len(best) == 1 else rng.choice(best)
                community[node] = chosen
                sum_tot[chosen] += strength[node]
                moves += 1
                moved_any = True
            else:
                sum_tot[current] += strength[node]
        if moves == 0:
            return community, moved_any


def _renumber(community: Sequence[int]) -> tuple[list[int], int]:
    """Relabel community ids densely, ordered by smallest member index."""
    mapping: dict[int, int] = {}
    for label in community:
        if label not in mapping:
            mapping[label] = len(mapping)
    return [mapping[label] for label in community], len(mapping)


def _aggregate(
    neighbors: list[list[tuple[int, float]]],
    loops: list[float],
    community: list[int],
    count: int,
) -> tuple[list[list[tuple[int, float]]], list[float], list[float]]:
    """Collapse communities into super-nodes for the next level."""
    new_loops = [0.0] * count
    between: list[dict[int, float]] = [defaultdict(float) for _ in range(count)]
    for node, label in enumerate(community):
        new_loops[label] += loops[node]
    for node, adj in enumerate(neighbors):
        label = community[node]
        for other, weight in adj:
            if other < node:
                continue
            other_label = community[other]
            if label == other_label:
                new_loops[label] += weight
            else:
                between[label][other_label] += weight
                between[other_label][label] += weight
    new_neighbors = [sorted(acc.items()) for acc in between]
    new_degrees = [fsum(weight for _, weight in adj) for adj in new_neighbors]
    return new_neighbors, new_loops, new_degrees


def intra_cluster_weighted_degree(
    graph: PracticeGraph, assignment: ClusterAssignment
) -> dict[str, float]:
    """Summed edge weight from each node to same-cluster neighbors.

    The graph is undirected, so there is no in/out split; isolated and
    singleton-cluster nodes score 0.
    """
    membership = assignment.membership
    missing = [node for node in graph.nodes if node not in membership]
    if missing:
        raise ValueError(f"assignment is missing nodes: {missing[:5]}")
    return {
        node: fsum(
            weight
            for neighbor, weight in graph.adjacency[node]
            if membership[neighbor] == membership[node]
        )
        for node in graph.nodes
    }


def top_archetypes(
    graph: PracticeGraph, assignment: ClusterAssignment, k: int
) -> dict[int, list[tuple[str, float]]]:
    """Per cluster, the k members with highest intra-cluster weighted degree.

    Smaller clusters return all their members. Ties are broken by account
    id ascending, so rankings are stable across runs.
    """
    if k < 1:
        raise ValueError(f"archetype count must be >= 1, got {k}")
    degrees = intra_cluster_weighted_degree(graph, assignment)
    ranked: dict[int, list[tuple[str, float]]] = defaultdict(list)
    for node in graph.nodes:
        ranked[assignment.membership[node]].append((node, degrees[node]))
    report: dict[int, list[tuple[str, float]]] = {}
    for cluster in sorted(ranked):
        members = sorted(ranked[cluster], key=lambda item: (-item[1], item[0]))
        report[cluster] = members[:k]
    return report
