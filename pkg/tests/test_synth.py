"""Synthetic scenario generation and the brute-force reference oracles."""

from __future__ import annotations

from datetime import timedelta

import pytest

from practicemap.errors import ConfigError
from practicemap.graph import build_graph, modularity_of_partition
from practicemap.similarity import SimilarityEdge, pairwise_similarities
from practicemap.synth import (
    PolarizedScenario,
    _set_partitions,
    brute_force_modularity,
    brute_force_pairwise,
    generate_polarized,
)
from practicemap.vectors import PracticeVector, accumulate_interaction_vectors, normalize_all


class TestScenario:
    def test_default_is_the_five_versus_five_construction(self):
        scenario = PolarizedScenario()
        assert scenario.account_ids() == [
            ["A1", "A2", "A3", "A4", "A5"],
            ["B1", "B2", "B3", "B4", "B5"],
        ]

    def test_large_groups_zero_pad_member_numbers(self):
        scenario = PolarizedScenario(group_sizes=(12, 2))
        ids = scenario.account_ids()[0]
        assert ids[0] == "A01" and ids[-1] == "A12"

    def test_validation_rejects_degenerate_setups(self):
        with pytest.raises(ConfigError):
            PolarizedScenario(group_sizes=(5,))
        with pytest.raises(ConfigError):
            PolarizedScenario(group_sizes=(1,) * 27)
        with pytest.raises(ConfigError):
            PolarizedScenario(group_sizes=(5, 0))
        with pytest.raises(ConfigError):
            PolarizedScenario(repetitions=0)
        with pytest.raises(ConfigError):
            PolarizedScenario(in_group_type="")

    def test_record_count_matches_the_construction(self):
        for sizes, reps in [((5, 5), 1), ((3, 4), 2), ((2, 2, 2), 3)]:
            scenario = PolarizedScenario(group_sizes=sizes, repetitions=reps)
            records = generate_polarized(scenario)
            total = sum(sizes)
            expected = sum(size * ((size - 1) + (total - size)) for size in sizes) * reps
            assert len(records) == expected

    def test_generation_is_deterministic(self):
        scenario = PolarizedScenario(group_sizes=(3, 3))
        assert generate_polarized(scenario) == generate_polarized(scenario)

    def test_post_ids_are_unique(self):
        records = generate_polarized(PolarizedScenario())
        assert len({r.post_id for r in records}) == len(records)

    def test_each_account_posts_in_its_own_week(self):
        records = generate_polarized(PolarizedScenario(group_sizes=(2, 2)))
        stamps = {}
        for record in records:
            stamps.setdefault(record.author_id, record.timestamp)
            assert record.timestamp == stamps[record.author_id]
        ordered = [stamps[a] for a in ["A1", "A2", "B1", "B2"]]
        assert all(b - a == timedelta(weeks=1) for a, b in zip(ordered, ordered[1:]))

    def test_in_and_out_group_types_label_the_right_records(self):
        records = generate_polarized(PolarizedScenario(group_sizes=(2, 2)))
        for record in records:
            same_group = record.author_id[0] == record.target_id[0]
            expected = "retweet" if same_group else "mention"
            assert record.interaction_type == expected
            assert record.author_id != record.target_id


class TestBruteForcePairwise:
    def test_matches_the_production_implementation(self, toy_vectors):
        fast = pairwise_similarities(toy_vectors, min_weight=0.0)
        slow = brute_force_pairwise(toy_vectors, min_weight=0.0)
        assert [(e.source, e.target) for e in fast] == [(e.source, e.target) for e in slow]
        assert all(abs(a.weight - b.weight) <= 1e-12 for a, b in zip(fast, slow))

    def test_threshold_is_inclusive_here_too(self, toy_vectors):
        kept = brute_force_pairwise(toy_vectors, min_weight=8 / 9)
        assert len(kept) == 20

    def test_refuses_oversized_inputs(self):
        vectors = {
            f"v{i:03d}": PracticeVector(f"v{i:03d}", "t", "outgoing", {"d": 1.0}, 1.0, normalized=True)
            for i in range(201)
        }
        with pytest.raises(ValueError, match="limited to 200"):
            brute_force_pairwise(vectors)

    def test_refuses_zero_magnitude_vectors(self):
        vectors = {
            "a": PracticeVector("a", "t", "outgoing", {"d": 1.0}, 1.0, normalized=True),
            "b": PracticeVector("b", "t", "outgoing", {}, 0.0, normalized=True),
        }
        with pytest.raises(ValueError, match="zero-magnitude"):
            brute_force_pairwise(vectors)


class TestPartitionEnumeration:
    def test_counts_match_the_bell_numbers(self):
        for count, bell in [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52)]:
            assert sum(1 for _ in _set_partitions(count)) == bell

    def test_every_labeling_is_a_restricted_growth_string(self):
        for labels in _set_partitions(5):
            assert labels[0] == 0
            assert all(labels[i] <= max(labels[:i]) + 1 for i in range(1, 5))

    def test_labelings_are_distinct(self):
        seen = [tuple(labels) for labels in _set_partitions(5)]
        assert len(seen) == len(set(seen))


class TestBruteForceModularity:
    def test_two_triangles_split_apart(self):
        edges = [
            SimilarityEdge("b", "a", 1.0),
            SimilarityEdge("c", "a", 1.0),
            SimilarityEdge("c", "b", 1.0),
            SimilarityEdge("e", "d", 1.0),
            SimilarityEdge("f", "d", 1.0),
            SimilarityEdge("f", "e", 1.0),
        ]
        graph = build_graph(edges, [])
        membership, score = brute_force_modularity(graph)
        assert {frozenset(n for n in graph.nodes if membership[n] == label) for label in set(membership.values())} == {
            frozenset({"a", "b", "c"}),
            frozenset({"d", "e", "f"}),
        }
        assert score == pytest.approx(0.5, abs=1e-12)

    def test_reported_score_matches_the_returned_partition(self, toy_graph):
        membership, score = brute_force_modularity(toy_graph)
        assert modularity_of_partition(toy_graph, membership) == pytest.approx(score, abs=1e-12)

    def test_refuses_oversized_graphs(self):
        graph = build_graph([], [f"n{i}" for i in range(13)])
        with pytest.raises(ValueError, match="limited to 12"):
            brute_force_modularity(graph)

    def test_edgeless_graph_scores_zero(self):
        graph = build_graph([], ["a", "b"])
        membership, score = brute_force_modularity(graph)
        assert score == 0.0
        assert set(membership) == {"a", "b"}

    def test_is_deterministic(self, toy_graph):
        assert brute_force_modularity(toy_graph) == brute_force_modularity(toy_graph)


def test_scenario_vectors_have_uniform_totals():
    records = generate_polarized(PolarizedScenario(group_sizes=(4, 6), repetitions=2))
    vectors = normalize_all(accumulate_interaction_vectors(records))
    totals = {v.total for v in vectors.values()}
    assert totals == {18}  # (group - 1 + other group) * repetitions
