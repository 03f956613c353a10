"""Practice-vector accumulation, normalization, and activity filtering."""

from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from practicemap.errors import ConfigError
from practicemap.records import AttributeRecord, InteractionRecord
from practicemap.vectors import (
    COMBINED,
    INCOMING,
    OUTGOING,
    PracticeVector,
    accumulate_attribute_vectors,
    accumulate_interaction_vectors,
    dimension_key,
    filter_by_activity,
    normalize,
    normalize_all,
    split_degenerate,
)


def _rec(author, target, kind="retweet", post="p1"):
    return InteractionRecord(post, author, target, kind)


class TestInteractionAccumulation:
    def test_two_camp_scenario_outgoing_vector(self, toy_records):
        vectors = accumulate_interaction_vectors(toy_records)
        a1 = vectors["A1"]
        assert a1.total == 9
        assert len(a1.entries) == 9
        expected = {f"A{i} retweet": 1 for i in range(2, 6)}
        expected.update({f"B{i} mention": 1 for i in range(1, 6)})
        assert a1.entries == expected

    def test_incoming_mode_reverses_the_relationship(self):
        vectors = accumulate_interaction_vectors([_rec("X", "Y")], direction=INCOMING)
        assert set(vectors) == {"Y"}
        assert vectors["Y"].entries == {"X retweet": 1}

    def test_counts_accumulate_per_dimension(self):
        records = [_rec("111222", "333444", "retweet", f"p{i}") for i in range(90)]
        records += [_rec("111222", "666777", "mention", f"q{i}") for i in range(10)]
        vector = accumulate_interaction_vectors(records)["111222"]
        assert vector.total == 100
        assert vector.entries == {"333444 retweet": 90, "666777 mention": 10}

    def test_empty_record_set_gives_empty_map(self):
        assert accumulate_interaction_vectors([]) == {}

    def test_combined_mode_holds_both_sub_blocks(self):
        vectors = accumulate_interaction_vectors([_rec("X", "Y")], direction=COMBINED)
        assert vectors["X"].entries == {"out:Y retweet": 1}
        assert vectors["Y"].entries == {"in:X retweet": 1}

    def test_type_filter_limits_counted_records(self):
        records = [_rec("a", "b", "retweet"), _rec("a", "b", "mention")]
        vector = accumulate_interaction_vectors(records, type_filter={"retweet"})["a"]
        assert vector.total == 1

    def test_self_interactions_count_by_default_but_can_be_excluded(self):
        records = [_rec("a", "a"), _rec("a", "b")]
        with_self = accumulate_interaction_vectors(records)["a"]
        assert with_self.entries == {"a retweet": 1, "b retweet": 1}
        without = accumulate_interaction_vectors(records, include_self=False)["a"]
        assert without.entries == {"b retweet": 1}

    def test_unknown_direction_is_a_config_error(self):
        with pytest.raises(ConfigError, match="direction"):
            accumulate_interaction_vectors([], direction="sideways")

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_accumulation_is_order_independent(self, shuffle_seed):
        import random

        base = [
            _rec(f"a{i % 3}", f"b{i % 4}", "retweet" if i % 2 else "mention", f"p{i}")
            for i in range(12)
        ]
        shuffled = list(base)
        random.Random(shuffle_seed).shuffle(shuffled)
        assert accumulate_interaction_vectors(shuffled) == accumulate_interaction_vectors(base)


class TestAttributeAccumulation:
    def test_values_sum_into_totals(self):
        records = [
            AttributeRecord("A1", "hashtags", "#H1", 30),
            AttributeRecord("A1", "hashtags", "#H2", 20),
            AttributeRecord("A1", "hashtags", "none", 50),
        ]
        vector = accumulate_attribute_vectors(records)["A1"]
        assert vector.total == 100
        assert vector.aspect == "hashtags"

    def test_zero_value_makes_an_empty_degenerate_vector(self):
        vector = accumulate_attribute_vectors([AttributeRecord("A1", "h", "#x", 0.0)])["A1"]
        assert vector.entries == {}
        assert vector.total == 0
        assert vector.degenerate

    def test_disjoint_dimensions_stay_disjoint(self):
        records = [
            AttributeRecord("A1", "h", "#a", 1.0),
            AttributeRecord("A2", "h", "#b", 2.0),
        ]
        vectors = accumulate_attribute_vectors(records)
        assert set(vectors["A1"].entries) & set(vectors["A2"].entries) == set()

    def test_mixed_aspects_are_rejected(self):
        records = [
            AttributeRecord("A1", "hashtags", "#a", 1.0),
            AttributeRecord("A1", "topics", "t1", 1.0),
        ]
        with pytest.raises(ValueError, match="aspect"):
            accumulate_attribute_vectors(records)


class TestNormalize:
    def test_seventy_total_splits_point_71_point_29(self):
        raw = PracticeVector("A1", "interactions", OUTGOING, {"B1 retweet": 50, "B2 mention": 20}, 70)
        result = normalize(raw)
        assert result.entries["B1 retweet"] == pytest.approx(0.714286, abs=1e-6)
        assert result.entries["B2 mention"] == pytest.approx(0.285714, abs=1e-6)
        assert result.total == 70

    def test_hundred_total_gives_exact_decimals(self):
        raw = PracticeVector("A1", "hashtags", OUTGOING, {"#H1": 30, "#H2": 20, "none": 50}, 100)
        result = normalize(raw)
        assert result.entries == {"#H1": 0.3, "#H2": 0.2, "none": 0.5}

    def test_single_dimension_becomes_one(self):
        raw = PracticeVector("a", "h", OUTGOING, {"d": 7.0}, 7.0)
        assert normalize(raw).entries == {"d": 1.0}

    def test_combined_sub_blocks_normalize_separately(self):
        raw = PracticeVector(
            "a",
            "interactions",
            COMBINED,
            {"out:x retweet": 3, "out:y retweet": 1, "in:z mention": 5},
            9,
        )
        result = normalize(raw)
        assert result.entries["out:x retweet"] == 0.75
        assert result.entries["out:y retweet"] == 0.25
        assert result.entries["in:z mention"] == 1.0

    def test_zero_total_vector_stays_empty_and_degenerate(self):
        raw = PracticeVector("a", "h", OUTGOING, {}, 0.0)
        result = normalize(raw)
        assert result.entries == {}
        assert result.degenerate

    def test_double_normalization_is_misuse(self):
        raw = PracticeVector("a", "h", OUTGOING, {"d": 1.0}, 1.0)
        with pytest.raises(ValueError, match="already normalized"):
            normalize(normalize(raw))

    @given(
        st.dictionaries(
            st.text(min_size=1, max_size=5),
            st.integers(min_value=1, max_value=10**6),
            min_size=1,
            max_size=20,
        )
    )
    def test_entries_sum_to_one(self, entries):
        raw = PracticeVector("a", "h", OUTGOING, dict(entries), float(sum(entries.values())))
        total = math.fsum(normalize(raw).entries.values())
        assert abs(total - 1.0) <= 1e-9

    @given(
        st.dictionaries(
            st.text(min_size=1, max_size=5),
            st.integers(min_value=1, max_value=10**6),
            min_size=1,
            max_size=20,
        ),
        st.integers(min_value=1, max_value=10**6),
    )
    def test_scaling_raw_counts_changes_nothing(self, entries, k):
        raw = PracticeVector("a", "h", OUTGOING, dict(entries), float(sum(entries.values())))
        scaled = PracticeVector(
            "a", "h", OUTGOING, {d: v * k for d, v in entries.items()}, float(sum(entries.values()) * k)
        )
        assert normalize(raw).entries == normalize(scaled).entries

    def test_scaling_by_real_factor_is_within_tolerance(self):
        entries = {"a": 50, "b": 20}
        raw = normalize(PracticeVector("x", "h", OUTGOING, entries, 70))
        k = 0.3
        scaled = normalize(
            PracticeVector("x", "h", OUTGOING, {d: v * k for d, v in entries.items()}, 70 * k)
        )
        for dim in entries:
            assert abs(raw.entries[dim] - scaled.entries[dim]) <= 1e-12


class TestActivityFilter:
    def _vectors(self, totals):
        return {
            name: PracticeVector(name, "h", OUTGOING, {"d": total} if total else {}, float(total))
            for name, total in totals.items()
        }

    def test_boundary_is_inclusive(self):
        kept = filter_by_activity(self._vectors({"A": 100, "B": 99, "C": 250}), 100)
        assert set(kept) == {"A", "C"}

    def test_zero_threshold_is_identity(self):
        vectors = self._vectors({"A": 1, "B": 0})
        assert filter_by_activity(vectors, 0) == vectors

    def test_toy_scenario_all_pass_at_nine(self, toy_records):
        vectors = accumulate_interaction_vectors(toy_records)
        assert len(filter_by_activity(vectors, 9)) == 10

    def test_negative_threshold_is_a_config_error(self):
        with pytest.raises(ConfigError):
            filter_by_activity({}, -1)

    def test_threshold_applies_to_filtered_types_only(self, toy_records):
        retweets_only = accumulate_interaction_vectors(toy_records, type_filter={"retweet"})
        assert all(v.total == 4 for v in retweets_only.values())
        assert filter_by_activity(retweets_only, 5) == {}


def test_split_degenerate_reports_empty_vectors():
    vectors = {
        "live": PracticeVector("live", "h", OUTGOING, {"d": 1.0}, 1.0),
        "dead": PracticeVector("dead", "h", OUTGOING, {}, 0.0),
    }
    kept, dropped = split_degenerate(vectors)
    assert set(kept) == {"live"}
    assert dropped == ["dead"]


def test_dimension_key_is_counterparty_then_type():
    assert dimension_key("333444", "retweet") == "333444 retweet"


def test_normalize_all_covers_every_account(toy_raw_vectors):
    normalized = normalize_all(toy_raw_vectors)
    assert set(normalized) == set(toy_raw_vectors)
    assert all(v.normalized for v in normalized.values())
