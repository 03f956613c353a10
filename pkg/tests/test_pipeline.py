"""File-based pipeline stages: artifacts, determinism, locking, recovery."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from practicemap.config import load_config
from practicemap.errors import ConfigError, InputError, MissingTimestampError, SchemaError
from practicemap.pipeline import (
    ARCHETYPES_FILE,
    BACKPROJECTION_FILE,
    CLUSTERS_FILE,
    EDGES_FILE,
    EI_FILE,
    LOCK_FILE,
    REPORT_FILE,
    STAGES,
    TARGETS_FILE,
    TEMPORAL_FILE,
    VALIDATION_FILE,
    VECTORS_FILE,
    output_lock,
    run_pipeline,
    run_stage,
)
from practicemap.records import AttributeRecord, write_attributes, write_interactions
from practicemap.synth import PolarizedScenario, generate_polarized

from conftest import write_config

ALL_ARTIFACTS = [
    VALIDATION_FILE,
    VECTORS_FILE,
    EDGES_FILE,
    CLUSTERS_FILE,
    ARCHETYPES_FILE,
    EI_FILE,
    TEMPORAL_FILE,
    TARGETS_FILE,
    BACKPROJECTION_FILE,
]


@pytest.fixture()
def toy_config(toy_interactions_file, tmp_path):
    config_file = write_config(
        tmp_path / "run.toml", toy_interactions_file, tmp_path / "out"
    )
    return load_config(config_file)


def _bytes(outdir: Path, names) -> dict[str, bytes]:
    return {name: (outdir / name).read_bytes() for name in names}


class TestFullRun:
    def test_produces_every_artifact_and_reports_them(self, toy_config):
        report = run_pipeline(toy_config)
        for name in ALL_ARTIFACTS + [REPORT_FILE]:
            assert (toy_config.output_dir / name).exists(), name
        assert report["artifacts"] == sorted(ALL_ARTIFACTS)
        assert report["stages"]["cluster"]["clusters"] == 2
        assert report["stages"]["similarity"]["edges"] == 20
        assert report["stages"]["metrics"]["temporal_computed"] is True
        assert "UNDIRECTED" in report["gephi_note"]

    def test_report_on_disk_matches_the_returned_report(self, toy_config):
        report = run_pipeline(toy_config)
        on_disk = json.loads((toy_config.output_dir / REPORT_FILE).read_text(encoding="utf-8"))
        assert on_disk == report

    def test_no_timings_anywhere_in_the_artifacts(self, toy_config):
        run_pipeline(toy_config)
        report = (toy_config.output_dir / REPORT_FILE).read_text(encoding="utf-8")
        for marker in ("seconds", "elapsed", "duration", "wall", "perf"):
            assert marker not in report

    def test_rerunning_into_the_same_directory_is_byte_identical(self, toy_config):
        run_pipeline(toy_config)
        first = _bytes(toy_config.output_dir, ALL_ARTIFACTS + [REPORT_FILE])
        run_pipeline(toy_config)
        second = _bytes(toy_config.output_dir, ALL_ARTIFACTS + [REPORT_FILE])
        assert first == second

    def test_releases_the_lock_file_afterwards(self, toy_config):
        run_pipeline(toy_config)
        assert not (toy_config.output_dir / LOCK_FILE).exists()

    def test_validation_artifact_counts_the_toy_corpus(self, toy_config):
        run_pipeline(toy_config)
        validation = json.loads(
            (toy_config.output_dir / VALIDATION_FILE).read_text(encoding="utf-8")
        )
        assert validation["interactions"]["accepted"] == 90
        assert validation["interactions"]["distinct_accounts"] == 10


class TestStagedExecution:
    def test_stage_by_stage_matches_a_full_run(self, toy_interactions_file, tmp_path):
        full = load_config(
            write_config(tmp_path / "full.toml", toy_interactions_file, tmp_path / "out_full")
        )
        staged = load_config(
            write_config(tmp_path / "staged.toml", toy_interactions_file, tmp_path / "out_staged")
        )
        run_pipeline(full)
        for name in STAGES:
            run_stage(name, staged)
        assert _bytes(full.output_dir, ALL_ARTIFACTS) == _bytes(staged.output_dir, ALL_ARTIFACTS)
        assert not (staged.output_dir / REPORT_FILE).exists()

    def test_stages_demand_their_prerequisites(self, toy_config):
        with pytest.raises(InputError, match="stage similarity.*run vectorize first"):
            run_stage("similarity", toy_config)
        with pytest.raises(InputError, match="stage cluster"):
            run_stage("cluster", toy_config)
        with pytest.raises(InputError, match="stage metrics.*run cluster first"):
            run_stage("metrics", toy_config)

    def test_unknown_stage_name_is_a_config_error(self, toy_config):
        with pytest.raises(ConfigError, match="unknown stage"):
            run_stage("polish", toy_config)


class TestFailureRecovery:
    def test_missing_input_file_is_attributed_to_the_stage(self, tmp_path):
        config = load_config(
            write_config(tmp_path / "run.toml", tmp_path / "missing.csv", tmp_path / "out")
        )
        with pytest.raises(InputError, match="stage validate.*not found"):
            run_pipeline(config)

    def test_a_failing_stage_keeps_old_artifacts_and_leaves_no_debris(self, toy_config):
        run_pipeline(toy_config)
        before = _bytes(toy_config.output_dir, [EDGES_FILE])
        vectors = toy_config.output_dir / VECTORS_FILE
        vectors.write_text("Wrong,Header\n1,2\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="stage similarity"):
            run_stage("similarity", toy_config)
        assert _bytes(toy_config.output_dir, [EDGES_FILE]) == before
        assert list(toy_config.output_dir.glob("*.part")) == []
        assert not (toy_config.output_dir / LOCK_FILE).exists()

    def test_concurrent_runs_on_one_directory_are_refused(self, toy_config):
        with output_lock(toy_config.output_dir):
            with pytest.raises(ConfigError, match="in use"):
                run_pipeline(toy_config)
        assert (toy_config.output_dir / LOCK_FILE).exists() is False


class TestTemporalModes:
    def _config_without_timestamps(self, tmp_path, temporal):
        import dataclasses

        records = [
            dataclasses.replace(r, timestamp=None)
            for r in generate_polarized(PolarizedScenario())
        ]
        data = tmp_path / "interactions.csv"
        write_interactions(records, data)
        config_file = write_config(
            tmp_path / "run.toml",
            data,
            tmp_path / "out",
            extra=f'[metrics]\ntemporal = "{temporal}"\n',
        )
        return load_config(config_file)

    def test_auto_mode_skips_temporal_when_coverage_is_partial(self, tmp_path):
        config = self._config_without_timestamps(tmp_path, "auto")
        report = run_pipeline(config)
        assert report["stages"]["metrics"]["temporal_computed"] is False
        assert not (config.output_dir / TEMPORAL_FILE).exists()
        assert TEMPORAL_FILE not in report["artifacts"]

    def test_on_mode_fails_loudly_without_timestamps(self, tmp_path):
        config = self._config_without_timestamps(tmp_path, "on")
        with pytest.raises(MissingTimestampError, match="stage metrics.*timestamp"):
            run_pipeline(config)

    def test_off_mode_skips_temporal_even_with_full_coverage(
        self, toy_interactions_file, tmp_path
    ):
        config = load_config(
            write_config(
                tmp_path / "run.toml",
                toy_interactions_file,
                tmp_path / "out",
                extra='[metrics]\ntemporal = "off"\n',
            )
        )
        report = run_pipeline(config)
        assert report["stages"]["metrics"]["temporal_computed"] is False
        assert not (config.output_dir / TEMPORAL_FILE).exists()

    def test_a_stale_temporal_artifact_is_removed(self, toy_interactions_file, tmp_path):
        with_temporal = load_config(
            write_config(tmp_path / "a.toml", toy_interactions_file, tmp_path / "out")
        )
        run_pipeline(with_temporal)
        assert (with_temporal.output_dir / TEMPORAL_FILE).exists()
        without = load_config(
            write_config(
                tmp_path / "b.toml",
                toy_interactions_file,
                tmp_path / "out",
                extra='[metrics]\ntemporal = "off"\n',
            )
        )
        run_pipeline(without)
        assert not (without.output_dir / TEMPORAL_FILE).exists()


class TestMultiAspect:
    @pytest.fixture()
    def two_aspect_config(self, toy_records, tmp_path):
        interactions = tmp_path / "interactions.csv"
        write_interactions(toy_records, interactions)
        attributes = tmp_path / "hashtags.csv"
        rows = []
        for i in range(1, 6):
            rows.append(AttributeRecord(f"A{i}", "hashtags", "#camp-a", 8.0))
            rows.append(AttributeRecord(f"A{i}", "hashtags", "#shared", 2.0))
            rows.append(AttributeRecord(f"B{i}", "hashtags", "#camp-b", 8.0))
            rows.append(AttributeRecord(f"B{i}", "hashtags", "#shared", 2.0))
        write_attributes(rows, attributes)
        config_file = tmp_path / "run.toml"
        config_file.write_text(
            f"""
[activity]
min_total = 9

[inputs.interactions]
path = "{interactions}"

[inputs.hashtags]
path = "{attributes}"
kind = "attributes"

[similarity]
threshold = 0.5

[similarity.weights]
interactions = 2.0
hashtags = 1.0

[output]
directory = "{tmp_path / 'out'}"
""",
            encoding="utf-8",
        )
        return load_config(config_file)

    def test_weighted_sum_blends_both_aspects(self, two_aspect_config):
        report = run_pipeline(two_aspect_config)
        assert report["stages"]["similarity"]["weights"] == {
            "hashtags": 1.0,
            "interactions": 2.0,
        }
        assert report["stages"]["cluster"]["clusters"] == 2
        vectors = (two_aspect_config.output_dir / VECTORS_FILE).read_text(encoding="utf-8")
        assert "hashtags" in vectors and "interactions" in vectors

    def test_composite_mode_runs_end_to_end(self, two_aspect_config, tmp_path):
        import dataclasses

        config = dataclasses.replace(
            two_aspect_config,
            combination="composite-vector",
            output_dir=tmp_path / "out_composite",
        )
        report = run_pipeline(config)
        assert report["stages"]["similarity"]["combination"] == "composite-vector"
        assert report["stages"]["cluster"]["clusters"] == 2

    def test_attribute_aspects_skip_the_global_activity_floor(self, two_aspect_config):
        report = run_pipeline(two_aspect_config)
        info = report["stages"]["vectorize"]["hashtags"]
        assert info["min_total"] == 0.0
        assert info["dropped_by_activity"] == 0
        assert info["vectors"] == 10


class TestVectorizeDetails:
    def test_activity_floor_drops_quiet_accounts(self, toy_interactions_file, tmp_path):
        config = load_config(
            write_config(
                tmp_path / "run.toml", toy_interactions_file, tmp_path / "out", min_total=10
            )
        )
        report = run_pipeline(config)
        info = report["stages"]["vectorize"]["interactions"]
        assert info["accounts"] == 10
        assert info["dropped_by_activity"] == 10
        assert info["vectors"] == 0
        assert report["stages"]["similarity"]["edges"] == 0

    def test_type_filter_restricts_totals(self, toy_interactions_file, tmp_path):
        config_file = write_config(
            tmp_path / "run.toml",
            toy_interactions_file,
            tmp_path / "out",
            min_total=4,
            extra="",
        )
        text = config_file.read_text(encoding="utf-8").replace(
            "[inputs.interactions]", "[inputs.interactions]\ntypes = [\"retweet\"]"
        )
        config_file.write_text(text, encoding="utf-8")
        config = load_config(config_file)
        report = run_pipeline(config)
        vectors = (config.output_dir / VECTORS_FILE).read_text(encoding="utf-8")
        assert "mention" not in vectors
        assert report["stages"]["metrics"]["interaction_records"] == 40
