"""End-to-end orchestration: ingest → vectors → similarity → clusters → metrics.

Every stage consumes files (the configured inputs or earlier stages'
artifacts) and writes files, so running the stages one at a time produces
byte-identical artifacts to a single full run — the full run simply calls
the same stage functions in order. Stage outputs are written to temporary
names and renamed on success; a failing stage leaves no partial files.
Stage timings are logged to stderr, never into artifacts, which keeps
repeated runs byte-identical.

Artifacts, all in the configured output directory:

===================  =========================================================
validation.json      per-aspect row counts and coverage from parsing
vectors.csv          normalized practice vectors (full-precision intermediate)
edges.csv            thresholded similarity edges (Gephi format, UNDIRECTED)
clusters.csv         node table: cluster id + intra-cluster weighted degree
archetypes.csv       top-k most central accounts per cluster
ei_index.csv         E-I index per cluster, overall and per interaction type
temporal.csv         posts per time bin per cluster (when timestamps allow)
targets.csv          most frequent targets of each cluster's archetypes
backprojection.csv   node -> cluster table for recoloring the original network
run_report.json      config echo, stage counts, notes (full runs only)
===================  =========================================================
"""

from __future__ import annotations

import logging
import os
import time
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
from typing import Callable, Iterator, Mapping

from . import artifacts
from ._version import __version__
from .config import (
    KIND_INTERACTIONS,
    TEMPORAL_AUTO,
    TEMPORAL_ON,
    WEIGHTED_SUM,
    InputSpec,
    RunConfig,
)
from .errors import ConfigError, InputError
from .graph import build_graph, intra_cluster_weighted_degree, louvain
from .metrics import (
    ei_report,
    temporal_contributions,
    timestamp_coverage,
    top_targets,
)
from .records import (
    InteractionRecord,
    parse_attributes,
    parse_interactions,
    validation_report,
)
from .similarity import (
    combine_aspect_similarities,
    concat_composite_vector,
    pairwise_similarities,
    threshold_edges,
)
from .vectors import (
    COMBINED,
    OUTGOING,
    accumulate_attribute_vectors,
    accumulate_interaction_vectors,
    filter_by_activity,
    normalize_all,
    split_degenerate,
)

log = logging.getLogger("practicemap")

VALIDATION_FILE = "validation.json"
VECTORS_FILE = "vectors.csv"
EDGES_FILE = "edges.csv"
CLUSTERS_FILE = "clusters.csv"
ARCHETYPES_FILE = "archetypes.csv"
EI_FILE = "ei_index.csv"
TEMPORAL_FILE = "temporal.csv"
TARGETS_FILE = "targets.csv"
BACKPROJECTION_FILE = "backprojection.csv"
REPORT_FILE = "run_report.json"
LOCK_FILE = ".practicemap.lock"

GEPHI_NOTE = (
    "edges.csv is an UNDIRECTED edge list: import it into Gephi (or any other "
    "network tool) as an undirected network, or the similarities will be "
    "misread as directed ties."
)


class _StageFiles:
    """Stage outputs go to temporary names, renamed only on success."""

    def __init__(self, outdir: Path) -> None:
        self.outdir = outdir
        self._pending: list[tuple[Path, Path]] = []

    def target(self, name: str) -> Path:
        temp = self.outdir / (name + ".part")
        self._pending.append((temp, self.outdir / name))
        return temp

    def commit(self) -> None:
        for temp, final in self._pending:
            os.replace(temp, final)
        self._pending.clear()

    def abort(self) -> None:
        for temp, _ in self._pending:
            temp.unlink(missing_ok=True)
        self._pending.clear()


@contextmanager
def _stage_files(outdir: Path) -> Iterator[_StageFiles]:
    outdir.mkdir(parents=True, exist_ok=True)
    files = _StageFiles(outdir)
    try:
        yield files
    except BaseException:
        files.abort()
        raise
    files.commit()


@contextmanager
def output_lock(outdir: Path) -> Iterator[None]:
    """Exclusive hold on an output directory for the duration of a run."""
    outdir.mkdir(parents=True, exist_ok=True)
    lock = outdir / LOCK_FILE
    try:
        descriptor = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise ConfigError(
            f"output directory {outdir} is in use by another run "
            f"(delete {lock.name} if that run is gone)"
        ) from None
    try:
        os.write(descriptor, f"{os.getpid()}\n".encode())
        os.close(descriptor)
        yield
    finally:
        lock.unlink(missing_ok=True)


def _parse_input(spec: InputSpec, delimiter: str):
    if not spec.path.exists():
        raise InputError(f"input file for aspect {spec.aspect!r} not found: {spec.path}")
    if spec.kind == KIND_INTERACTIONS:
        return parse_interactions(spec.path, delimiter)
    return parse_attributes(spec.path, spec.aspect, delimiter)


def _interaction_records(config: RunConfig) -> list[InteractionRecord]:
    """All interaction records, per-input type filters applied."""
    records: list[InteractionRecord] = []
    for spec in config.inputs:
        if spec.kind != KIND_INTERACTIONS:
            continue
        parsed = _parse_input(spec, config.delimiter)
        if spec.types is None:
            records.extend(parsed.records)
        else:
            wanted = set(spec.types)
            records.extend(r for r in parsed.records if r.interaction_type in wanted)
    return records


def stage_validate(config: RunConfig) -> dict:
    """Parse every input and write per-aspect validation summaries."""
    reports = {}
    for spec in config.inputs:
        result = _parse_input(spec, config.delimiter)
        reports[spec.aspect] = validation_report(result).as_dict()
    with _stage_files(config.output_dir) as files:
        artifacts.write_json(files.target(VALIDATION_FILE), reports)
    return reports


def stage_vectorize(config: RunConfig) -> dict:
    """Build, filter, and normalize practice vectors for every aspect."""
    rows: list = []
    info: dict = {}
    for spec in config.inputs:
        result = _parse_input(spec, config.delimiter)
        if spec.kind == KIND_INTERACTIONS:
            raw = accumulate_interaction_vectors(
                result.records,
                direction=spec.direction,
                type_filter=spec.types,
                include_self=spec.include_self,
                aspect=spec.aspect,
            )
        else:
            raw = accumulate_attribute_vectors(result.records)
        floor = config.effective_min_total(spec)
        active = filter_by_activity(raw, floor)
        normalized, degenerate = split_degenerate(normalize_all(active))
        rows.extend(artifacts.vector_rows({a: active[a] for a in normalized}, normalized))
        info[spec.aspect] = {
            "rows_accepted": result.total_rows - len(result.skipped),
            "rows_skipped": len(result.skipped),
            "accounts": len(raw),
            "min_total": floor,
            "dropped_by_activity": len(raw) - len(active),
            "degenerate_accounts": degenerate,
            "vectors": len(normalized),
        }
    with _stage_files(config.output_dir) as files:
        artifacts.write_vector_table(files.target(VECTORS_FILE), rows, config.delimiter)
    return info


def _vectors_by_aspect(config: RunConfig) -> dict[str, dict]:
    path = config.output_dir / VECTORS_FILE
    if not path.exists():
        raise InputError(f"{VECTORS_FILE} not found in {config.output_dir}; run vectorize first")
    groups = artifacts.read_vector_table(path, config.delimiter)
    per_aspect = {}
    for spec in config.inputs:
        direction = spec.direction if spec.kind == KIND_INTERACTIONS else OUTGOING
        per_aspect[spec.aspect] = groups.get((spec.aspect, direction), {})
    return per_aspect


def stage_similarity(config: RunConfig) -> dict:
    """Compute thresholded pairwise similarities and write the edge list."""
    per_aspect = _vectors_by_aspect(config)
    if config.combination == WEIGHTED_SUM:
        if len(config.inputs) == 1:
            # One aspect: its normalized weight is exactly 1, so combining
            # is the identity and the threshold can prune pairs up front.
            edges = pairwise_similarities(
                per_aspect[config.inputs[0].aspect], config.similarity_threshold
            )
        else:
            unthresholded = {
                aspect: pairwise_similarities(per_aspect[aspect], 0.0)
                for aspect in config.aspects
            }
            combined = combine_aspect_similarities(unthresholded, config.weights)
            edges = threshold_edges(combined, config.similarity_threshold)
    else:
        label = "+".join(config.aspects)
        directions = {
            spec.direction if spec.kind == KIND_INTERACTIONS else OUTGOING
            for spec in config.inputs
        }
        direction = directions.pop() if len(directions) == 1 else COMBINED
        accounts = sorted(set().union(*(per_aspect[a] for a in config.aspects)))
        composites = {}
        for account in accounts:
            parts = [
                per_aspect[aspect][account]
                for aspect in config.aspects
                if account in per_aspect[aspect]
            ]
            composites[account] = replace(
                concat_composite_vector(parts), aspect=label, direction=direction
            )
        edges = pairwise_similarities(composites, config.similarity_threshold)
    with _stage_files(config.output_dir) as files:
        artifacts.write_edges(files.target(EDGES_FILE), edges, config.delimiter)
    accounts_seen = set()
    for vectors in per_aspect.values():
        accounts_seen.update(vectors)
    return {
        "accounts": len(accounts_seen),
        "edges": len(edges),
        "threshold": config.similarity_threshold,
        "combination": config.combination,
        "weights": dict(sorted(config.weights.items())),
    }


def stage_cluster(config: RunConfig) -> dict:
    """Cluster the similarity network and write the node table."""
    per_aspect = _vectors_by_aspect(config)
    accounts = sorted(set().union(*(per_aspect[a] for a in config.aspects)))
    edges_path = config.output_dir / EDGES_FILE
    if not edges_path.exists():
        raise InputError(f"{EDGES_FILE} not found in {config.output_dir}; run similarity first")
    edges = artifacts.read_edges(edges_path, config.delimiter)
    graph = build_graph(edges, accounts)
    assignment = louvain(graph, config.resolution, config.seed)
    degrees = intra_cluster_weighted_degree(graph, assignment)
    with _stage_files(config.output_dir) as files:
        artifacts.write_clusters(
            files.target(CLUSTERS_FILE), assignment.membership, degrees, config.delimiter
        )
    return {
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "clusters": assignment.n_clusters,
        "modularity": assignment.modularity,
        "modularity_trace": list(assignment.trace),
        "resolution": config.resolution,
        "seed": config.seed,
    }


def stage_metrics(config: RunConfig) -> dict:
    """Archetypes, E-I indices, temporal series, targets, backprojection."""
    clusters_path = config.output_dir / CLUSTERS_FILE
    if not clusters_path.exists():
        raise InputError(f"{CLUSTERS_FILE} not found in {config.output_dir}; run cluster first")
    membership, degrees = artifacts.read_clusters(clusters_path, config.delimiter)
    archetypes: dict[int, list[tuple[str, float]]] = {}
    for cluster in sorted(set(membership.values())):
        members = [(node, degrees[node]) for node in membership if membership[node] == cluster]
        members.sort(key=lambda item: (-item[1], item[0]))
        archetypes[cluster] = members[: config.archetype_k]

    records = _interaction_records(config)
    ei_values = ei_report(records, membership)
    targets = {
        cluster: top_targets(records, [node for node, _ in archetypes[cluster]], config.archetype_k)
        for cluster in archetypes
    }

    coverage = timestamp_coverage(records)
    temporal_on = config.temporal == TEMPORAL_ON or (
        config.temporal == TEMPORAL_AUTO and bool(records) and coverage == 1.0
    )
    series = temporal_contributions(records, membership, config.bin_width) if temporal_on else None

    with _stage_files(config.output_dir) as files:
        artifacts.write_archetypes(files.target(ARCHETYPES_FILE), archetypes, config.delimiter)
        artifacts.write_ei(files.target(EI_FILE), ei_values, config.delimiter)
        artifacts.write_targets(files.target(TARGETS_FILE), targets, config.delimiter)
        artifacts.write_backprojection(
            files.target(BACKPROJECTION_FILE), membership, config.delimiter
        )
        if series is not None:
            artifacts.write_temporal(files.target(TEMPORAL_FILE), series, config.delimiter)
    if series is None:
        # A stale series from an earlier run would misrepresent this one.
        (config.output_dir / TEMPORAL_FILE).unlink(missing_ok=True)
    return {
        "clusters": len(archetypes),
        "archetype_k": config.archetype_k,
        "interaction_records": len(records),
        "ei_rows": len(ei_values),
        "timestamp_coverage": coverage,
        "temporal_computed": series is not None,
        "temporal_bins": sum(len(s.bins) for s in series) if series is not None else 0,
    }


STAGES: Mapping[str, Callable[[RunConfig], dict]] = {
    "validate": stage_validate,
    "vectorize": stage_vectorize,
    "similarity": stage_similarity,
    "cluster": stage_cluster,
    "metrics": stage_metrics,
}


def _run_attributed(name: str, stage: Callable[[RunConfig], dict], config: RunConfig) -> dict:
    started = time.perf_counter()
    try:
        info = stage(config)
    except Exception as error:
        error.args = (f"stage {name}: {error}",)
        raise
    log.info("stage %s finished in %.3f s", name, time.perf_counter() - started)
    return info


def run_stage(name: str, config: RunConfig) -> dict:
    """Run one stage under the output-directory lock."""
    if name not in STAGES:
        raise ConfigError(f"unknown stage {name!r}; expected one of {sorted(STAGES)}")
    with output_lock(config.output_dir):
        return _run_attributed(name, STAGES[name], config)


def run_pipeline(config: RunConfig) -> dict:
    """Run every stage in order and write the run report.

    Returns the run report: the resolved configuration, per-stage counts,
    and the Gephi undirected-import reminder. Timings are logged to
    stderr only, so identical runs stay byte-identical on disk.
    """
    with output_lock(config.output_dir):
        report: dict = {
            "config": config.to_dict(),
            "stages": {},
            "gephi_note": GEPHI_NOTE,
            "version": __version__,
        }
        for name, stage in STAGES.items():
            report["stages"][name] = _run_attributed(name, stage, config)
        produced = [
            VALIDATION_FILE,
            VECTORS_FILE,
            EDGES_FILE,
            CLUSTERS_FILE,
            ARCHETYPES_FILE,
            EI_FILE,
            TARGETS_FILE,
            BACKPROJECTION_FILE,
        ]
        if report["stages"]["metrics"]["temporal_computed"]:
            produced.append(TEMPORAL_FILE)
        report["artifacts"] = sorted(produced)
        with _stage_files(config.output_dir) as files:
            artifacts.write_json(files.target(REPORT_FILE), report)
    return report
