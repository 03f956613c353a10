"""Shared fixtures: the two-camp toy scenario at every pipeline stage.

Also prints a one-line PASS/FAIL summary per acceptance criterion at the
end of a run (see test_acceptance.py).
"""

from __future__ import annotations

from pathlib import Path

import pytest

from practicemap import (
    PolarizedScenario,
    accumulate_interaction_vectors,
    build_graph,
    generate_polarized,
    louvain,
    normalize_all,
    pairwise_similarities,
    write_interactions,
)

_acceptance_results: dict[str, bool] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.failed:
        _acceptance_results[name] = False
    elif report.when == "call" and report.passed:
        _acceptance_results.setdefault(name, True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_acceptance_results):
        status = "PASS" if _acceptance_results[name] else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")


@pytest.fixture(scope="session")
def toy_records():
    """Two groups of five: retweets inside the group, mentions across."""
    return generate_polarized(PolarizedScenario())


@pytest.fixture(scope="session")
def toy_raw_vectors(toy_records):
    return accumulate_interaction_vectors(toy_records)


@pytest.fixture(scope="session")
def toy_vectors(toy_raw_vectors):
    return normalize_all(toy_raw_vectors)


@pytest.fixture(scope="session")
def toy_edges(toy_vectors):
    return pairwise_similarities(toy_vectors, 0.6)


@pytest.fixture(scope="session")
def toy_graph(toy_edges, toy_vectors):
    return build_graph(toy_edges, toy_vectors)


@pytest.fixture(scope="session")
def toy_assignment(toy_graph):
    return louvain(toy_graph, resolution=1.0, seed=0)


@pytest.fixture()
def toy_interactions_file(toy_records, tmp_path) -> Path:
    path = tmp_path / "interactions.csv"
    write_interactions(toy_records, path)
    return path


def write_config(
    path: Path,
    interactions: Path,
    output_dir: Path,
    min_total: float = 9,
    threshold: float = 0.6,
    extra: str = "",
) -> Path:
    """A minimal single-aspect TOML config for CLI and pipeline tests."""
    path.write_text(
        f"""
[activity]
min_total = {min_total}

[inputs.interactions]
path = "{interactions}"

[similarity]
threshold = {threshold}

[output]
directory = "{output_dir}"
{extra}
""",
        encoding="utf-8",
    )
    return path
