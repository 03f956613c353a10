"""Run configuration: one TOML file describing an entire analysis.

A config names the input files (one per aspect), the thresholds, the
clustering parameters, and the output directory, so a run is fully
reproducible from a single citable artifact. Command-line flags and the
PRACTICEMAP_OUTPUT_DIR environment variable can override individual
values.

Relative input paths are resolved against the config file's own
directory, so a config can travel with its data.

Example::

    [activity]
    min_total = 100

    [inputs.interactions]
    path = "interactions.csv"
    kind = "interactions"
    direction = "outgoing"
    # types = ["retweet", "mention"]

    [inputs.hashtags]
    path = "hashtags.csv"
    kind = "attributes"

    [similarity]
    threshold = 0.6
    combination = "weighted-sum"

    [similarity.weights]
    interactions = 2.0
    hashtags = 1.0

    [clustering]
    resolution = 1.0
    seed = 0

    [metrics]
    archetype_k = 10
    temporal = "auto"
    bin_days = 7

    [output]
    directory = "out"
    delimiter = ","
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from datetime import timedelta
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib  # type: ignore[no-redef]

from .errors import ConfigError, InputError
from .vectors import DIRECTIONS, OUTGOING

OUTPUT_DIR_ENV = "PRACTICEMAP_OUTPUT_DIR"

KIND_INTERACTIONS = "interactions"
KIND_ATTRIBUTES = "attributes"
KINDS = (KIND_INTERACTIONS, KIND_ATTRIBUTES)

WEIGHTED_SUM = "weighted-sum"
COMPOSITE_VECTOR = "composite-vector"
COMBINATIONS = (WEIGHTED_SUM, COMPOSITE_VECTOR)

TEMPORAL_AUTO = "auto"
TEMPORAL_ON = "on"
TEMPORAL_OFF = "off"
TEMPORAL_MODES = (TEMPORAL_AUTO, TEMPORAL_ON, TEMPORAL_OFF)

DEFAULT_MIN_TOTAL = 100.0
DEFAULT_THRESHOLD = 0.6
DEFAULT_RESOLUTION = 1.0
DEFAULT_ARCHETYPE_K = 10
DEFAULT_BIN_DAYS = 7
DELIMITERS = (",", "\t")

# Aspect labels become key prefixes in composite vectors, so the prefix
# separators themselves are off limits.
_RESERVED_ASPECT_CHARS = (":", "+")


@dataclass(frozen=True)
class InputSpec:
    """One input file: an aspect label plus how to read and vectorize it."""

    aspect: str
    path: Path
    kind: str = KIND_INTERACTIONS
    direction: str = OUTGOING
    types: tuple[str, ...] | None = None
    min_total: float | None = None
    include_self: bool = True

    def __post_init__(self) -> None:
        if not self.aspect:
            raise ConfigError("aspect labels must be non-empty")
        for char in _RESERVED_ASPECT_CHARS:
            if char in self.aspect:
                raise ConfigError(f"aspect label {self.aspect!r} must not contain {char!r}")
        if self.kind not in KINDS:
            raise ConfigError(f"input kind must be one of {KINDS}, got {self.kind!r}")
        if self.direction not in DIRECTIONS:
            raise ConfigError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if self.types is not None:
            if self.kind != KIND_INTERACTIONS:
                raise ConfigError(f"aspect {self.aspect!r}: type filters apply to interactions only")
            if not self.types or any(not t for t in self.types):
                raise ConfigError(f"aspect {self.aspect!r}: type filter entries must be non-empty")
        if self.min_total is not None and self.min_total < 0:
            raise ConfigError(f"aspect {self.aspect!r}: min_total must be >= 0")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved parameters for one pipeline run."""

    inputs: tuple[InputSpec, ...]
    output_dir: Path
    min_total: float = DEFAULT_MIN_TOTAL
    similarity_threshold: float = DEFAULT_THRESHOLD
    combination: str = WEIGHTED_SUM
    weights: Mapping[str, float] = field(default_factory=dict)
    resolution: float = DEFAULT_RESOLUTION
    seed: int = 0
    archetype_k: int = DEFAULT_ARCHETYPE_K
    temporal: str = TEMPORAL_AUTO
    bin_width: timedelta = timedelta(days=DEFAULT_BIN_DAYS)
    delimiter: str = ","

    def __post_init__(self) -> None:
        if not self.inputs:
            raise ConfigError("at least one input aspect is required")
        aspects = [spec.aspect for spec in self.inputs]
        if len(set(aspects)) != len(aspects):
            raise ConfigError(f"duplicate aspect labels: {aspects}")
        if not self.weights:
            object.__setattr__(self, "weights", {aspect: 1.0 for aspect in aspects})
        unknown = sorted(set(self.weights) - set(aspects))
        if unknown:
            raise ConfigError(f"weights name unknown aspects: {unknown}")
        missing = sorted(set(aspects) - set(self.weights))
        if missing:
            raise ConfigError(f"weights missing for aspects: {missing}")
        for aspect, weight in self.weights.items():
            if not isinstance(weight, (int, float)) or weight != weight or weight < 0:
                raise ConfigError(f"weight for {aspect!r} must be a finite number >= 0")
        if sum(self.weights.values()) <= 0:
            raise ConfigError("at least one aspect weight must be positive")
        if self.min_total < 0:
            raise ConfigError(f"activity min_total must be >= 0, got {self.min_total}")
        if not 0.0 <= self.similarity_threshold <= 1.0:
            raise ConfigError(
                f"similarity threshold must be in [0, 1], got {self.similarity_threshold}"
            )
        if self.combination not in COMBINATIONS:
            raise ConfigError(f"combination must be one of {COMBINATIONS}, got {self.combination!r}")
        if self.resolution <= 0:
            raise ConfigError(f"resolution must be positive, got {self.resolution}")
        if not isinstance(self.seed, int):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        if self.archetype_k < 1:
            raise ConfigError(f"archetype_k must be >= 1, got {self.archetype_k}")
        if self.temporal not in TEMPORAL_MODES:
            raise ConfigError(f"temporal must be one of {TEMPORAL_MODES}, got {self.temporal!r}")
        if self.bin_width <= timedelta(0):
            raise ConfigError(f"temporal bin width must be positive, got {self.bin_width}")
        if self.delimiter not in DELIMITERS:
            raise ConfigError("delimiter must be ',' or a tab character")

    def effective_min_total(self, spec: InputSpec) -> float:
        """Per-aspect activity floor: explicit override, else the global
        default for interactions and 0 for attribute aspects (whose
        totals live on unrelated scales, e.g. topic affinities)."""
        if spec.min_total is not None:
            return spec.min_total
        return self.min_total if spec.kind == KIND_INTERACTIONS else 0.0

    @property
    def aspects(self) -> tuple[str, ...]:
        return tuple(spec.aspect for spec in self.inputs)

    def to_dict(self) -> dict[str, Any]:
        """JSON-serializable echo of every resolved parameter."""
        return {
            "inputs": [
                {
                    "aspect": spec.aspect,
                    "path": str(spec.path),
                    "kind": spec.kind,
                    "direction": spec.direction,
                    "types": list(spec.types) if spec.types is not None else None,
                    "min_total": self.effective_min_total(spec),
                    "include_self": spec.include_self,
                }
                for spec in self.inputs
            ],
            "output_dir": str(self.output_dir),
            "activity_min_total": self.min_total,
            "similarity_threshold": self.similarity_threshold,
            "combination": self.combination,
            "weights": dict(sorted(self.weights.items())),
            "resolution": self.resolution,
            "seed": self.seed,
            "archetype_k": self.archetype_k,
            "temporal": self.temporal,
            "bin_width_days": self.bin_width / timedelta(days=1),
            "delimiter": self.delimiter,
        }


def _section(data: Mapping[str, Any], name: str, allowed: tuple[str, ...]) -> Mapping[str, Any]:
    section = data.get(name, {})
    if not isinstance(section, Mapping):
        raise ConfigError(f"[{name}] must be a table")
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {unknown}")
    return section


def _value(section: Mapping[str, Any], key: str, kinds: type | tuple, default: Any, where: str) -> Any:
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) and kinds in ((int, float), float, int):
        raise ConfigError(f"{where}.{key} must be a number, got a boolean")
    if not isinstance(value, kinds):
        raise ConfigError(f"{where}.{key} has the wrong type: {value!r}")
    return value


def load_config(path: str | Path, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Parse and validate a TOML run configuration.

    ``overrides`` maps RunConfig field names (output_dir,
    similarity_threshold, min_total, resolution, seed, archetype_k) to
    replacement values, taking precedence over both the file and the
    PRACTICEMAP_OUTPUT_DIR environment variable.
    """
    config_path = Path(path)
    if not config_path.exists():
        raise InputError(f"config file not found: {config_path}")
    try:
        data = tomllib.loads(config_path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as error:
        raise ConfigError(f"config is not valid TOML: {error}") from None
    allowed_top = ("activity", "inputs", "similarity", "clustering", "metrics", "output")
    unknown = sorted(set(data) - set(allowed_top))
    if unknown:
        raise ConfigError(f"unknown config sections: {unknown}")

    base = config_path.parent
    inputs_table = data.get("inputs")
    if not isinstance(inputs_table, Mapping) or not inputs_table:
        raise ConfigError("config needs at least one [inputs.<aspect>] table")
    specs = []
    for aspect, raw in inputs_table.items():
        if not isinstance(raw, Mapping):
            raise ConfigError(f"[inputs.{aspect}] must be a table")
        allowed = ("path", "kind", "direction", "types", "min_total", "include_self")
        bad = sorted(set(raw) - set(allowed))
        if bad:
            raise ConfigError(f"unknown keys in [inputs.{aspect}]: {bad}")
        where = f"inputs.{aspect}"
        raw_path = _value(raw, "path", str, None, where)
        if not raw_path:
            raise ConfigError(f"[inputs.{aspect}] needs a path")
        types = raw.get("types")
        if types is not None and (
            not isinstance(types, list) or any(not isinstance(t, str) for t in types)
        ):
            raise ConfigError(f"{where}.types must be a list of strings")
        raw_min = _value(raw, "min_total", (int, float), None, where)
        specs.append(
            InputSpec(
                aspect=aspect,
                path=(base / raw_path).resolve() if not Path(raw_path).is_absolute() else Path(raw_path),
                kind=_value(raw, "kind", str, KIND_INTERACTIONS, where),
                direction=_value(raw, "direction", str, OUTGOING, where),
                types=tuple(types) if types is not None else None,
                min_total=float(raw_min) if raw_min is not None else None,
                include_self=_value(raw, "include_self", bool, True, where),
            )
        )

    activity = _section(data, "activity", ("min_total",))
    similarity = _section(data, "similarity", ("threshold", "combination", "weights"))
    clustering = _section(data, "clustering", ("resolution", "seed"))
    metrics = _section(data, "metrics", ("archetype_k", "temporal", "bin_days"))
    output = _section(data, "output", ("directory", "delimiter"))

    weights_raw = similarity.get("weights", {})
    if not isinstance(weights_raw, Mapping):
        raise ConfigError("[similarity.weights] must be a table of aspect = weight")
    weights = {}
    for aspect, weight in weights_raw.items():
        if isinstance(weight, bool) or not isinstance(weight, (int, float)):
            raise ConfigError(f"similarity.weights.{aspect} must be a number")
        weights[aspect] = float(weight)

    out_dir = _value(output, "directory", str, "out", "output")
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        out_dir = env_dir
    output_path = Path(out_dir)
    if not output_path.is_absolute() and not env_dir:
        output_path = (base / output_path).resolve()

    seed = _value(clustering, "seed", int, 0, "clustering")
    if isinstance(seed, bool):
        raise ConfigError("clustering.seed must be an integer")
    bin_days = _value(metrics, "bin_days", (int, float), DEFAULT_BIN_DAYS, "metrics")
    if bin_days <= 0:
        raise ConfigError(f"metrics.bin_days must be positive, got {bin_days}")

    config = RunConfig(
        inputs=tuple(specs),
        output_dir=output_path,
        min_total=float(_value(activity, "min_total", (int, float), DEFAULT_MIN_TOTAL, "activity")),
        similarity_threshold=float(
            _value(similarity, "threshold", (int, float), DEFAULT_THRESHOLD, "similarity")
        ),
        combination=_value(similarity, "combination", str, WEIGHTED_SUM, "similarity"),
        weights=weights,
        resolution=float(_value(clustering, "resolution", (int, float), DEFAULT_RESOLUTION, "clustering")),
        seed=seed,
        archetype_k=_value(metrics, "archetype_k", int, DEFAULT_ARCHETYPE_K, "metrics"),
        temporal=_value(metrics, "temporal", str, TEMPORAL_AUTO, "metrics"),
        bin_width=timedelta(days=bin_days),
        delimiter=_value(output, "delimiter", str, ",", "output"),
    )
    if overrides:
        known = {
            "output_dir",
            "similarity_threshold",
            "min_total",
            "resolution",
            "seed",
            "archetype_k",
        }
        bad = sorted(set(overrides) - known)
        if bad:
            raise ConfigError(f"unknown override keys: {bad}")
        fixed = dict(overrides)
        if "output_dir" in fixed:
            fixed["output_dir"] = Path(fixed["output_dir"])
        config = replace(config, **fixed)
    return config
