"""Command-line entry point.

Subcommands mirror the pipeline stages plus two utilities::

    practicemap run        --config run.toml    # everything, plus run report
    practicemap validate   --config run.toml
    practicemap vectorize  --config run.toml
    practicemap similarity --config run.toml
    practicemap cluster    --config run.toml
    practicemap metrics    --config run.toml
    practicemap synth      --out interactions.csv [--groups 5,5 ...]

Exit codes: 0 success, 1 configuration error, 2 input error, 3 internal
error. Progress and stage timings go to stderr; artifacts go to the
configured output directory.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from . import pipeline
from ._version import __version__
from .config import RunConfig, load_config
from .errors import ConfigError, InputError, PracticeMapError
from .records import write_interactions
from .synth import PolarizedScenario, generate_polarized

_STAGE_COMMANDS = ("validate", "vectorize", "similarity", "cluster", "metrics")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        # Usage mistakes are configuration errors (exit code 1), not the
        # default argparse exit status.
        raise ConfigError(message)


def _config_flags() -> argparse.ArgumentParser:
    flags = _Parser(add_help=False)
    flags.add_argument("--config", required=True, metavar="FILE", help="TOML run configuration")
    flags.add_argument("--output-dir", metavar="DIR", help="override the output directory")
    flags.add_argument("--threshold", type=float, help="override the similarity threshold")
    flags.add_argument("--min-total", type=float, help="override the activity threshold")
    flags.add_argument("--resolution", type=float, help="override the clustering resolution")
    flags.add_argument("--seed", type=int, help="override the clustering seed")
    flags.add_argument("--archetype-k", type=int, help="override the archetype list length")
    return flags


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="practicemap",
        description="Map shared social-media practices into similarity networks and clusters.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")
    flags = _config_flags()

    run = commands.add_parser("run", parents=[flags], help="run every stage and write a run report")
    run.set_defaults(handler=_handle_run)

    stage_help = {
        "validate": "parse inputs and write validation.json",
        "vectorize": "build normalized practice vectors (vectors.csv)",
        "similarity": "compute thresholded pairwise similarities (edges.csv)",
        "cluster": "detect practice clusters (clusters.csv)",
        "metrics": "write archetype, E-I, temporal, and target reports",
    }
    for name in _STAGE_COMMANDS:
        stage = commands.add_parser(name, parents=[flags], help=stage_help[name])
        stage.set_defaults(handler=_handle_stage)

    synth = commands.add_parser("synth", help="generate a synthetic polarized scenario")
    synth.add_argument("--out", required=True, metavar="FILE", help="interactions file to write")
    synth.add_argument(
        "--groups", default="5,5", metavar="N,N[,N...]", help="group sizes (default 5,5)"
    )
    synth.add_argument("--in-type", default="retweet", help="in-group interaction type")
    synth.add_argument("--out-type", default="mention", help="out-group interaction type")
    synth.add_argument("--repetitions", type=int, default=1, help="records per directed pair")
    synth.set_defaults(handler=_handle_synth)
    return parser


def _load(args: argparse.Namespace) -> RunConfig:
    overrides = {}
    if args.output_dir is not None:
        overrides["output_dir"] = args.output_dir
    if args.threshold is not None:
        overrides["similarity_threshold"] = args.threshold
    if args.min_total is not None:
        overrides["min_total"] = args.min_total
    if args.resolution is not None:
        overrides["resolution"] = args.resolution
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.archetype_k is not None:
        overrides["archetype_k"] = args.archetype_k
    return load_config(args.config, overrides)


def _handle_run(args: argparse.Namespace) -> int:
    pipeline.run_pipeline(_load(args))
    return 0


def _handle_stage(args: argparse.Namespace) -> int:
    pipeline.run_stage(args.command, _load(args))
    return 0


def _handle_synth(args: argparse.Namespace) -> int:
    try:
        sizes = tuple(int(part) for part in args.groups.split(","))
    except ValueError:
        raise ConfigError(f"--groups must be comma-separated integers, got {args.groups!r}") from None
    scenario = PolarizedScenario(
        group_sizes=sizes,
        in_group_type=args.in_type,
        out_group_type=args.out_type,
        repetitions=args.repetitions,
    )
    write_interactions(generate_polarized(scenario), args.out)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except ConfigError as error:
        print(f"practicemap: configuration error: {error}", file=sys.stderr)
        return 1
    except InputError as error:
        print(f"practicemap: input error: {error}", file=sys.stderr)
        return 2
    except PracticeMapError as error:
        print(f"practicemap: error: {error}", file=sys.stderr)
        return 3
    except Exception as error:  # pragma: no cover - defensive catch-all
        print(f"practicemap: internal error: {type(error).__name__}: {error}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
