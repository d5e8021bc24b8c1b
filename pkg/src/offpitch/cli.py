"""Command line entry point.

One subcommand per pipeline stage plus `all`. Exit codes: 0 success,
1 config or lock problems, 2 runtime failures, 3 missing stage inputs.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .networks import ConfigError
from .pipeline import (
    LockError,
    PrerequisiteError,
    STAGES,
    load_config,
    run_all,
    run_stage,
)

logger = logging.getLogger(__name__)

_STAGE_HELP = {
    "synth": "generate a synthetic corpus with planted campaigns",
    "extract": "filter the corpus to the political subset",
    "networks": "build co-occurrence, interaction and similarity networks",
    "metrics": "compute global properties and centralities",
    "communities": "detect communities in similarity and retweet networks",
    "themes": "label hashtag communities and profile user engagement",
    "influence": "run the campaign detectors",
    "report": "bundle stage outputs into a single report",
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="TOML config file")
    parser.add_argument(
        "--out", metavar="DIR", help="output directory (overrides OFFPITCH_OUT and config)"
    )
    parser.add_argument("--seed", type=int, metavar="N", help="run seed override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="offpitch",
        description="Political-content infiltration analysis for fan community corpora.",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="debug-level logging"
    )
    sub = parser.add_subparsers(dest="stage", required=True, metavar="STAGE")
    for stage in STAGES:
        stage_parser = sub.add_parser(stage, help=_STAGE_HELP[stage])
        _add_common(stage_parser)
    all_parser = sub.add_parser("all", help="run every stage in order")
    _add_common(all_parser)
    all_parser.add_argument(
        "--stage-only",
        metavar="NAMES",
        help="comma separated subset of stages to run, still in pipeline order",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args.config, out_dir=args.out, seed=args.seed)
        if args.stage == "all":
            only = None
            if args.stage_only:
                only = [s.strip() for s in args.stage_only.split(",") if s.strip()]
            artifacts = run_all(config, only=only)
        else:
            artifacts = run_stage(args.stage, config)
    except (ConfigError, LockError) as exc:
        logger.error("%s", exc)
        return 1
    except PrerequisiteError as exc:
        logger.error("%s", exc)
        return 3
    except Exception as exc:  # noqa: BLE001 - boundary of the process
        logger.error("stage failed: %s", exc, exc_info=args.verbose)
        return 2
    for artifact in artifacts:
        logger.info("wrote %s", config.out_dir / artifact)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
