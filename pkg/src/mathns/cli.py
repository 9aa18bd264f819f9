"""Command-line interface.

One subcommand per pipeline stage plus ``pipeline`` to run everything;
``pipeline --stage X`` resumes from a stage using cached artifacts.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, StageError
from .pipeline import STAGES, PipelineConfig, run_pipeline, run_stage


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mathns",
        description="Discover namespaces of mathematical identifiers from a corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in STAGES + ("pipeline",):
        cmd = sub.add_parser(name, help=f"run the {name} stage" if name != "pipeline" else "run all stages")
        cmd.add_argument("--config", required=True, help="path to the JSON config file")
        cmd.add_argument("--seed", type=int, default=None, help="override the config seed")
        cmd.add_argument("--out", default=None, help="override the output directory")
        if name == "pipeline":
            cmd.add_argument(
                "--stage",
                choices=STAGES,
                default=None,
                help="resume from this stage, reusing cached artifacts",
            )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = PipelineConfig.load(args.config, seed=args.seed, out=args.out)
        if args.command == "pipeline":
            run_pipeline(config, from_stage=args.stage)
        else:
            run_stage(config, args.command)
    except (ConfigError, StageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
