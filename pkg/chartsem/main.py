"""
Command-line entry point for chartsem.
"""

import argparse
import logging
import sys
from typing import List, Optional

from .config import load_config, with_overrides
from .errors import ChartsemError
from .pipeline import FULL_STAGES, PipelineRunner
from .utils.logger import setup_logging

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2
EXIT_USAGE = 64

STAGE_HELP = {
    'synth': "generate tables, recommend charts and render SVGs",
    'insights': "synthesize visual, statistics and task insights",
    'train': "train the dual encoder on chart-insight pairs",
    'embed': "embed every chart with the trained chart tower",
    'index': "load, check and rewrite the chart embedding index",
    'bench-build': "group visually similar charts into target and distractors",
    'queries': "generate queries, collect votes and assemble the benchmark",
    'eval': "evaluate text-to-chart retrieval on the benchmark",
    'stats': "write benchmark overview statistics",
    'ablation': "train and evaluate every insight-level combination",
    'ocr-eval': "compare text-to-chart with text-to-OCR retrieval",
    'preprocess-compare': "compare direct resize with center crop preprocessing",
    'encoder-compare': "compare encoder variants with and without insight training",
    'caption-eval': "retrieve charts from their own long captions",
    'all': "run the core stages in order",
}


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code on bad input."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="TOML configuration file")
    common.add_argument('--seed', type=int, help="global seed (overrides the config file)")
    common.add_argument('--tables', type=int, help="number of synthetic tables")
    common.add_argument('--jobs', type=int, help="worker threads")
    common.add_argument('--out', help="output directory")
    common.add_argument('--dry-run', action='store_true', help="validate without writing files")
    common.add_argument('--verbose', '-v', action='store_true', help="debug logging")

    parser = UsageParser(prog='chartsem', description="Text-to-chart retrieval corpus, training and benchmark")
    sub = parser.add_subparsers(dest='command', metavar='command', parser_class=UsageParser)
    sub.required = True
    for name, help_text in STAGE_HELP.items():
        stage = sub.add_parser(name, parents=[common], help=help_text)
        if name == 'all':
            stage.add_argument('--full', action='store_true',
                               help=f"also run {' and '.join(FULL_STAGES)}")
    return parser


def _exit_code(error: Optional[BaseException]) -> int:
    if error is None:
        return EXIT_OK
    if isinstance(error, ChartsemError):
        return EXIT_DOMAIN
    return EXIT_IO


def main(argv: Optional[List[str]] = None) -> int:
    """Run a chartsem command; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(verbose=args.verbose)
    logger = logging.getLogger(__name__)

    try:
        config = with_overrides(load_config(args.config), seed=args.seed, tables=args.tables,
                                jobs=args.jobs, output_dir=args.out)
        config.validate()
    except ChartsemError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO

    logger.info(f"Running {args.command} with seed {config.seed} into {config.output_dir}")
    runner = PipelineRunner(config, dry_run=args.dry_run)

    if args.command == 'all':
        results = runner.run_all(full=args.full)
        for stage, success, message in results:
            print(f"{stage}: {'ok' if success else 'FAILED'} - {message}")
        if not results[-1][1]:
            print(f"Error: {results[-1][2]}", file=sys.stderr)
        return _exit_code(runner.failure)

    success, message = runner.run(args.command)
    if success:
        print(message)
    else:
        print(f"Error: {message}", file=sys.stderr)
    return _exit_code(runner.failure)


if __name__ == '__main__':
    sys.exit(main())
