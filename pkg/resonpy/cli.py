"""
Command line entry point: ``resonpy <command> [flags]``.

Exit codes: 0 success, 1 invariant violation (a required check failed), 2 invalid
configuration or argument, 3 resource refusal.
"""
import argparse
import logging
import sys

from resonpy.config import Command, ExperimentConfig, fields_for
from resonpy.exceptions import EXIT_INVALID, EXIT_INVARIANT, EXIT_OK, ResonpyException
from resonpy.experiments import run
from resonpy.report import emit_plot_data
from resonpy.util import set_max_workers, set_progress
from resonpy.version import __version__

logger = logging.getLogger(__name__)

COMMAND_HELP = {
    Command.CONSTRUCT: "build the set B and its bucket representatives D",
    Command.GCD_SUM: "GCD sums over B",
    Command.LEMMA_CHECK: "numeric check of one lemma",
    Command.ZETA: "evaluate zeta(alpha + it) at a point or over a grid",
    Command.RESONATE: "weighted resonance integral by frequency type",
    Command.SEARCH: "search for large values of |zeta(alpha + it)| on [0, T]",
    Command.MEASURE: "estimate the measure of the level set above the threshold",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="resonpy",
        description="Resonance-method experiments for large values of |zeta(alpha + it)|",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version="%(prog)s {}".format(__version__))
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    for command in Command:
        sub = subparsers.add_parser(str(command), help=COMMAND_HELP[command], allow_abbrev=False)
        sub.add_argument("--config", help="JSON config file; flags override its values")
        for field in fields_for(command):
            if field.file_only:
                continue
            choices = None if field.choices is None else [str(c) for c in field.choices]
            default_help = "" if field.default is None else " (default: {})".format(field.default)
            sub.add_argument(
                field.flag,
                dest=field.name,
                default=argparse.SUPPRESS,
                choices=choices,
                help=field.help + default_help,
            )
    return parser


def configure(config):
    logging.basicConfig(
        level=str(config.log_level).upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    set_max_workers(config.threads)
    set_progress(config.progress)


def main(argv=None):
    """
    Parse ``argv``, run the experiment and write its outputs.

    Returns
    -------
    int
        Exit code
    """
    args = build_parser().parse_args(argv)
    try:
        config = ExperimentConfig.from_args(args).validate()
        configure(config)
        report = run(config)
        if config.out:
            report.dump(config.out)
        else:
            print(report.to_json(indent=2))
        if config.csv:
            emit_plot_data(report, config.csv)
    except ResonpyException as e:
        print("resonpy {}: {}".format(args.command, e), file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print("resonpy {}: {}".format(args.command, e), file=sys.stderr)
        return EXIT_INVALID

    if not report.passed:
        for failure in report.failures():
            print("check failed: {} {}".format(failure.name, failure.detail), file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
