"""
Command line interface.

Every verb reads JSON input files, runs one workflow command and writes a
JSON report to stdout (or to ``--out``). Exit status 0 means the answer was
computed, whatever it is; 1 is an input error and 2 an unsupported case.
Logs go to stderr.
"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from .config.settings import OUTPUT_FORMATS, AnalysisConfig
from .errors import InputError, UnsupportedCaseError
from .processors.families import ROWS
from .utils.data_utils import export_results, generate_report, to_json
from .workflows.command_workflow import CommandWorkflow


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNSUPPORTED = 2

Runner = Callable[[CommandWorkflow, argparse.Namespace], Dict[str, Any]]


def _load_config(args: argparse.Namespace) -> AnalysisConfig:
    config = AnalysisConfig.load_from_file(args.config) if args.config else AnalysisConfig()
    return config.override(orbit_bound=args.orbit_bound, seed=args.seed,
                           output_format=args.format,
                           selfcheck_instances=getattr(args, "count", None))


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level.upper()), stream=sys.stderr, force=True,
                        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")


def _emit(report: Dict[str, Any], config: AnalysisConfig, out: Optional[str]) -> None:
    if out:
        export_results(report, out, config.output_format, config.json_indent)
        return
    if config.output_format != "json":
        raise InputError(f"format {config.output_format!r} needs an --out path")
    sys.stdout.write(to_json(report, config.json_indent))


def _run(args: argparse.Namespace, runner: Runner, inputs: List[str]) -> int:
    _configure_logging("DEBUG" if args.verbose else "INFO")
    try:
        config = _load_config(args)
        if not args.verbose:
            logging.getLogger().setLevel(config.log_level.upper())
        workflow = CommandWorkflow(config)
        result = runner(workflow, args)
        _emit(generate_report(args.command, inputs, result), config, args.out)
    except (InputError, FileNotFoundError) as e:
        logger.error(str(e))
        return EXIT_INPUT
    except UnsupportedCaseError as e:
        logger.error(f"Unsupported case: {e}")
        return EXIT_UNSUPPORTED
    return EXIT_OK


# -- handlers -------------------------------------------------------------

def _verify_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.verify(a.algebra), [args.algebra])


def _build_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.build(a.data), [args.data])


def _centre_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.centre(a.algebra), [args.algebra])


def _derived_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.derived(a.algebra), [args.algebra])


def _signature_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.signature(a.algebra), [args.algebra])


def _regular_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.regular(a.data), [args.data])


def _equivalent_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.equivalent(a.first, a.second), [args.first, args.second])


def _decompose_check_command(args: argparse.Namespace) -> int:
    inputs = [args.data] + ([args.witness] if args.witness else [])
    return _run(args, lambda w, a: w.decompose_check(a.data, a.witness), inputs)


def _invariant_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.invariant(a.family), [args.family])


def _isomorphic_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.isomorphic(a.first, a.second), [args.first, args.second])


def _classify_index2_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.classify_index2(a.family), [args.family])


def _extract_command(args: argparse.Namespace) -> int:
    inputs = [args.algebra] + ([args.against] if args.against else [])
    return _run(args, lambda w, a: w.extract(a.algebra, a.against), inputs)


def _selfcheck_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.selfcheck(a.count), [])


def _tabulate_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.tabulate(a.rows, a.m), [])


def _build_family_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.build_family(a.family), [args.family])


def _act_command(args: argparse.Namespace) -> int:
    return _run(args, lambda w, a: w.act(a.data, a.tau), [args.data, args.tau])


# -- parsers --------------------------------------------------------------

def _add_common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="Write the report to this path.")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=None,
                        help="Report format (default: json).")
    parser.add_argument("--seed", type=int, default=None, help="Seed for randomized commands.")
    parser.add_argument("--orbit-bound", dest="orbit_bound", type=int, default=None,
                        help="Largest weight count for the signed-permutation search.")
    parser.add_argument("--config", default=None, help="YAML configuration file.")
    parser.add_argument("--verbose", action="store_true", help="Log at debug level.")


def _add_algebra_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("algebra", help="Algebra JSON file.")


def _add_data_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("data", help="Twofold data JSON file.")


def _add_pair_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("first")
    parser.add_argument("second")


def _add_family_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("family", help="Family descriptor JSON file.")


def _add_decompose_check_args(parser: argparse.ArgumentParser) -> None:
    _add_data_args(parser)
    parser.add_argument("--witness", default=None,
                        help="Decomposition witness to check instead of searching.")


def _add_extract_args(parser: argparse.ArgumentParser) -> None:
    _add_algebra_args(parser)
    parser.add_argument("--against", default=None,
                        help="Twofold data the algebra was built from, for a round trip.")


def _add_selfcheck_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--count", type=int, default=None,
                        help="Random instances per law (default from configuration).")


def _add_tabulate_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rows", nargs="+", choices=sorted(ROWS), default=None,
                        help="Table rows (default: all twofold rows).")
    parser.add_argument("--m", nargs="+", type=int, default=[1, 2, 3],
                        help="Weight counts to tabulate.")


def _add_act_args(parser: argparse.ArgumentParser) -> None:
    _add_data_args(parser)
    parser.add_argument("tau", help="1-cochain JSON file.")


COMMANDS = [
    ("verify", "Check the metric Lie algebra axioms.", _add_algebra_args, _verify_command),
    ("build", "Build the algebra of twofold data.", _add_data_args, _build_command),
    ("centre", "Compute the centre.", _add_algebra_args, _centre_command),
    ("derived", "Compute the derived algebra and series.", _add_algebra_args, _derived_command),
    ("signature", "Compute the signature.", _add_algebra_args, _signature_command),
    ("regular", "Decide regularity of twofold data.", _add_data_args, _regular_command),
    ("equivalent", "Decide extension equivalence.", _add_pair_args, _equivalent_command),
    ("decompose-check", "Check or search a decomposition.", _add_decompose_check_args,
     _decompose_check_command),
    ("invariant", "Canonical invariant of a family member.", _add_family_args,
     _invariant_command),
    ("isomorphic", "Decide isomorphism of two family members.", _add_pair_args,
     _isomorphic_command),
    ("classify-index2", "Normal form of an index-2 algebra.", _add_family_args,
     _classify_index2_command),
    ("extract", "Recover twofold data from an algebra.", _add_extract_args, _extract_command),
    ("selfcheck", "Run the randomized algebraic laws.", _add_selfcheck_args,
     _selfcheck_command),
    ("tabulate", "Tabulate family members.", _add_tabulate_args, _tabulate_command),
    ("build-family", "Build a family member.", _add_family_args, _build_family_command),
    ("act", "Apply a 1-cochain to twofold data.", _add_act_args, _act_command),
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metric-lie-twofold",
        description="Exact computations with metric Lie algebras and twofold extensions.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text, add_args, handler in COMMANDS:
        sub = subparsers.add_parser(name, help=help_text)
        add_args(sub)
        _add_common_args(sub)
        sub.set_defaults(func=handler)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    return int(args.func(args))


if __name__ == "__main__":
    sys.exit(main())
