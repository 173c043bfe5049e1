import argparse
import logging
import os
import sys

from .experiments import (mp_density_table, run_experiment)
from ..configuration import (ExperimentSpec, parse_spec)
from ..csv_specific.declarations import ProvenanceDeclaration
from ..csv_specific.documents import CSVDocument
from ..csv_specific.base import CommentLine
from ..errors import (CellSenseError, InvalidConfigError, WorkerFailure)
from ..rendering import render

logger = logging.getLogger(__name__)

EXIT_OK: int = 0
EXIT_CONFIG: int = 1
EXIT_RUNTIME: int = 2


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellsense", description="Blind per-cell power detection by free deconvolution."
    )
    parser.add_argument("--verbose", "-v", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run an experiment and write its CSV artifact")
    run.add_argument("spec", help="experiment spec file")
    run.add_argument("--seed", type=_seed, default=None, help="override the master seed")
    run.add_argument("--workers", type=_positive_int, default=os.cpu_count() or 1)
    run.add_argument("--out", default=".", help="output directory")

    validate = commands.add_parser("validate", help="parse a spec file and print the resolved configuration")
    validate.add_argument("spec")

    density = commands.add_parser("mp-density", help="print the Marchenko-Pastur density as CSV")
    density.add_argument("--c", type=float, required=True)
    density.add_argument("--points", type=_positive_int, default=400)
    return parser


def _print_resolved(spec: ExperimentSpec) -> None:
    print(f"CellSense is running {spec.kind} with master seed {spec.master_seed}")
    print(spec.resolved_text(), end="")


def _run(args: argparse.Namespace) -> int:
    spec: ExperimentSpec = parse_spec(args.spec)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    _print_resolved(spec)
    path: str = run_experiment(spec, out_dir=args.out, workers=args.workers)
    print(f"wrote {path}")
    return EXIT_OK


def _validate(args: argparse.Namespace) -> int:
    _print_resolved(parse_spec(args.spec))
    return EXIT_OK


def _mp_density(args: argparse.Namespace) -> int:
    if not args.c > 0:
        raise InvalidConfigError(f"c must be positive, got {args.c}")
    if args.points < 2:
        raise InvalidConfigError(f"points must be at least 2, got {args.points}")
    table, law = mp_density_table(args.c, args.points)
    resolved: str = f"kind = mp-density\nc = {args.c!r}\npoints = {args.points}\n"
    document = CSVDocument(ProvenanceDeclaration("mp-density", 0, resolved), table)
    document.add_to_head(CommentLine("atom_at_zero", law.atom))
    document.add_to_head(CommentLine("support", law.support))
    sys.stdout.write(render(document))
    return EXIT_OK


COMMANDS = {"run": _run, "validate": _validate, "mp-density": _mp_density}


def main(argv: list[str] = None) -> int:
    """
    Command-line entry point.

    Bad flags and flag values count as configuration errors; ``--help`` still exits 0.

    :return: 0 on success, 1 on a configuration error, 2 on any other failure.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exit_request:
        return EXIT_OK if exit_request.code in (0, None) else EXIT_CONFIG
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InvalidConfigError as error:
        print(f"configuration error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    except WorkerFailure as error:
        print(f"run failed after {len(error.completed)} trials: {error}", file=sys.stderr)
        return EXIT_RUNTIME
    except CellSenseError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as error:
        logger.exception("%s failed", args.command)
        print(f"error: {error!r}", file=sys.stderr)
        return EXIT_RUNTIME
