#!/usr/bin/env python3
"""
Real Bott tower invariants from the command line.

Subcommands:
    analyze     invariants of one Bott matrix (file path, '-' for stdin, or inline rows)
    enumerate   census of all n x n Bott matrices
    verify      closed forms against the ring and Smith-form oracles
    examples    recompute the named examples and diff them against the goldens

Exit status: 0 success, 1 input or domain error, 2 verification failure, 130 interrupted.
"""
import argparse
import logging
import os
import re
import sys
from typing import List, Optional

from bott_towers import config
from bott_towers.bott_matrix import parse_bott_matrix
from bott_towers.census import FILTERS, CensusRunner
from bott_towers.exceptions import BottTowerError, ConsistencyError
from bott_towers.golden import run_examples
from bott_towers.reports import FORMATS, build_analysis, render_document, render_machine
from bott_towers.verification import run_verification

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFICATION = 2
EXIT_INTERRUPTED = 130

# Las matrices en línea solo llevan dígitos y separadores
_INLINE_RE = re.compile(r'[0-9 ;\n]+')


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def configure_logging(level: str = None) -> None:
    """Log to data/bott_towers.log and stderr; stdout carries documents only."""
    handlers = [logging.StreamHandler(sys.stderr)]
    try:
        os.makedirs(config.DATA_DIR, exist_ok=True)
        handlers.insert(0, logging.FileHandler(config.LOG_FILE))
    except OSError as e:
        print(f"Warning: cannot write log file {config.LOG_FILE}: {str(e)}", file=sys.stderr)
    logging.basicConfig(
        level=getattr(logging, (level or config.LOG_LEVEL).upper(), logging.INFO),
        format=config.LOG_FORMAT,
        handlers=handlers,
    )


def read_matrix_text(source: str) -> str:
    """Matrix text from '-' (stdin), a file path, or inline rows separated by spaces or ';'."""
    if source == '-':
        return sys.stdin.read()
    if os.path.isfile(source):
        with open(source, 'r', encoding='utf-8') as f:
            return f.read()
    if not _INLINE_RE.fullmatch(source):
        raise FileNotFoundError(f"matrix file not found: {source}")
    return '\n'.join(source.replace(';', ' ').split())


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = ArgumentParser(prog='bott-towers', description='Invariants of real Bott towers.')
    parser.add_argument('--log-level', type=str, default=None,
                        help=f"Logging level (default: {config.LOG_LEVEL})")
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True

    analyze = subparsers.add_parser('analyze', help='Analyze one Bott matrix')
    analyze.add_argument('source', nargs='?', default='-',
                         help="Matrix file, '-' for stdin, or inline rows like '2 11 01'")
    analyze.add_argument('--format', choices=FORMATS, default='text')

    census = subparsers.add_parser('enumerate', help='Classify every n x n Bott matrix')
    census.add_argument('n', type=int, help='Matrix size')
    census.add_argument('--filter', choices=FILTERS, default=None)
    census.add_argument('--list', action='store_true', help='List the matching matrices')
    census.add_argument('--max-n', type=int, default=config.DEFAULT_MAX_N,
                        help=f"Enumeration cap (default: {config.DEFAULT_MAX_N})")
    census.add_argument('--jobs', type=int, default=config.DEFAULT_JOBS,
                        help=f"Worker processes (default: {config.DEFAULT_JOBS})")
    census.add_argument('--output', type=str, default=None,
                        help='Write the per-matrix table to this CSV file')
    census.add_argument('--quiet', action='store_true', help='Hide progress bars')
    census.add_argument('--format', choices=FORMATS, default='text')

    verify = subparsers.add_parser('verify', help='Run the oracle verification suites')
    verify.add_argument('--from', dest='start', type=int, default=1, help='Smallest size (default: 1)')
    verify.add_argument('--to', dest='stop', type=int, default=5, help='Largest size (default: 5)')
    verify.add_argument('--max-n', type=int, default=config.DEFAULT_MAX_N)
    verify.add_argument('--jobs', type=int, default=config.DEFAULT_JOBS)
    verify.add_argument('--random-samples', type=int, default=config.RANDOM_H1_SAMPLES,
                        help=f"Random n={config.RANDOM_H1_SIZE} matrices for the H1 check "
                             f"(default: {config.RANDOM_H1_SAMPLES})")
    verify.add_argument('--property-samples', type=int, default=config.PROPERTY_SAMPLES,
                        help=f"Random cases for the free-reduction and ring-law suites "
                             f"(default: {config.PROPERTY_SAMPLES})")
    verify.add_argument('--quiet', action='store_true', help='Hide progress bars')
    verify.add_argument('--format', choices=FORMATS, default='text')

    examples = subparsers.add_parser('examples', help='Check the named examples against their goldens')
    examples.add_argument('--format', choices=FORMATS, default='text')

    args = parser.parse_args(argv)
    for name in ('jobs', 'max_n'):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            parser.error(f"--{name.replace('_', '-')} must be at least 1")
    return args


def cmd_analyze(args: argparse.Namespace) -> int:
    matrix = parse_bott_matrix(read_matrix_text(args.source))
    sys.stdout.write(render_document(build_analysis(matrix), args.format))
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    runner = CensusRunner(args.n, jobs=args.jobs, max_n=args.max_n, progress=not args.quiet)
    document = runner.run(args.filter, list_matrices=args.list, keep_rows=args.output is not None)
    if args.output:
        runner.save_table(args.output)
    sys.stdout.write(render_document(document, args.format))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_verification(args.start, args.stop, jobs=args.jobs, max_n=args.max_n,
                              random_samples=args.random_samples, progress=not args.quiet,
                              property_samples=args.property_samples)
    if args.format == 'machine':
        sys.stdout.write(render_machine(report.to_dict()))
    else:
        sys.stdout.write(report.render_text())
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def cmd_examples(args: argparse.Namespace) -> int:
    outcomes = run_examples()
    passed = all(o.passed for o in outcomes)
    if args.format == 'machine':
        sys.stdout.write(render_machine({
            'schema_version': config.SCHEMA_VERSION,
            'kind': 'examples',
            'passed': passed,
            'examples': {
                o.name: {'passed': o.passed, 'summary': o.summary, 'diffs': o.diffs}
                for o in outcomes
            },
        }))
    else:
        lines = []
        for o in outcomes:
            lines.append(f"{'PASS' if o.passed else 'FAIL'} {o.name}: {o.summary}")
            lines.extend(f"     {d}" for d in o.diffs)
        lines.append('all examples match' if passed else 'examples differ from goldens')
        sys.stdout.write('\n'.join(lines) + '\n')
    return EXIT_OK if passed else EXIT_VERIFICATION


COMMANDS = {
    'analyze': cmd_analyze,
    'enumerate': cmd_enumerate,
    'verify': cmd_verify,
    'examples': cmd_examples,
}


def main(argv: Optional[List[str]] = None) -> None:
    """Main function to run the command line interface."""
    args = parse_arguments(argv)
    configure_logging(args.log_level)

    try:
        code = COMMANDS[args.command](args)
    except KeyboardInterrupt:
        print("\nInterrupted by user.", file=sys.stderr)
        sys.exit(EXIT_INTERRUPTED)
    except ConsistencyError as e:
        print(f"verification failure: {str(e)}", file=sys.stderr)
        sys.exit(EXIT_VERIFICATION)
    except BottTowerError as e:
        print(f"error: {str(e)}", file=sys.stderr)
        sys.exit(EXIT_ERROR)
    except OSError as e:
        print(f"error: {str(e)}", file=sys.stderr)
        sys.exit(EXIT_ERROR)
    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}", exc_info=True)
        print(f"\nAn error occurred: {str(e)}", file=sys.stderr)
        sys.exit(EXIT_ERROR)
    sys.exit(code)


if __name__ == "__main__":
    main()
