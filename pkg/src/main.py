#!/usr/bin/env python3
"""Poly Lab - Entry point"""

import sys
import logging
import argparse
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.config import LabConfig
from src.core.exceptions import ArgumentError, CapacityError, LabError
from src.core.lattice import LatticeSpec
from src.core.multiindex import Generator, IndexSetSpec
from src.core.utils import parse_grid_values, parse_number
from src.lab import QUANTITIES, Instance, PolyLab, RunResult, build_grid
from src.reporting import render_csv, render_json, write_output
from src.verification import SUITES, run_suites

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_CAPACITY = 3
EXIT_VERIFICATION = 4


def setup_logging(log_level: str = "WARNING", log_file: Optional[Path] = None, debug: bool = False):
    """Configure logging

    Args:
        log_level: Log level from config (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional file receiving the same records
        debug: Override to DEBUG if True (for --debug flag)
    """
    if debug:
        level = logging.DEBUG
    else:
        level = getattr(logging, log_level.upper(), logging.WARNING)

    # stdout carries data, logs go to stderr
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format='%(asctime)s %(levelname)s [%(name)s] %(message)s',
        handlers=handlers,
        force=True
    )


def _add_index_set_args(parser: argparse.ArgumentParser, default_gen: str = "full"):
    parser.add_argument('--n', type=int, required=True, help='Number of variables')
    parser.add_argument('--gen', default=default_gen, choices=[g.value for g in Generator],
                        help='Index set generator')
    parser.add_argument('--m', type=int, default=1, help='Degree')
    parser.add_argument('--level', type=int, default=1, help='Support size (support_level only)')
    parser.add_argument('--members', type=str, default="",
                        help="Explicit members, e.g. '2,0;1,1;0,2' (explicit only)")


def _add_lattice_args(parser: argparse.ArgumentParser):
    parser.add_argument('--family', default='lp', choices=['lp', 'lorentz'], help='Lattice family')
    parser.add_argument('--p', type=str, default='2', help='Exponent p (inf allowed)')
    parser.add_argument('--q', type=str, default=None, help='Lorentz second exponent q')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='polylab',
                                     description='Poly Lab - constants of polynomial spaces on sequence lattices')
    parser.add_argument('--config', '-c', type=str, help='Path to config file')
    parser.add_argument('--seed', type=int, help='Random seed')
    parser.add_argument('--tol', type=float, help='Optimizer tolerance')
    parser.add_argument('--budget', type=str, help="Search budget 'restarts,iterations'")
    parser.add_argument('--threads', type=int, help='Worker threads (default: BPL_THREADS or host cores)')
    parser.add_argument('--format', choices=['csv', 'json'], help='Output format')
    parser.add_argument('--output', '-o', type=str, help='Output file (default: stdout)')
    parser.add_argument('--timing', action='store_true', help='Record wall_ms (breaks byte-identical output)')
    parser.add_argument('--log-file', type=str, help='Also log to this file')
    parser.add_argument('--debug', '-d', action='store_true', help='Enable debug logging')

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('idxset', help='Enumerate an index set')
    _add_index_set_args(p)

    p = sub.add_parser('char', help='Characteristics of every member of an index set')
    _add_index_set_args(p)
    _add_lattice_args(p)
    p.add_argument('--numeric', action='store_true', help='Force the numeric bracket on l_p')

    for name, help_text in (('lambda-hat', 'Polynomial projection constant bracket'),
                            ('chimon', 'Monomial unconditionality constant bracket')):
        p = sub.add_parser(name, help=help_text)
        _add_index_set_args(p)
        _add_lattice_args(p)
    p.add_argument('--km', action='store_true', help='Report the m-homogeneous Bohr radius instead')

    p = sub.add_parser('bohr', help='Bohr radius bracket')
    _add_index_set_args(p, default_gen='full_upto')
    _add_lattice_args(p)
    p.add_argument('--m-max', type=int, help='Largest degree examined')

    p = sub.add_parser('constants', help='Reference constants and curves')
    p.add_argument('--kappa', action='store_true', help='Partial product of kappa')
    p.add_argument('--primes', type=int, default=10**6, help='Number of primes for --kappa')
    p.add_argument('--lebesgue', type=str, help="Degrees for Lebesgue constants, e.g. '8,32,128'")
    p.add_argument('--rw-m', type=str, help='Degrees for the l_2 projection constant')
    p.add_argument('--rw-n', type=str, help='Dimensions for the l_2 projection constant')
    p.add_argument('--moment', type=str, help="Prime-average moments 'm,k'")
    p.add_argument('--curve', type=str, help='Reference curve name')
    p.add_argument('--curve-n', type=str, default='16', help='Dimensions for --curve')
    p.add_argument('--r', type=float, help='Curve parameter r')
    p.add_argument('--s', type=float, help='Curve parameter s')
    p.add_argument('--m', type=int, help='Curve parameter m')

    p = sub.add_parser('lorentz-suite', help='Projection-constant suite on l_{r,s}^n')
    p.add_argument('--m', type=str, default='1..3', help='Degrees')
    p.add_argument('--n', type=str, default='4,8,16', help='Dimensions')
    p.add_argument('--r', type=str, default='1.5,2,3', help='Exponents r (1 < r < inf)')
    p.add_argument('--s', type=str, default='1,4', help='Exponents s')

    p = sub.add_parser('verify', help='Run acceptance suites')
    p.add_argument('--suite', type=str, default='all', help=f"Comma list of {', '.join(SUITES)} or all")

    p = sub.add_parser('sweep', help='Grid sweep of one quantity')
    p.add_argument('--quantity', default='lambda_hat', choices=QUANTITIES)
    p.add_argument('--gen', default='full', choices=[g.value for g in Generator])
    p.add_argument('--n', type=str, required=True, help="Dimensions, e.g. '2..16x2'")
    p.add_argument('--m', type=str, default='2', help='Degrees')
    p.add_argument('--family', default='lp', choices=['lp', 'lorentz'])
    p.add_argument('--p', type=str, default='2', help='Exponents p')
    p.add_argument('--q', type=str, default=None, help='Lorentz exponents q')
    p.add_argument('--m-max', type=int, help='Largest degree for bohr')
    return parser


def index_set_from_args(args) -> IndexSetSpec:
    generator = Generator(args.gen)
    if generator == Generator.EXPLICIT:
        try:
            members = [tuple(int(v) for v in part.split(',')) for part in args.members.split(';') if part.strip()]
        except ValueError as e:
            raise ArgumentError(f"--members expects 'a,b;c,d', got {args.members!r}") from e
        return IndexSetSpec.explicit(args.n, members)
    if generator == Generator.SUPPORT_LEVEL:
        return IndexSetSpec.support_level(args.n, args.m, args.level)
    return IndexSetSpec(args.n, generator, args.m)


def lattice_from_args(args, n: int) -> LatticeSpec:
    p = parse_number(args.p)
    if args.family == 'lorentz':
        if args.q is None:
            raise ArgumentError("--q is required for the lorentz family")
        return LatticeSpec.lorentz(p, parse_number(args.q), n)
    return LatticeSpec.lp(p, n)


def apply_overrides(config: LabConfig, args):
    """Command line flags override file and environment values"""
    if args.seed is not None:
        config.budget.seed = args.seed
    if args.tol is not None:
        config.budget.tolerance = args.tol
    if args.budget:
        try:
            restarts, iterations = (int(v) for v in args.budget.split(','))
        except ValueError as e:
            raise ArgumentError(f"--budget expects 'restarts,iterations', got {args.budget!r}") from e
        config.budget.restarts, config.budget.iterations = restarts, iterations
    if args.threads is not None:
        config.threads = args.threads
    if args.format:
        config.output.format = args.format
    if args.output:
        config.output.path = Path(args.output)
    if args.timing:
        config.output.timing = True
    config.validate()


def dispatch(lab: PolyLab, args) -> RunResult:
    command = args.command
    if command == 'idxset':
        return lab.index_set(index_set_from_args(args))
    if command == 'char':
        J = index_set_from_args(args)
        return lab.characteristics(J, lattice_from_args(args, J.dimension), args.numeric)
    if command in ('lambda-hat', 'chimon', 'bohr'):
        J = index_set_from_args(args)
        X = lattice_from_args(args, J.dimension)
        if command == 'lambda-hat':
            quantity = 'lambda_hat'
        elif command == 'chimon':
            quantity = 'K_m' if args.km else 'chi_mon'
        else:
            quantity = 'bohr'
        return lab.single(Instance(quantity, J, X, getattr(args, 'm_max', None)))
    if command == 'constants':
        rw = []
        if args.rw_m:
            ns = parse_grid_values(args.rw_n or '2', integer=True)
            rw = [(m, n) for m in parse_grid_values(args.rw_m, integer=True) for n in ns]
        moments = []
        if args.moment:
            m, k = parse_grid_values(args.moment, integer=True)
            moments = [(m, k)]
        curves = []
        if args.curve:
            params = {k: v for k, v in (('m', args.m), ('r', args.r), ('s', args.s)) if v is not None}
            curves = [(args.curve, n, params) for n in parse_grid_values(args.curve_n)]
        lebesgue = parse_grid_values(args.lebesgue, integer=True) if args.lebesgue else []
        return lab.constants(args.primes if args.kappa else None, lebesgue, rw, moments, curves)
    if command == 'lorentz-suite':
        grid = [(m, n, r, s)
                for r in parse_grid_values(args.r) for s in parse_grid_values(args.s)
                for m in parse_grid_values(args.m, integer=True) for n in parse_grid_values(args.n, integer=True)]
        return lab.lorentz_suite(grid)
    if command == 'verify':
        return run_suites(lab, [name.strip() for name in args.suite.split(',') if name.strip()])
    if command == 'sweep':
        ps = parse_grid_values(args.p)
        qs = parse_grid_values(args.q) if args.q else [None]
        if args.family == 'lorentz' and qs == [None]:
            raise ArgumentError("--q is required for the lorentz family")
        lattices = [(args.family, p, q) for p in ps for q in qs]
        instances = build_grid(args.quantity, args.gen, parse_grid_values(args.n, integer=True),
                               parse_grid_values(args.m, integer=True), lattices, args.m_max)
        return lab.run_instances(instances)
    raise ArgumentError(f"unknown command {command!r}")


def emit(result: RunResult, config: LabConfig):
    config_dict = config.to_dict()
    if config.output.format == 'json':
        text = render_json(result.rows, config_dict, result.failures, result.header, result.extra)
    else:
        text = render_csv(result.rows, config_dict, result.header)
    write_output(text, config.output.path, sys.stdout)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = LabConfig.load(Path(args.config)) if args.config else LabConfig.load()
        apply_overrides(config, args)
        setup_logging(config.log_level, Path(args.log_file) if args.log_file else None, args.debug)
        logger = logging.getLogger(__name__)
        logger.info(f"Poly Lab {args.command} (seed={config.budget.seed}, threads={config.threads or 'auto'})")

        result = dispatch(PolyLab(config), args)
        emit(result, config)
    except CapacityError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except LabError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ARGUMENT

    if result.failures:
        print(f"error: VerificationError: {len(result.failures)} check(s) failed", file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
