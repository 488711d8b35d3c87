"""Command-line interface.

Exit codes: 0 success (or a converged solve), 1 invalid input, 2 the solver
hit max_iters, 3 the solver diverged, 4 the shifted subdifferential contains
0 so the width bounds do not apply.

"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from priorsense import __version__
from priorsense.experiments import load_config, preset, run_comparison, run_phase_transitions, write_outputs
from priorsense.geometry import BOUND_COLUMNS, ShiftHypothesisError, bound_report
from priorsense.prior import improve
from priorsense.proximal import BlockPartition, PriorShift, Structure
from priorsense.recovery import load_problem
from priorsense.solver import SolverConfig, SolverStatus, solve
from priorsense.utilities import rows_to_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MAX_ITERS = 2
EXIT_DIVERGED = 3
EXIT_HYPOTHESIS = 4

_STATUS_EXIT = {
    SolverStatus.CONVERGED: EXIT_OK,
    SolverStatus.MAX_ITERS: EXIT_MAX_ITERS,
    SolverStatus.DIVERGED: EXIT_DIVERGED,
}

_INPUT_KEYS = {
    'bounds': {'structure', 'x_star', 'shifts', 'partition', 'rank'},
    'improve-prior': {'structure', 'phi', 'level', 'kappa', 'partition'},
}


def _read_json(path, command=None) -> dict:
    with open(path, 'r') as infile:
        data = json.load(infile)
    if command in _INPUT_KEYS:
        unknown = set(data) - _INPUT_KEYS[command]
        if unknown:
            raise ValueError(f'Unknown {command} input keys: {sorted(unknown)}!')
    return data


def _emit(text: str, out=None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _partition(data: dict, n: int):
    return BlockPartition.from_sizes(n, data['partition']) if data.get('partition') else None


def cmd_solve(args) -> int:
    problem = load_problem(args.config)
    config = SolverConfig(max_iters=args.max_iters or SolverConfig.max_iters,
                          tol_rel=args.tol or SolverConfig.tol_rel,
                          divergence_guard=args.divergence_guard)
    result = solve(problem, config)
    _emit(json.dumps(result.to_dict(), indent=2) + '\n', args.out)
    return _STATUS_EXIT[result.status]


def cmd_bounds(args) -> int:
    data = _read_json(args.config, 'bounds')
    structure = Structure(data['structure'])
    x_star = np.asarray(data['x_star'], dtype=float)
    part = _partition(data, x_star.size)

    reports = []
    for entry in data['shifts']:
        shift = PriorShift(entry['payload'], structure)
        reports.append(bound_report(structure, x_star, shift, part, data.get('rank'), mc_samples=args.mc_samples,
                                    seed=args.seed, label=entry.get('label', '')))

    if args.format == 'json':
        text = json.dumps([r.to_dict() for r in reports], indent=2) + '\n'
    else:
        columns = BOUND_COLUMNS if args.mc_samples else [c for c in BOUND_COLUMNS if c != 'optimal_mc']
        keep = [BOUND_COLUMNS.index(c) for c in columns]
        text = rows_to_csv(columns, [[row[i] for i in keep] for row in (r.to_row(args.places) for r in reports)])
    _emit(text, args.out)
    return EXIT_OK


def cmd_improve_prior(args) -> int:
    data = _read_json(args.config, 'improve-prior')
    structure = Structure(data['structure'])
    phi = np.asarray(data['phi'], dtype=float)
    kappa = data.get('kappa', 0.95) if args.kappa is None else args.kappa
    shift = improve(structure, phi, data.get('level'), kappa, _partition(data, phi.size))
    _emit(json.dumps(shift.to_dict(), indent=2) + '\n', args.out)
    return EXIT_OK


def _experiment_config(args, default_study):
    config = load_config(args.config) if args.config else preset(args.study or default_study, args.paper_scale)
    if args.paper_scale and args.config:
        logger.warning('--paper-scale is ignored when --config is given')
    return config.override(master_seed=args.seed, jobs=args.jobs, tol=args.tol, max_iters=args.max_iters)


def _run_experiment(args, default_study, expected, runner) -> int:
    config = _experiment_config(args, default_study)
    if config.study not in expected:
        raise ValueError(f'{args.command} expects a study in {expected}, got {config.study!r}!')

    out_dir = Path(args.out or '.')
    out_dir.mkdir(parents=True, exist_ok=True)
    write_outputs(runner(config), out_dir / f'{config.study}.csv')
    sys.stdout.write(json.dumps(config.to_dict(), indent=2, sort_keys=True) + '\n')
    return EXIT_OK


def cmd_phase_transition(args) -> int:
    return _run_experiment(args, 'phase_sparse', ('phase_sparse', 'phase_lowrank'), run_phase_transitions)


def cmd_compare(args) -> int:
    return _run_experiment(args, 'compare_sparse', ('compare_sparse', 'compare_lowrank'), run_comparison)


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with the invalid-input exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f'{self.prog}: error: {message}\n')


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG logging')
    common.add_argument('--config', help='Input JSON file')
    common.add_argument('--out', help='Output file (solve, bounds, improve-prior) or directory (experiments)')
    common.add_argument('--seed', type=int, default=None, help='Master seed')
    common.add_argument('--tol', type=float, default=None,
                        help='Solver relative tolerance (solve) or success threshold (experiments)')
    common.add_argument('--max-iters', type=int, default=None, help='Solver iteration cap')

    parser = _Parser(prog='priorsense', description='Structured recovery with prior information')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', parents=[common], help='Solve a recovery problem stored as JSON')
    p.add_argument('--divergence-guard', type=float, default=None, help='Iterate-norm ceiling')
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser('bounds', parents=[common], help='Width parameters and bounds for a signal and shifts')
    p.add_argument('--mc-samples', type=int, default=0, help='Monte-Carlo samples for the optimal bound (0 = off)')
    p.add_argument('--format', choices=['csv', 'json'], default='csv')
    p.add_argument('--places', type=int, default=4, help='Decimal places in CSV output')
    p.set_defaults(func=cmd_bounds, seed=0)

    p = sub.add_parser('improve-prior', parents=[common], help='Improve a prior into a shift')
    p.add_argument('--kappa', type=float, default=None, help='Scale in (0, 1)')
    p.set_defaults(func=cmd_improve_prior)

    for name, func, studies in (('phase-transition', cmd_phase_transition, ['phase_sparse', 'phase_lowrank']),
                                ('compare', cmd_compare, ['compare_sparse', 'compare_lowrank'])):
        p = sub.add_parser(name, parents=[common], help=f'Run a {name} study')
        p.add_argument('--study', choices=studies, default=None, help='Preset used when --config is not given')
        p.add_argument('--paper-scale', action='store_true', help='Use the full-scale preset')
        p.add_argument('--jobs', type=int, default=os.cpu_count() or 1, help='Worker processes')
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format='%(levelname)s %(name)s: %(message)s')

    if args.command in ('solve', 'bounds', 'improve-prior') and not args.config:
        logger.error('%s needs --config', args.command)
        return EXIT_INVALID

    try:
        return args.func(args)
    except ShiftHypothesisError as err:
        logger.error('%s', err)
        return EXIT_HYPOTHESIS
    except (ValueError, KeyError, TypeError, OSError) as err:
        logger.error('Invalid input: %s', err)
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
