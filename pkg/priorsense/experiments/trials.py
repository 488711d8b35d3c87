"""Single-trial workers and the success criterion.

Each trial derives its random stream from (master_seed, level, m, trial)
only and splits it into independent child streams for the signal, shift,
sensing operator, noise and prior.  Trials therefore see the same signal and
operator whatever shift rule or method is being run and whatever process
executes them.

"""
#pylint: disable=invalid-name
import logging
from dataclasses import dataclass
from typing import Dict, NamedTuple

import numpy as np

from priorsense.ensembles import (MeasurementOperator, SignalSpec, sample_bernoulli_matrix, sample_bernoulli_sensing,
                                  sample_noise, sample_perturbation, sample_signal)
from priorsense.experiments.config import ExperimentConfig
from priorsense.experiments.shifts import lowrank_shift, sparse_shift
from priorsense.prior import improve_lowrank, improve_sparse
from priorsense.proximal import PriorShift, Structure
from priorsense.recovery import ProblemKind, ProblemSpec, build_problem
from priorsense.solver import SolverConfig, SolverStatus, solve
from priorsense.utilities import relative_error, trial_stream

logger = logging.getLogger(__name__)


def success(x_hat, x_star, tol: float) -> bool:
    """Returns whether ||x_hat - x*|| / ||x*|| < tol (Frobenius norm for matrices).

    Raises
    ------
    ValueError
        Raised if `x_star` is zero or `tol` is not positive

    """
    if tol <= 0:
        raise ValueError(f'tol must be positive, got {tol}!')
    return relative_error(x_hat, x_star) < tol


class TrialOutcome(NamedTuple):
    success: bool
    status: str


SKIPPED = 'skipped'


@dataclass(frozen=True)
class TrialTask:
    """One (label, level, m, trial) unit of work.  `label` is a shift rule for
    phase maps and unused for comparisons."""
    config: ExperimentConfig
    label: str
    level: int
    m: int
    trial: int

    @property
    def seed_keys(self):
        return [self.config.master_seed, self.level, self.m, self.trial]


class _TrialStreams(NamedTuple):
    signal: np.random.SeedSequence
    shift: np.random.SeedSequence
    sensing: np.random.SeedSequence
    noise: np.random.SeedSequence
    prior: np.random.SeedSequence


def _streams(task: TrialTask) -> _TrialStreams:
    return _TrialStreams(*trial_stream(*task.seed_keys).spawn(len(_TrialStreams._fields)))


def _signal(task: TrialTask, streams: _TrialStreams) -> np.ndarray:
    cfg = task.config
    structure = Structure.LOW_RANK if cfg.is_lowrank else Structure.SPARSE
    return sample_signal(SignalSpec(structure, cfg.signal_shape, task.level), streams.signal)


def _operator(task: TrialTask, streams: _TrialStreams) -> MeasurementOperator:
    cfg = task.config
    if cfg.is_lowrank:
        return sample_bernoulli_sensing(task.m, cfg.signal_shape, streams.sensing)
    return MeasurementOperator(sample_bernoulli_matrix(task.m, cfg.n, streams.sensing))


def _solver_config(cfg: ExperimentConfig) -> SolverConfig:
    return SolverConfig(max_iters=cfg.max_iters, tol_rel=cfg.solver_tol, record_history=False)


def _judge(problem: ProblemSpec, x_star, task: TrialTask, method: str) -> TrialOutcome:
    result = solve(problem, _solver_config(task.config))
    if result.status is SolverStatus.DIVERGED:
        logger.warning('%s diverged at level=%d, m=%d, trial=%d; counted as a failure', method, task.level, task.m,
                       task.trial)
        return TrialOutcome(False, result.status.value)
    return TrialOutcome(success(result.x_hat, x_star, task.config.tol), result.status.value)


def run_phase_trial(task: TrialTask) -> TrialOutcome:
    """Noiseless trial of one shift rule.  m = 0 is a failure without solving."""
    if task.m == 0:
        return TrialOutcome(False, SKIPPED)

    cfg = task.config
    streams = _streams(task)
    x_star = _signal(task, streams)
    operator = _operator(task, streams)
    y = operator.forward(x_star)

    if cfg.is_lowrank:
        shift = lowrank_shift(task.label, x_star, rank=task.level)
        kind = ProblemKind.MC_LOWRANK
    else:
        shift = sparse_shift(task.label, x_star, streams.shift)
        kind = ProblemKind.BP if task.label == 'a' else ProblemKind.MC_SPARSE

    problem = build_problem(kind, operator, y, 0.0, shift=shift, provenance={'seed_keys': task.seed_keys})
    return _judge(problem, x_star, task, f'shift rule {task.label}')


def _sparse_method_problem(method, operator, y, delta, phi, cfg: ExperimentConfig, level: int, provenance):
    lam = cfg.weight
    if method == 'bp':
        return build_problem(ProblemKind.BP, operator, y, delta, provenance=provenance)
    if method in ('l1l1', 'l1l2'):
        return build_problem(method, operator, y, delta, lam=lam, phi=phi, provenance=provenance)
    if method == 'mc':
        shift = PriorShift.from_prior(lam, phi, Structure.SPARSE)
    else:
        known = level if method == 'mc_known' else None
        shift = improve_sparse(phi, known, cfg.kappa).as_shift()
    return build_problem(ProblemKind.MC_SPARSE, operator, y, delta, shift=shift, provenance=provenance)


def _lowrank_method_problem(method, operator, y, delta, Phi, cfg: ExperimentConfig, level: int, provenance):
    if method == 'nuclear':
        shift = None
    elif method == 'mc':
        shift = PriorShift.from_prior(cfg.weight, Phi, Structure.LOW_RANK)
    else:
        known = level if method == 'mc_known' else None
        shift = improve_lowrank(Phi, known, cfg.kappa).as_shift()
    return build_problem(ProblemKind.MC_LOWRANK, operator, y, delta, shift=shift, provenance=provenance)


def run_comparison_trial(task: TrialTask) -> Dict[str, TrialOutcome]:
    """Noisy trial of every configured method on one shared instance.

    The prior is φ = x* + z, measurements are y = Ax* + n with N(0, noise_std^2)
    noise and δ = ||n||.

    """
    cfg = task.config
    if task.m == 0:
        return {method: TrialOutcome(False, SKIPPED) for method in cfg.methods}

    streams = _streams(task)
    x_star = _signal(task, streams)
    operator = _operator(task, streams)
    noise = sample_noise(task.m, cfg.noise_std, streams.noise)
    y = operator.forward(x_star) + noise
    delta = float(np.linalg.norm(noise))
    phi = sample_perturbation(x_star, cfg.perturbation, cfg.perturbation_std, cfg.perturbation_sparsity,
                              cfg.perturbation_overlap, streams.prior)

    build = _lowrank_method_problem if cfg.is_lowrank else _sparse_method_problem
    provenance = {'seed_keys': task.seed_keys}
    outcomes = {}
    for method in cfg.methods:
        problem = build(method, operator, y, delta, phi, cfg, task.level, provenance)
        outcomes[method] = _judge(problem, x_star, task, method)
    return outcomes
