"""Primal-dual splitting solver for  min f(x)  s.t.  ||y - A x||_2 <= δ.

The iteration is a Chambolle-Pock scheme in which the ball indicator is
handled through its conjugate with the Moreau decomposition::

    x+ = prox_{τf}(x - τ Aᵀu)
    x̄  = 2x+ - x
    u+ = u + σ A x̄ - σ P_ball(u/σ + A x̄)

The only problem-specific ingredient is the prox of f, so the same loop
solves every program in :mod:`priorsense.recovery`.

"""
#pylint: disable=invalid-name
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from priorsense.ensembles import operator_norm
from priorsense.proximal import project_l2_ball
from priorsense.recovery import ProblemSpec, objective_value, prox_for

logger = logging.getLogger(__name__)

AUTO = 'auto'
STEP_FACTOR = 0.99
LOG_EVERY = 1000


class SolverStatus(str, Enum):
    CONVERGED = 'converged'
    MAX_ITERS = 'max_iters'
    DIVERGED = 'diverged'


@dataclass
class SolverConfig:
    """Solver settings.

    Parameters
    ----------
    max_iters : int, optional
        Iteration cap, by default 20000
    primal_step : float or 'auto', optional
        τ, by default 'auto' (0.99/L)
    dual_step : float or 'auto', optional
        σ, by default 'auto' (0.99/L)
    tol_rel : float, optional
        Relative change of x over `window` iterations that counts as converged, by default 1e-7
    feas_tol : float, optional
        Converged iterates satisfy ||y - Ax|| - δ <= feas_tol·(1 + ||y||), by default 1e-6
    divergence_guard : float, optional
        Iterate-norm ceiling.  None means 1e8·(1 + ||x0||), by default None
    window : int, optional
        Iterations between convergence checks, by default 10
    ray_windows : int, optional
        Consecutive windows of constant displacement and growing norm after
        which the run is declared diverged, by default 50
    norm_safety : float, optional
        Relative padding of the operator-norm estimate, by default 0.01
    record_history : bool, optional
        Keep per-iteration residuals, by default True

    """
    max_iters: int = 20000
    primal_step: Union[float, str] = AUTO
    dual_step: Union[float, str] = AUTO
    tol_rel: float = 1e-7
    feas_tol: float = 1e-6
    divergence_guard: Optional[float] = None
    window: int = 10
    ray_windows: int = 50
    norm_safety: float = 0.01
    record_history: bool = True

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.max_iters < 1:
            raise ValueError(f'max_iters must be positive, got {self.max_iters}!')
        for name in ('primal_step', 'dual_step'):
            step = getattr(self, name)
            if step != AUTO and not (isinstance(step, (int, float)) and step > 0):
                raise ValueError(f'{name} must be positive or {AUTO!r}, got {step!r}!')
        if self.tol_rel <= 0 or self.feas_tol <= 0:
            raise ValueError(f'Tolerances must be positive, got tol_rel={self.tol_rel}, feas_tol={self.feas_tol}!')
        if self.divergence_guard is not None and self.divergence_guard <= 0:
            raise ValueError(f'divergence_guard must be positive, got {self.divergence_guard}!')
        if self.window < 1 or self.ray_windows < 1:
            raise ValueError(f'window and ray_windows must be positive, got {self.window}, {self.ray_windows}!')
        if self.norm_safety < 0:
            raise ValueError(f'norm_safety must be nonnegative, got {self.norm_safety}!')


@dataclass(frozen=True, eq=False)
class SolverResult:
    """Outcome of :func:`solve`.

    `x_hat` is the last iterate.  When the run diverged it is the last
    iterate whose norm stayed below the guard.

    """
    x_hat: np.ndarray
    iterations: int
    status: SolverStatus
    objective_value: float
    feasibility_gap: float
    residual_history: np.ndarray
    operator_norm: float
    primal_step: float
    dual_step: float

    @property
    def converged(self) -> bool:
        return self.status is SolverStatus.CONVERGED

    def to_dict(self, include_history=False) -> dict:
        data = {
            'status': self.status.value,
            'iterations': self.iterations,
            'objective_value': self.objective_value,
            'feasibility_gap': self.feasibility_gap,
            'operator_norm': self.operator_norm,
            'primal_step': self.primal_step,
            'dual_step': self.dual_step,
            'x_hat': self.x_hat.tolist(),
        }
        if include_history:
            data['residual_history'] = self.residual_history.tolist()
        return data


@dataclass(frozen=True)
class OptimalityReport:
    passed: bool
    objective_hat: float
    objective_ref: float
    feasibility_gap: float
    feasible: bool
    reference_gap: float


def feasibility_gap(problem: ProblemSpec, x) -> float:
    """max(0, ||y - Ax|| - δ)."""
    return float(max(0.0, np.linalg.norm(problem.y - problem.operator.forward(x)) - problem.delta))


def _steps(config: SolverConfig, L: float):
    tau = STEP_FACTOR / L if config.primal_step == AUTO else float(config.primal_step)
    sigma = STEP_FACTOR / L if config.dual_step == AUTO else float(config.dual_step)
    if tau * sigma * L**2 > 1:
        raise ValueError(f'Steps violate τσL² <= 1: τ={tau}, σ={sigma}, L={L}!')
    return tau, sigma


def solve(problem: ProblemSpec, config: Optional[SolverConfig] = None) -> SolverResult:
    """Solves `problem` by primal-dual splitting.

    Parameters
    ----------
    problem : ProblemSpec
        Validated program (see :func:`priorsense.recovery.build_problem`)
    config : SolverConfig, optional
        Settings, by default SolverConfig()

    Returns
    -------
    SolverResult
        The status is converged when the relative change of x over a window
        and the feasibility gap are both within tolerance, diverged when the
        iterate norm passes the guard or the iterates move along a ray, and
        max_iters otherwise.

    Raises
    ------
    ValueError
        Raised if the operator is zero or manual steps violate τσL² <= 1

    """
    config = SolverConfig() if config is None else config
    op = problem.operator
    y = problem.y
    delta = problem.delta
    prox = prox_for(problem)

    L = operator_norm(op).value * (1 + config.norm_safety)
    if L == 0:
        raise ValueError('The measurement operator is zero!')
    tau, sigma = _steps(config, L)

    x = op.adjoint(y) / L**2
    u = np.zeros(op.m)
    guard = config.divergence_guard
    if guard is None:
        guard = 1e8 * (1 + np.linalg.norm(x))
    feas_limit = config.feas_tol * (1 + np.linalg.norm(y))

    history = []
    status = SolverStatus.MAX_ITERS
    x_window = x.copy()
    last_displacement = None
    ray_count = 0
    iterations = 0

    for k in range(1, config.max_iters + 1):
        x_new = prox(x - tau * op.adjoint(u), tau)
        x_bar = 2 * x_new - x
        Ax_bar = op.forward(x_bar)
        u_new = u + sigma * Ax_bar - sigma * project_l2_ball(u / sigma + Ax_bar, y, delta)

        if config.record_history:
            history.append((np.linalg.norm(x_new - x) / tau, np.linalg.norm(u_new - u) / sigma))

        if not np.all(np.isfinite(x_new)) or np.linalg.norm(x_new) > guard:
            status = SolverStatus.DIVERGED
            logger.info('Iterate norm passed the divergence guard %.3g at iteration %d', guard, k)
            iterations = k - 1
            break

        x, u = x_new, u_new
        iterations = k

        if k % config.window:
            continue

        displacement = x - x_window
        x_norm = np.linalg.norm(x)
        change = np.linalg.norm(displacement)
        gap = feasibility_gap(problem, x)

        if k % LOG_EVERY == 0:
            logger.debug('iter %d: primal %.3e, dual %.3e, change %.3e, gap %.3e', k,
                         *(history[-1] if history else (np.nan, np.nan)), change, gap)

        if change <= config.tol_rel * max(x_norm, np.finfo(float).tiny) and gap <= feas_limit:
            status = SolverStatus.CONVERGED
            break

        # a recession ray shows up as a constant nonzero displacement per window with a growing norm
        moving_on_ray = (last_displacement is not None and change > config.tol_rel * x_norm
                         and np.linalg.norm(displacement - last_displacement) <= 1e-9 * change
                         and x_norm > np.linalg.norm(x_window))
        ray_count = ray_count + 1 if moving_on_ray else 0
        if ray_count >= config.ray_windows:
            status = SolverStatus.DIVERGED
            logger.info('Iterates move along a ray (step %.3e per window) at iteration %d', change, k)
            break

        last_displacement = displacement
        x_window = x.copy()

    result = SolverResult(
        x_hat=x,
        iterations=iterations,
        status=status,
        objective_value=objective_value(problem, x),
        feasibility_gap=feasibility_gap(problem, x),
        residual_history=np.array(history).reshape(-1, 2),
        operator_norm=float(L),
        primal_step=tau,
        dual_step=sigma,
    )
    logger.info('%s solve finished: %s after %d iterations, objective %.6g, gap %.3g', problem.kind.value,
                status.value, iterations, result.objective_value, result.feasibility_gap)
    return result


def check_optimality(problem: ProblemSpec, x_hat, x_ref, tol_obj: Optional[float] = None,
                     feas_tol: float = 1e-6) -> OptimalityReport:
    """Compares `x_hat` against a feasible reference point.

    Passes when x_hat is feasible within feas_tol·(1 + ||y||) and
    f(x_hat) <= f(x_ref) + tol_obj, with tol_obj defaulting to
    1e-4·(1 + |f(x_ref)|).

    """
    f_hat = objective_value(problem, x_hat)
    f_ref = objective_value(problem, x_ref)
    tol_obj = 1e-4 * (1 + abs(f_ref)) if tol_obj is None else tol_obj

    gap = feasibility_gap(problem, x_hat)
    ref_gap = feasibility_gap(problem, x_ref)
    limit = feas_tol * (1 + np.linalg.norm(problem.y))
    if ref_gap > limit:
        logger.warning('Reference point is infeasible (gap %.3g); the optimality check is not meaningful', ref_gap)

    feasible = gap <= limit
    return OptimalityReport(bool(feasible and f_hat <= f_ref + tol_obj), f_hat, f_ref, gap, bool(feasible), ref_gap)
