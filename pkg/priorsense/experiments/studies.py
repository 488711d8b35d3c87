"""Phase-transition maps and method-comparison curves.

"""
import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from priorsense.experiments.config import ExperimentConfig
from priorsense.experiments.trials import TrialTask, run_comparison_trial, run_phase_trial

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['axis1', 'axis2', 'successes', 'trials', 'probability', 'method']


def transition_point(probabilities: Sequence[float], measurements: Sequence[int], level: float = 0.5) -> Optional[float]:
    """Returns the measurement count at which the success probability first reaches `level`.

    Linear interpolation between the last grid point below `level` and the
    first one at or above it.  None if `level` is never reached.

    """
    p = np.asarray(probabilities, dtype=float)
    m = np.asarray(measurements, dtype=float)
    if p.shape != m.shape:
        raise ValueError(f'{p.size} probabilities do not match {m.size} measurement counts!')

    reached = np.flatnonzero(p >= level)
    if reached.size == 0:
        return None
    i = reached[0]
    if i == 0:
        return float(m[0])
    return float(m[i - 1] + (level - p[i - 1]) * (m[i] - m[i - 1]) / (p[i] - p[i - 1]))


@dataclass
class PhaseMap:
    """Success counts over a (level, measurement count) grid for one shift rule.

    `successes[i, j]` counts the successful trials at `levels[i]`,
    `measurements[j]`.

    """
    label: str
    levels: List[int]
    measurements: List[int]
    successes: np.ndarray
    trials: int
    master_seed: int
    config: dict = field(default_factory=dict)

    @property
    def probabilities(self) -> np.ndarray:
        return self.successes / self.trials

    @property
    def method(self) -> str:
        return f'shift_{self.label}'

    def transition_points(self, level: float = 0.5) -> Dict[int, Optional[float]]:
        return {s: transition_point(row, self.measurements, level) for s, row in zip(self.levels, self.probabilities)}

    def to_frame(self) -> pd.DataFrame:
        rows = [(s, m, int(self.successes[i, j]), self.trials, self.successes[i, j] / self.trials, self.method)
                for i, s in enumerate(self.levels) for j, m in enumerate(self.measurements)]
        return pd.DataFrame(rows, columns=CSV_COLUMNS)


@dataclass
class SuccessCurve:
    """Success counts per method over the measurement counts, at one fixed level."""
    level: int
    measurements: List[int]
    successes: Dict[str, np.ndarray]
    trials: int
    master_seed: int
    config: dict = field(default_factory=dict)

    @property
    def methods(self) -> List[str]:
        return list(self.successes)

    @property
    def probabilities(self) -> Dict[str, np.ndarray]:
        return {method: counts / self.trials for method, counts in self.successes.items()}

    def transition_points(self, level: float = 0.5) -> Dict[str, Optional[float]]:
        return {method: transition_point(p, self.measurements, level) for method, p in self.probabilities.items()}

    def to_frame(self) -> pd.DataFrame:
        rows = [(self.level, m, int(counts[j]), self.trials, counts[j] / self.trials, method)
                for method, counts in self.successes.items() for j, m in enumerate(self.measurements)]
        return pd.DataFrame(rows, columns=CSV_COLUMNS)


def _recorded(config: ExperimentConfig) -> dict:
    """The configuration kept with results; the worker count does not affect them."""
    data = config.to_dict()
    data.pop('jobs')
    return data


def _map(worker: Callable, tasks: List[TrialTask], jobs: int) -> list:
    """Runs `worker` over `tasks`, results in task order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with Pool(jobs) as pool:
        return pool.map(worker, tasks, chunksize=max(1, len(tasks) // (4 * jobs)))


def run_phase_transitions(config: ExperimentConfig, rules: Optional[Sequence[str]] = None) -> List[PhaseMap]:
    """Runs the phase-transition study for every rule in `rules` (default: config.shift_rules)."""
    if not config.is_phase:
        raise ValueError(f'{config.study} is not a phase-transition study!')
    rules = list(config.shift_rules if rules is None else rules)

    tasks = [TrialTask(config, rule, level, m, trial)
             for rule in rules for level in config.levels for m in config.measurements
             for trial in range(config.trials)]
    outcomes = iter(_map(run_phase_trial, tasks, config.jobs))

    maps = []
    for rule in rules:
        successes = np.zeros((len(config.levels), len(config.measurements)), dtype=int)
        for i, level in enumerate(config.levels):
            for j, m in enumerate(config.measurements):
                successes[i, j] = sum(next(outcomes).success for _ in range(config.trials))
                logger.info('rule %s, level %d, m %d: %d/%d successes', rule, level, m, successes[i, j], config.trials)
        maps.append(PhaseMap(rule, list(config.levels), list(config.measurements), successes, config.trials,
                             config.master_seed, _recorded(config)))
    return maps


def run_phase_transition(config: ExperimentConfig, rule: Optional[str] = None) -> PhaseMap:
    """Runs the phase-transition study for one shift rule (default: the first configured)."""
    return run_phase_transitions(config, [rule or config.shift_rules[0]])[0]


def run_comparison(config: ExperimentConfig) -> SuccessCurve:
    """Runs every configured method over the measurement grid at the configured level."""
    if config.is_phase:
        raise ValueError(f'{config.study} is not a comparison study!')
    level = config.levels[0]

    tasks = [TrialTask(config, '', level, m, trial) for m in config.measurements for trial in range(config.trials)]
    outcomes = iter(_map(run_comparison_trial, tasks, config.jobs))

    successes = {method: np.zeros(len(config.measurements), dtype=int) for method in config.methods}
    for j, m in enumerate(config.measurements):
        for _ in range(config.trials):
            for method, outcome in next(outcomes).items():
                successes[method][j] += outcome.success
        logger.info('m %d: %s', m, ', '.join(f'{k} {v[j]}/{config.trials}' for k, v in successes.items()))

    return SuccessCurve(level, list(config.measurements), successes, config.trials, config.master_seed,
                        _recorded(config))
