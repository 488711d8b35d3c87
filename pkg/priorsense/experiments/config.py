"""Experiment configuration, presets and their JSON form.

"""
import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import List, Optional, Union

SCHEMA_VERSION = 1
DEFAULT_SEED = 20190101

PHASE_STUDIES = ('phase_sparse', 'phase_lowrank')
COMPARE_STUDIES = ('compare_sparse', 'compare_lowrank')
STUDIES = PHASE_STUDIES + COMPARE_STUDIES

SPARSE_METHODS = ('bp', 'l1l1', 'l1l2', 'mc', 'mc_known', 'mc_estimated')
LOWRANK_METHODS = ('nuclear', 'mc', 'mc_known', 'mc_estimated')
SHIFT_RULES = ('a', 'b', 'c', 'd', 'e', 'f')
PERTURBATIONS = ('dense', 'sparse')


def step_grid(step: int, stop: int, start: Optional[int] = None) -> List[int]:
    """Returns [start, start + step, ..., <= stop], with `start` defaulting to `step`."""
    if step < 1:
        raise ValueError(f'Grid step must be at least 1, got {step}!')
    start = step if start is None else start
    return list(range(start, stop + 1, step))


def _grid_from_json(value) -> List[int]:
    if isinstance(value, dict):
        unknown = set(value) - {'step', 'stop', 'start'}
        if unknown:
            raise ValueError(f'Unknown grid keys: {sorted(unknown)}!')
        return step_grid(value['step'], value['stop'], value.get('start'))
    return [int(v) for v in value]


@dataclass
class ExperimentConfig:
    """Settings of a phase-transition or comparison study.

    For phase maps `levels` are the rows (sparsity s or rank r) and
    `measurements` the columns.  Comparison studies use `levels[0]` as the
    fixed level and sweep `measurements`.  Low-rank studies act on n x n
    matrices.  `lam` defaults to 1 for sparse studies and 1/n for low-rank
    ones.

    """
    study: str
    n: int
    levels: List[int]
    measurements: List[int]
    trials: int = 25
    tol: float = 1e-2
    noise_std: float = 0.0
    shift_rules: List[str] = field(default_factory=lambda: ['a'])
    methods: List[str] = field(default_factory=list)
    perturbation: str = 'dense'
    perturbation_std: float = 0.1
    perturbation_sparsity: int = 20
    perturbation_overlap: int = 16
    lam: Optional[float] = None
    kappa: float = 0.95
    max_iters: int = 20000
    solver_tol: float = 1e-7
    master_seed: int = DEFAULT_SEED
    jobs: int = 1

    def __post_init__(self):
        self.levels = [int(v) for v in self.levels]
        self.measurements = [int(v) for v in self.measurements]
        self.shift_rules = list(self.shift_rules)
        self.methods = list(self.methods)
        self.validate()

    @property
    def is_lowrank(self) -> bool:
        return self.study.endswith('lowrank')

    @property
    def is_phase(self) -> bool:
        return self.study in PHASE_STUDIES

    @property
    def signal_shape(self):
        return (self.n, self.n) if self.is_lowrank else (self.n,)

    @property
    def weight(self) -> float:
        if self.lam is not None:
            return self.lam
        return 1 / self.n if self.is_lowrank else 1.0

    def validate(self):
        if self.study not in STUDIES:
            raise ValueError(f'Unknown study {self.study!r}; expected one of {STUDIES}!')
        if self.n < 1:
            raise ValueError(f'n must be positive, got {self.n}!')
        if self.trials < 1:
            raise ValueError(f'trials must be at least 1, got {self.trials}!')
        if self.tol <= 0:
            raise ValueError(f'tol must be positive, got {self.tol}!')
        if self.noise_std < 0 or self.perturbation_std < 0:
            raise ValueError('Standard deviations must be nonnegative!')
        if not 0 < self.kappa < 1:
            raise ValueError(f'kappa must lie in (0, 1), got {self.kappa}!')
        if self.lam is not None and self.lam < 0:
            raise ValueError(f'lam must be nonnegative, got {self.lam}!')
        if self.max_iters < 1 or self.solver_tol <= 0:
            raise ValueError(f'Invalid solver settings max_iters={self.max_iters}, solver_tol={self.solver_tol}!')
        if self.master_seed < 0:
            raise ValueError(f'master_seed must be nonnegative, got {self.master_seed}!')
        if self.jobs < 1:
            raise ValueError(f'jobs must be at least 1, got {self.jobs}!')

        if not self.levels or any(v < 1 or v > self.n for v in self.levels):
            raise ValueError(f'Levels must lie in [1, {self.n}], got {self.levels}!')
        if any(m < 0 for m in self.measurements):
            raise ValueError(f'Measurement counts must be nonnegative, got {self.measurements}!')
        if self.measurements != sorted(set(self.measurements)) or self.levels != sorted(set(self.levels)):
            raise ValueError('Grids must be strictly increasing!')

        if self.is_phase:
            bad = [r for r in self.shift_rules if r not in SHIFT_RULES]
            if bad or not self.shift_rules:
                raise ValueError(f'Shift rules must be a non-empty subset of {SHIFT_RULES}, got {self.shift_rules}!')
        else:
            if len(self.levels) != 1:
                raise ValueError(f'Comparison studies take exactly one level, got {self.levels}!')
            allowed = LOWRANK_METHODS if self.is_lowrank else SPARSE_METHODS
            bad = [m for m in self.methods if m not in allowed]
            if bad or not self.methods:
                raise ValueError(f'Methods must be a non-empty subset of {allowed}, got {self.methods}!')
            if self.perturbation not in PERTURBATIONS:
                raise ValueError(f'Unknown perturbation {self.perturbation!r}!')
            if self.is_lowrank and self.perturbation != 'dense':
                raise ValueError('Low-rank priors only support the dense perturbation!')
            if self.perturbation == 'sparse' and not 0 <= self.perturbation_overlap <= self.perturbation_sparsity:
                raise ValueError(f'Overlap {self.perturbation_overlap} exceeds sparsity {self.perturbation_sparsity}!')

    def to_dict(self) -> dict:
        data = asdict(self)
        data['schema_version'] = SCHEMA_VERSION
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'ExperimentConfig':
        """Builds a config from its JSON form; grids may be lists or {"step", "stop", "start"?}.

        Raises
        ------
        ValueError
            Raised on an unsupported schema version or unknown keys

        """
        data = dict(data)
        version = data.pop('schema_version', SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ValueError(f'Unsupported experiment schema_version {version}!')
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f'Unknown experiment keys: {sorted(unknown)}!')
        for key in ('levels', 'measurements'):
            if key in data:
                data[key] = _grid_from_json(data[key])
        return cls(**data)

    def override(self, **changes) -> 'ExperimentConfig':
        """Returns a copy with the non-None `changes` applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def load_config(filename: Union[str, os.PathLike]) -> ExperimentConfig:
    with open(filename, 'r') as infile:
        return ExperimentConfig.from_dict(json.load(infile))


def _presets() -> dict:
    desk = {
        'phase_sparse': ExperimentConfig('phase_sparse', 64, step_grid(2, 32), step_grid(2, 64),
                                         trials=25, shift_rules=list(SHIFT_RULES)),
        'phase_lowrank': ExperimentConfig('phase_lowrank', 16, step_grid(1, 8), step_grid(16, 256),
                                          trials=25, shift_rules=list(SHIFT_RULES)),
        'compare_sparse': ExperimentConfig('compare_sparse', 128, [12], step_grid(4, 96), trials=25,
                                           noise_std=0.01, methods=list(SPARSE_METHODS), perturbation='dense',
                                           perturbation_sparsity=5, perturbation_overlap=4),
        'compare_lowrank': ExperimentConfig('compare_lowrank', 16, [3], step_grid(8, 200), trials=25,
                                            noise_std=0.01, methods=list(LOWRANK_METHODS)),
    }
    full = {
        'phase_sparse': replace(desk['phase_sparse'], n=128, levels=step_grid(2, 128), measurements=step_grid(2, 128),
                                trials=50),
        'phase_lowrank': replace(desk['phase_lowrank'], n=32, levels=step_grid(1, 32), measurements=step_grid(32, 1024),
                                 trials=50),
        'compare_sparse': replace(desk['compare_sparse'], n=500, levels=[50], measurements=step_grid(10, 400),
                                  trials=50, perturbation_sparsity=20, perturbation_overlap=16),
        'compare_lowrank': replace(desk['compare_lowrank'], n=32, levels=[5], measurements=step_grid(16, 640),
                                   trials=50),
    }
    return {'desk': desk, 'full': full}


PRESETS = _presets()


def preset(study: str, paper_scale: bool = False) -> ExperimentConfig:
    """Returns a copy of the desk-scale (or full-scale) preset for `study`."""
    if study not in STUDIES:
        raise ValueError(f'Unknown study {study!r}; expected one of {STUDIES}!')
    return replace(PRESETS['full' if paper_scale else 'desk'][study])
