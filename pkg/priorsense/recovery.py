"""The six recovery programs, their validation, objectives and JSON form.

Every program reads   min f(x)  s.t.  ||y - A x||_2 <= δ   with

==========  ===========================================
kind        f(x)
==========  ===========================================
bp          ||x||_1
mc_sparse   ||x||_1 - <x, λφ>
l1l1        ||x||_1 + λ||x - φ||_1
l1l2        ||x||_1 + (λ/2)||x - φ||_2^2
mc_block    ||x||_{2,1} - <x, λφ>
mc_lowrank  ||X||_* - <X, λΦ>
==========  ===========================================

"""
#pylint: disable=invalid-name
import json
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Callable, Optional, Union

import numpy as np

from priorsense import geometry
from priorsense.ensembles import MeasurementOperator
from priorsense.proximal import (BlockPartition, PriorShift, Structure, prox_l1l1, prox_l1l2, prox_mc_block,
                                 prox_mc_l1, prox_mc_nuclear, soft_threshold, svd)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class ProblemKind(str, Enum):
    BP = 'bp'
    MC_SPARSE = 'mc_sparse'
    L1L1 = 'l1l1'
    L1L2 = 'l1l2'
    MC_BLOCK = 'mc_block'
    MC_LOWRANK = 'mc_lowrank'

    @property
    def structure(self) -> Structure:
        if self is ProblemKind.MC_BLOCK:
            return Structure.BLOCK_SPARSE
        if self is ProblemKind.MC_LOWRANK:
            return Structure.LOW_RANK
        return Structure.SPARSE

    @property
    def uses_shift(self) -> bool:
        return self in (ProblemKind.MC_SPARSE, ProblemKind.MC_BLOCK, ProblemKind.MC_LOWRANK)


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """A validated recovery program.  Build it with :func:`build_problem`."""
    kind: ProblemKind
    operator: MeasurementOperator
    y: np.ndarray
    delta: float
    shift: Optional[PriorShift] = None
    lam: Optional[float] = None
    phi: Optional[np.ndarray] = None
    partition: Optional[BlockPartition] = None
    may_be_unbounded: bool = False
    provenance: dict = field(default_factory=dict)

    @property
    def signal_shape(self):
        return self.operator.signal_shape

    @property
    def structure(self) -> Structure:
        return self.kind.structure


def _shift_exceeds_dual_ball(kind: ProblemKind, payload: np.ndarray, partition: Optional[BlockPartition]) -> bool:
    if kind is ProblemKind.MC_SPARSE:
        return bool(np.max(np.abs(payload), initial=0) > 1)
    if kind is ProblemKind.MC_BLOCK:
        return bool(np.max(partition.block_norms(payload), initial=0) > 1)
    return bool(svd(payload, compute_uv=False)[0] > 1)


def build_problem(kind, operator: MeasurementOperator, y, delta: float, shift: Optional[PriorShift] = None,
                  lam: Optional[float] = None, phi=None, partition: Optional[BlockPartition] = None,
                  provenance: Optional[dict] = None) -> ProblemSpec:
    """Validates the inputs of a recovery program and returns its :class:`ProblemSpec`.

    Parameters
    ----------
    kind : ProblemKind or str
        Program kind
    operator : MeasurementOperator
        Measurement operator A
    y : ndarray
        Measurements
    delta : float
        Radius of the fidelity constraint
    shift : PriorShift, optional
        λφ for the MC kinds.  A zero shift is used when omitted, by default None
    lam : float, optional
        Weight of the l1-l1 / l1-l2 penalties
    phi : ndarray, optional
        Prior signal of the l1-l1 / l1-l2 penalties
    partition : BlockPartition, optional
        Required for mc_block
    provenance : dict, optional
        Free-form bookkeeping (seeds, generator parameters) kept in the JSON form

    Returns
    -------
    ProblemSpec
        The program.  `may_be_unbounded` is set, and a warning logged, when the
        MC shift lies outside the dual unit ball of the norm, in which case the
        objective can be unbounded below on the feasible set.

    Raises
    ------
    ValueError
        Raised on inconsistent shapes, a negative `delta` or missing inputs

    """
    kind = ProblemKind(kind)
    y = np.array(y, dtype=float)
    if y.shape != (operator.m,):
        raise ValueError(f'Measurements of shape {y.shape} do not match an operator with {operator.m} rows!')
    if not np.isfinite(delta) or delta < 0:
        raise ValueError(f'delta must be finite and nonnegative, got {delta}!')

    signal_shape = operator.signal_shape
    expected_ndim = 2 if kind is ProblemKind.MC_LOWRANK else 1
    if len(signal_shape) != expected_ndim:
        raise ValueError(f'{kind.value} needs {expected_ndim}-D signals, operator acts on {signal_shape}!')

    if kind is ProblemKind.MC_BLOCK:
        if partition is None or partition.n != signal_shape[0]:
            raise ValueError(f'mc_block needs a partition covering {signal_shape[0]} entries!')
    else:
        partition = None

    may_be_unbounded = False
    if kind.uses_shift:
        shift = PriorShift.zero(signal_shape, kind.structure) if shift is None else shift
        if shift.shape != signal_shape:
            raise ValueError(f'Shift of shape {shift.shape} does not match signal shape {signal_shape}!')
        if shift.structure is not kind.structure:
            raise ValueError(f'A {shift.structure.value} shift cannot be used with {kind.value}!')
        may_be_unbounded = _shift_exceeds_dual_ball(kind, shift.payload, partition)
        lam = phi = None
    else:
        shift = None

    if kind in (ProblemKind.L1L1, ProblemKind.L1L2):
        if lam is None or phi is None:
            raise ValueError(f'{kind.value} needs both lam and phi!')
        if lam < 0:
            raise ValueError(f'lam must be nonnegative, got {lam}!')
        phi = np.array(phi, dtype=float)
        if phi.shape != signal_shape:
            raise ValueError(f'Prior of shape {phi.shape} does not match signal shape {signal_shape}!')
        lam = float(lam)
    elif not kind.uses_shift:
        lam = phi = None

    if may_be_unbounded:
        logger.warning('The %s shift lies outside the dual unit ball; the objective may be unbounded below', kind.value)

    return ProblemSpec(kind, operator, y, float(delta), shift, lam, phi, partition, may_be_unbounded,
                       dict(provenance or {}))


def objective_value(spec: ProblemSpec, x) -> float:
    """Evaluates the objective of `spec` at `x`."""
    x = np.asarray(x, dtype=float)
    if x.shape != spec.signal_shape:
        raise ValueError(f'Signal of shape {x.shape} does not match {spec.signal_shape}!')

    kind = spec.kind
    if kind is ProblemKind.BP:
        return float(np.sum(np.abs(x)))
    if kind is ProblemKind.L1L1:
        return float(np.sum(np.abs(x)) + spec.lam * np.sum(np.abs(x - spec.phi)))
    if kind is ProblemKind.L1L2:
        return float(np.sum(np.abs(x)) + spec.lam / 2 * np.sum((x - spec.phi)**2))

    linear = np.sum(x * spec.shift.payload)
    if kind is ProblemKind.MC_SPARSE:
        return float(np.sum(np.abs(x)) - linear)
    if kind is ProblemKind.MC_BLOCK:
        return float(np.sum(spec.partition.block_norms(x)) - linear)
    return float(np.sum(svd(x, compute_uv=False)) - linear)


def prox_for(spec: ProblemSpec) -> Callable[[np.ndarray, float], np.ndarray]:
    """Returns the prox (v, tau) -> prox_{tau f}(v) of the objective of `spec`."""
    kind = spec.kind
    if kind is ProblemKind.BP:
        return soft_threshold
    if kind is ProblemKind.MC_SPARSE:
        return partial(prox_mc_l1, shift=spec.shift)
    if kind is ProblemKind.L1L1:
        return partial(prox_l1l1, lam=spec.lam, phi=spec.phi)
    if kind is ProblemKind.L1L2:
        return partial(prox_l1l2, lam=spec.lam, phi=spec.phi)
    if kind is ProblemKind.MC_BLOCK:
        return partial(prox_mc_block, shift=spec.shift, part=spec.partition)
    return partial(prox_mc_nuclear, shift=spec.shift)


def subgradient_check(spec: ProblemSpec, x_star, rank: Optional[int] = None) -> bool:
    """Returns True when 0 is NOT in ∂||x*|| - shift, i.e. the width bounds apply.

    The l1-l1, l1-l2 and bp programs carry no shift, so their check uses a
    zero shift on the l1 norm.

    """
    x_star = np.asarray(x_star, dtype=float)
    if x_star.shape != spec.signal_shape:
        raise ValueError(f'Signal of shape {x_star.shape} does not match {spec.signal_shape}!')
    if not np.any(x_star):
        return False

    shift = spec.shift if spec.shift is not None else PriorShift.zero(x_star.shape, spec.structure)
    return not geometry.shifted_subdifferential_contains_zero(spec.structure, x_star, shift, spec.partition, rank)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------
_PROBLEM_KEYS = {'schema_version', 'kind', 'signal_shape', 'operator', 'y', 'delta', 'shift', 'lam', 'phi',
                 'block_size', 'provenance'}


def problem_to_dict(spec: ProblemSpec) -> dict:
    data = {
        'schema_version': SCHEMA_VERSION,
        'kind': spec.kind.value,
        'signal_shape': list(spec.signal_shape),
        'operator': spec.operator.matrix.tolist(),
        'y': spec.y.tolist(),
        'delta': spec.delta,
        'provenance': spec.provenance,
    }
    if spec.shift is not None:
        data['shift'] = spec.shift.to_list()
    if spec.lam is not None:
        data['lam'] = spec.lam
        data['phi'] = spec.phi.tolist()
    if spec.partition is not None:
        data['block_size'] = spec.partition.k
    return data


def problem_from_dict(data: dict) -> ProblemSpec:
    """Rebuilds a validated :class:`ProblemSpec` from its JSON form.

    Raises
    ------
    ValueError
        Raised on an unknown schema version or unknown keys
    KeyError
        Raised if a required key is missing

    """
    version = data.get('schema_version', SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValueError(f'Unsupported problem schema_version {version}!')
    unknown = set(data) - _PROBLEM_KEYS
    if unknown:
        raise ValueError(f'Unknown problem keys: {sorted(unknown)}!')

    kind = ProblemKind(data['kind'])
    signal_shape = tuple(data['signal_shape'])
    operator = MeasurementOperator(data['operator'], signal_shape)

    shift = None
    if 'shift' in data:
        shift = PriorShift(data['shift'], kind.structure)

    partition = None
    if 'block_size' in data:
        partition = BlockPartition.from_sizes(signal_shape[0], data['block_size'])

    return build_problem(kind, operator, data['y'], data['delta'], shift=shift, lam=data.get('lam'),
                         phi=data.get('phi'), partition=partition, provenance=data.get('provenance'))


def save_problem(spec: ProblemSpec, filename: Union[str, os.PathLike]):
    with open(filename, 'w') as outfile:
        json.dump(problem_to_dict(spec), outfile, indent=2)


def load_problem(filename: Union[str, os.PathLike]) -> ProblemSpec:
    with open(filename, 'r') as infile:
        return problem_from_dict(json.load(infile))
