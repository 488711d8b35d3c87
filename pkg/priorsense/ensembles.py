"""Measurement operators, random signals and prior perturbations.

All samplers are pure functions of their arguments and seed.  Anything that
takes a seed also takes a :class:`numpy.random.Generator`, so a caller can
thread one stream through several samplers.

"""
#pylint: disable=invalid-name
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from priorsense.proximal import BlockPartition, Structure, svd
from priorsense.utilities import SeedLike, make_rng

logger = logging.getLogger(__name__)

POWER_ITERATION_SEED = 7


class MeasurementOperator:
    """Linear map from the signal space to R^m, stored as a dense m x N matrix.

    A vector operator has `signal_shape` (n,).  A matrix-sensing operator has
    `signal_shape` (n1, n2) and row j holds vec(A^j), so
    forward(X)_j = <A^j, X>.

    Parameters
    ----------
    matrix : ndarray
        Stacked dense matrix of shape (m, prod(signal_shape))
    signal_shape : tuple of int, optional
        Shape of the signals the operator acts on, by default (matrix.shape[1],)

    Raises
    ------
    ValueError
        Raised if the matrix is empty or does not match `signal_shape`

    """

    def __init__(self, matrix, signal_shape: Optional[Tuple[int, ...]] = None):
        matrix = np.array(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
            raise ValueError(f'A measurement operator needs a non-empty 2-D matrix, got shape {matrix.shape}!')

        signal_shape = (matrix.shape[1],) if signal_shape is None else tuple(int(d) for d in signal_shape)
        if int(np.prod(signal_shape)) != matrix.shape[1]:
            raise ValueError(f'Signal shape {signal_shape} does not match {matrix.shape[1]} operator columns!')
        if not np.all(np.isfinite(matrix)):
            raise ValueError('Measurement operator entries must be finite!')

        matrix.setflags(write=False)
        self._matrix = matrix
        self._signal_shape = signal_shape

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def m(self) -> int:
        return self._matrix.shape[0]

    @property
    def signal_shape(self) -> Tuple[int, ...]:
        return self._signal_shape

    @property
    def is_matrix_sensing(self) -> bool:
        return len(self._signal_shape) == 2

    def forward(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != self._signal_shape:
            raise ValueError(f'Signal of shape {x.shape} does not match operator input {self._signal_shape}!')
        return self._matrix @ x.reshape(-1)

    def adjoint(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.m,):
            raise ValueError(f'Measurement vector of shape {z.shape} does not match {self.m} rows!')
        return (self._matrix.T @ z).reshape(self._signal_shape)

    def __repr__(self):
        return f'MeasurementOperator(m={self.m}, signal_shape={self._signal_shape})'


class OperatorNorm(NamedTuple):
    value: float
    converged: bool


@dataclass(frozen=True)
class SignalSpec:
    """Describes a random structured signal.

    Parameters
    ----------
    structure : Structure
        sparse, block_sparse or low_rank
    shape : tuple of int
        (n,) for vectors or (n1, n2) for matrices
    level : int
        Sparsity s, number of nonzero blocks s, or rank r
    partition : BlockPartition, optional
        Required for block-sparse signals
    seed : int, optional
        Generator seed

    """
    structure: Structure
    shape: Tuple[int, ...]
    level: int
    partition: Optional[BlockPartition] = None
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'structure', Structure(self.structure))
        object.__setattr__(self, 'shape', tuple(int(d) for d in np.atleast_1d(self.shape)))
        self.validate()

    def validate(self):
        if self.level < 0:
            raise ValueError(f'Structure level must be nonnegative, got {self.level}!')

        if self.structure is Structure.LOW_RANK:
            if len(self.shape) != 2:
                raise ValueError(f'Low-rank signals need a 2-D shape, got {self.shape}!')
            if self.level > min(self.shape):
                raise ValueError(f'Rank {self.level} exceeds min{self.shape}!')
            return

        if len(self.shape) != 1:
            raise ValueError(f'{self.structure.value} signals need a 1-D shape, got {self.shape}!')

        if self.structure is Structure.BLOCK_SPARSE:
            if self.partition is None or self.partition.n != self.shape[0]:
                raise ValueError(f'Block-sparse signals need a partition of {self.shape[0]} entries!')
            if self.level > self.partition.l:
                raise ValueError(f'Block count {self.level} exceeds the {self.partition.l} available blocks!')
        elif self.level > self.shape[0]:
            raise ValueError(f'Sparsity {self.level} exceeds the dimension {self.shape[0]}!')


def _check_dims(*dims: int):
    if any(int(d) < 1 for d in dims):
        raise ValueError(f'Dimensions must be positive, got {dims}!')


def sample_bernoulli_matrix(m: int, n: int, seed: SeedLike = None) -> np.ndarray:
    """Returns an m x n matrix with i.i.d. symmetric ±1 entries.

    Entries are not rescaled by 1/sqrt(m).

    """
    _check_dims(m, n)
    rng = make_rng(seed)
    return rng.integers(0, 2, size=(m, n)).astype(float) * 2 - 1


def sample_gaussian_matrix(m: int, n: int, seed: SeedLike = None) -> np.ndarray:
    """Returns an m x n matrix with i.i.d. N(0, 1) entries."""
    _check_dims(m, n)
    return make_rng(seed).standard_normal((m, n))


def make_dense_operator(A) -> MeasurementOperator:
    return MeasurementOperator(A)


def make_matrix_sensing_operator(mats: Sequence[np.ndarray]) -> MeasurementOperator:
    """Returns X -> (<A^1, X>, ..., <A^m, X>) for the matrices `mats`.

    Raises
    ------
    ValueError
        Raised if the family is empty or the matrices do not share one shape

    """
    mats = [np.asarray(A, dtype=float) for A in mats]
    if not mats:
        raise ValueError('A matrix-sensing operator needs at least one matrix!')

    shape = mats[0].shape
    if len(shape) != 2:
        raise ValueError(f'Sensing matrices must be 2-D, got shape {shape}!')
    for j, A in enumerate(mats):
        if A.shape != shape:
            raise ValueError(f'Sensing matrix {j} has shape {A.shape}, expected {shape}!')

    return MeasurementOperator(np.stack([A.reshape(-1) for A in mats]), shape)


def sample_bernoulli_sensing(m: int, shape: Tuple[int, int], seed: SeedLike = None) -> MeasurementOperator:
    """Returns a matrix-sensing operator built from m independent ±1 matrices."""
    n1, n2 = shape
    return MeasurementOperator(sample_bernoulli_matrix(m, n1 * n2, seed), (n1, n2))


def sample_gaussian_sensing(m: int, shape: Tuple[int, int], seed: SeedLike = None) -> MeasurementOperator:
    """Returns a matrix-sensing operator built from m independent N(0, 1) matrices."""
    n1, n2 = shape
    return MeasurementOperator(sample_gaussian_matrix(m, n1 * n2, seed), (n1, n2))


def operator_norm(op: MeasurementOperator, max_iters: int = 200, tol: float = 1e-6, seed: SeedLike = POWER_ITERATION_SEED) -> OperatorNorm:
    """Estimates the largest singular value of `op` by power iteration on adjoint∘forward.

    Parameters
    ----------
    op : MeasurementOperator
        Operator
    max_iters : int, optional
        Iteration cap, by default 200
    tol : float, optional
        Relative change of the estimate that counts as converged, by default 1e-6
    seed : int, optional
        Seed of the starting vector, by default POWER_ITERATION_SEED

    Returns
    -------
    OperatorNorm
        Estimate and whether it converged.  On non-convergence the last
        estimate is returned and a warning is logged.

    """
    if max_iters < 1:
        raise ValueError(f'max_iters must be positive, got {max_iters}!')

    v = make_rng(seed).standard_normal(op.signal_shape)
    v /= np.linalg.norm(v)
    estimate = 0.0

    for _ in range(max_iters):
        w = op.adjoint(op.forward(v))
        w_norm = np.linalg.norm(w)
        if w_norm == 0:
            return OperatorNorm(0.0, True)

        new_estimate = np.sqrt(w_norm)
        v = w / w_norm
        if abs(new_estimate - estimate) <= tol * new_estimate:
            return OperatorNorm(float(new_estimate), True)
        estimate = new_estimate

    logger.warning('Power iteration did not reach tol=%g in %d iterations; using %g', tol, max_iters, estimate)
    return OperatorNorm(float(estimate), False)


def sample_signal(spec: SignalSpec, seed: SeedLike = None) -> np.ndarray:
    """Draws a random signal following `spec`.

    sparse: uniformly random support of size s with N(0, 1) values.
    block_sparse: s uniformly random blocks filled with N(0, 1) values.
    low_rank: best rank-r approximation of an N(0, 1) matrix.

    Parameters
    ----------
    spec : SignalSpec
        Signal description
    seed : int, SeedSequence or Generator, optional
        Overrides `spec.seed` when given, by default None

    Returns
    -------
    ndarray
        Signal of shape `spec.shape`

    """
    rng = make_rng(spec.seed if seed is None else seed)

    if spec.structure is Structure.SPARSE:
        n = spec.shape[0]
        x = np.zeros(n)
        support = rng.choice(n, size=spec.level, replace=False)
        x[support] = rng.standard_normal(spec.level)
        return x

    if spec.structure is Structure.BLOCK_SPARSE:
        part = spec.partition
        x = np.zeros((part.l, part.k))
        blocks = rng.choice(part.l, size=spec.level, replace=False)
        x[blocks] = rng.standard_normal((spec.level, part.k))
        return x.reshape(-1)

    G = rng.standard_normal(spec.shape)
    r = spec.level
    U, s, Vt = svd(G)
    return (U[:, :r] * s[:r]) @ Vt[:r]


def sample_noise(m: int, std: float, seed: SeedLike = None) -> np.ndarray:
    """Returns m i.i.d. N(0, std^2) noise entries."""
    if std < 0:
        raise ValueError(f'Noise standard deviation must be nonnegative, got {std}!')
    return std * make_rng(seed).standard_normal(m)


def sample_perturbation(x_star, kind: str = 'dense', std: float = 0.1, sparsity: Optional[int] = None,
                        overlap: Optional[int] = None, seed: SeedLike = None) -> np.ndarray:
    """Returns a prior φ = x* + z for a random perturbation z.

    Parameters
    ----------
    x_star : ndarray
        True signal (vector or matrix)
    kind : {'dense', 'sparse'}, optional
        dense: i.i.d. N(0, std^2) entries.  sparse: `sparsity` nonzero
        N(0, std^2) entries, `overlap` of them on the support of `x_star`, by default 'dense'
    std : float, optional
        Perturbation standard deviation, by default 0.1
    sparsity : int, optional
        Number of nonzeros of a sparse perturbation
    overlap : int, optional
        Nonzeros of a sparse perturbation placed on the support of `x_star`
    seed : int, SeedSequence or Generator, optional
        Random stream, by default None

    Returns
    -------
    ndarray
        The prior signal

    Raises
    ------
    ValueError
        Raised if the sparse perturbation cannot be placed

    """
    x_star = np.asarray(x_star, dtype=float)
    rng = make_rng(seed)
    if std < 0:
        raise ValueError(f'Perturbation standard deviation must be nonnegative, got {std}!')

    if kind == 'dense':
        return x_star + std * rng.standard_normal(x_star.shape)

    if kind != 'sparse':
        raise ValueError(f'Unknown perturbation kind {kind!r}!')
    if x_star.ndim != 1:
        raise ValueError('Sparse perturbations are only defined for vectors!')
    if sparsity is None or overlap is None:
        raise ValueError('A sparse perturbation needs both sparsity and overlap!')

    support = np.flatnonzero(x_star)
    complement = np.flatnonzero(x_star == 0)
    if not 0 <= overlap <= min(sparsity, support.size):
        raise ValueError(f'Overlap {overlap} must lie in [0, min({sparsity}, {support.size})]!')
    if sparsity - overlap > complement.size:
        raise ValueError(f'Cannot place {sparsity - overlap} perturbation entries off a support of size {support.size}!')

    idx = np.concatenate([
        rng.choice(support, size=overlap, replace=False),
        rng.choice(complement, size=sparsity - overlap, replace=False),
    ]).astype(int)
    z = np.zeros_like(x_star)
    z[idx] = std * rng.standard_normal(idx.size)
    return x_star + z
