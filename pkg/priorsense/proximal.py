"""Closed-form proximal operators and projections used by the recovery programs.

Every prox takes `tau`, the primal step of the splitting solver.  For the
correlation-maximizing (MC) programs the product of the weight and the prior
is carried by a :class:`PriorShift`, so the proxes never see the two factors
separately.  The l1-l1 and l1-l2 baselines keep `lam` and `phi` apart because
their penalties are nonlinear in the prior.

"""
#pylint: disable=invalid-name
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple, Union

import numpy as np
import scipy.linalg

logger = logging.getLogger(__name__)


class Structure(str, Enum):
    """Signal structures handled by the package."""
    SPARSE = 'sparse'
    BLOCK_SPARSE = 'block_sparse'
    LOW_RANK = 'low_rank'


class SVDError(ArithmeticError):
    """Raised when a singular value decomposition does not converge."""


@dataclass(frozen=True)
class BlockPartition:
    """Partition of {0, ..., n-1} into `l` contiguous blocks of size `k`.

    Parameters
    ----------
    n : int
        Ambient dimension
    k : int
        Block size

    Raises
    ------
    ValueError
        Raised if `k` does not divide `n`

    """
    n: int
    k: int

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError(f'Block size and dimension must be positive, got n={self.n}, k={self.k}!')
        if self.n % self.k != 0:
            raise ValueError(f'Block size {self.k} does not divide the dimension {self.n}!')

    @classmethod
    def from_sizes(cls, n: int, k: int) -> 'BlockPartition':
        return cls(int(n), int(k))

    @property
    def l(self) -> int:
        return self.n // self.k

    @property
    def blocks(self) -> List[slice]:
        return [slice(b * self.k, (b + 1) * self.k) for b in range(self.l)]

    def reshape(self, v: np.ndarray) -> np.ndarray:
        """Returns `v` viewed as an (l, k) array, one row per block."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise ValueError(f'Vector of shape {v.shape} does not match a partition of {self.n} entries!')
        return v.reshape(self.l, self.k)

    def block_norms(self, v: np.ndarray) -> np.ndarray:
        """Returns the l2 norm of every block of `v`."""
        return np.linalg.norm(self.reshape(v), axis=1)


@dataclass(frozen=True, eq=False)
class PriorShift:
    """The product of the weight and the prior signal, tagged with its structure.

    Parameters
    ----------
    payload : ndarray
        Vector (sparse and block-sparse structures) or matrix (low rank)
    structure : Structure
        Structure of the signal the shift acts on

    """
    payload: np.ndarray
    structure: Structure = Structure.SPARSE

    def __post_init__(self):
        structure = Structure(self.structure)
        payload = np.array(self.payload, dtype=float)
        payload.setflags(write=False)

        expected_ndim = 2 if structure is Structure.LOW_RANK else 1
        if payload.ndim != expected_ndim:
            raise ValueError(f'A {structure.value} shift must have {expected_ndim} dimension(s), got shape {payload.shape}!')
        if not np.all(np.isfinite(payload)):
            raise ValueError('Shift payload must be finite!')

        object.__setattr__(self, 'structure', structure)
        object.__setattr__(self, 'payload', payload)

    @classmethod
    def zero(cls, shape: Union[int, Tuple[int, ...]], structure: Structure = Structure.SPARSE) -> 'PriorShift':
        return cls(np.zeros(shape), structure)

    @classmethod
    def from_prior(cls, lam: float, phi, structure: Structure = Structure.SPARSE) -> 'PriorShift':
        """Builds the shift λφ from a weight and a prior signal."""
        if lam < 0:
            raise ValueError(f'The weight must be nonnegative, got {lam}!')
        return cls(lam * np.asarray(phi, dtype=float), structure)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.payload.shape

    def to_list(self) -> list:
        return self.payload.tolist()


def as_payload(shift, shape: Tuple[int, ...] = None) -> np.ndarray:
    """Returns the payload array of `shift` (a :class:`PriorShift` or array-like).

    Raises
    ------
    ValueError
        Raised if `shape` is given and does not match

    """
    payload = shift.payload if isinstance(shift, PriorShift) else np.asarray(shift, dtype=float)
    if shape is not None and payload.shape != tuple(shape):
        raise ValueError(f'Shift of shape {payload.shape} does not match signal of shape {tuple(shape)}!')
    return payload


def svd(M: np.ndarray, full_matrices=False, compute_uv=True):
    """Dense SVD that retries with the slower LAPACK driver before giving up.

    Raises
    ------
    SVDError
        Raised if neither driver converges

    """
    M = np.asarray(M, dtype=float)
    try:
        return scipy.linalg.svd(M, full_matrices=full_matrices, compute_uv=compute_uv, lapack_driver='gesdd')
    except np.linalg.LinAlgError:
        logger.debug('gesdd did not converge on a %s matrix, retrying with gesvd', M.shape)

    try:
        return scipy.linalg.svd(M, full_matrices=full_matrices, compute_uv=compute_uv, lapack_driver='gesvd')
    except np.linalg.LinAlgError as err:
        raise SVDError(f'SVD of a {M.shape} matrix did not converge!') from err


def soft_threshold(v, tau: float) -> np.ndarray:
    """Componentwise sign(v)·max(|v| - tau, 0), the prox of tau·||·||_1."""
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0)


def prox_mc_l1(v, tau: float, shift) -> np.ndarray:
    """Prox of tau·(||x||_1 - <x, λφ>).

    The linear term only translates the argument, so this is
    `soft_threshold(v + tau·λφ, tau)`.

    """
    v = np.asarray(v, dtype=float)
    return soft_threshold(v + tau * as_payload(shift, v.shape), tau)


def prox_mc_block(v, tau: float, shift, part: BlockPartition) -> np.ndarray:
    """Prox of tau·(||x||_{2,1} - <x, λφ>) by block soft-thresholding.

    Parameters
    ----------
    v : ndarray
        Point to evaluate the prox at
    tau : float
        Step size
    shift : PriorShift
        λφ
    part : BlockPartition
        Block structure of the signal

    Returns
    -------
    ndarray
        Each block b is w·max(1 - tau/||w||, 0) with w = v_b + tau·(λφ)_b

    """
    v = np.asarray(v, dtype=float)
    w = part.reshape(v + tau * as_payload(shift, v.shape))
    norms = np.linalg.norm(w, axis=1, keepdims=True)
    with np.errstate(divide='ignore', invalid='ignore'):
        scale = np.where(norms > tau, 1 - tau / norms, 0.0)
    return (scale * w).reshape(-1)


def prox_mc_nuclear(V, tau: float, shift) -> np.ndarray:
    """Prox of tau·(||X||_* - <X, λΦ>): singular value thresholding of V + tau·λΦ.

    Raises
    ------
    SVDError
        Raised if the SVD fails

    """
    V = np.asarray(V, dtype=float)
    U, s, Vt = svd(V + tau * as_payload(shift, V.shape))
    s = np.maximum(s - tau, 0)
    return (U * s) @ Vt


def prox_l1l1(v, tau: float, lam: float, phi) -> np.ndarray:
    """Prox of tau·(||x||_1 + lam·||x - phi||_1), coordinate by coordinate.

    Each coordinate is a piecewise-linear function with kinks at 0 and phi_i.
    With a = min(0, phi_i) and b = max(0, phi_i) carrying weights w_a and w_b
    (1 for the kink at zero, `lam` for the kink at phi_i), the solution is in
    one of five regions: left of a, pinned at a, between the kinks, pinned at
    b, right of b.

    """
    v = np.asarray(v, dtype=float)
    phi = np.broadcast_to(np.asarray(phi, dtype=float), v.shape)
    if lam < 0:
        raise ValueError(f'The l1-l1 weight must be nonnegative, got {lam}!')

    a = np.minimum(0, phi)
    b = np.maximum(0, phi)
    w_a = np.where(phi >= 0, 1.0, lam)
    w_b = np.where(phi >= 0, lam, 1.0)

    outer = tau * (w_a + w_b)
    inner = tau * (w_a - w_b)
    middle = v - inner

    conditions = [
        v < a - outer,
        v <= a + inner,
        middle < b,
        v <= b + outer,
    ]
    choices = [v + outer, a, middle, b]
    return np.select(conditions, choices, default=v - outer)


def prox_l1l2(v, tau: float, lam: float, phi) -> np.ndarray:
    """Prox of tau·(||x||_1 + (lam/2)·||x - phi||_2^2)."""
    if lam < 0:
        raise ValueError(f'The l1-l2 weight must be nonnegative, got {lam}!')
    v = np.asarray(v, dtype=float)
    phi = np.asarray(phi, dtype=float)
    scale = 1 + tau * lam
    return soft_threshold((v + tau * lam * phi) / scale, tau / scale)


def project_l2_ball(z, center, delta: float) -> np.ndarray:
    """Euclidean projection of `z` onto the ball of radius `delta` around `center`."""
    z = np.asarray(z, dtype=float)
    center = np.asarray(center, dtype=float)
    if z.shape != center.shape:
        raise ValueError(f'Shape mismatch between point {z.shape} and center {center.shape}!')
    if delta < 0:
        raise ValueError(f'Ball radius must be nonnegative, got {delta}!')

    if delta == 0:
        return center.copy()

    offset = z - center
    dist = np.linalg.norm(offset)
    if dist <= delta:
        return z.copy()
    return center + offset * (delta / dist)
