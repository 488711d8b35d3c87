"""Improving a prior signal before it is used as a shift.

A raw prior φ is replaced by κ times the "sign" element of the norm's
subdifferential at its principal part: the signs of its s largest entries,
the unit directions of its l largest blocks, or Û_rV̂_rᵀ from its top r
singular vectors.  When the level is unknown it is estimated from the prior
by its stable sparsity, stable block count or stable rank.

"""
#pylint: disable=invalid-name
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from priorsense.proximal import BlockPartition, PriorShift, Structure, svd

logger = logging.getLogger(__name__)

DEFAULT_KAPPA = 0.95


@dataclass(frozen=True, eq=False)
class ImprovedShift:
    """An improved shift and how it was built.

    Attributes
    ----------
    payload : ndarray
        New λφ (vector) or λΦ (matrix)
    kappa : float
        Scale in (0, 1)
    level : int
        Sparsity, block count or rank actually applied
    estimated : bool
        True if `level` was estimated from the prior
    structure : Structure
        Structure of the payload

    """
    payload: np.ndarray
    kappa: float
    level: int
    estimated: bool
    structure: Structure

    def as_shift(self) -> PriorShift:
        return PriorShift(self.payload, self.structure)

    def to_dict(self) -> dict:
        return {
            'structure': Structure(self.structure).value,
            'payload': self.payload.tolist(),
            'kappa': self.kappa,
            'level': self.level,
            'estimated': self.estimated,
        }


def _round_clamp(value: float, upper: int) -> int:
    # half-up rounding, then clamp to [1, upper]
    return int(min(max(np.floor(value + 0.5), 1), upper))


def _check_kappa(kappa: float):
    if not 0 < kappa < 1:
        raise ValueError(f'kappa must lie in (0, 1), got {kappa}!')


def _nonzero(phi, what='prior') -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    if not np.any(phi):
        raise ValueError(f'The {what} must be nonzero!')
    return phi


def _top(values: np.ndarray, count: int) -> np.ndarray:
    """Indices of the `count` largest values; ties go to the lowest index."""
    return np.argsort(-values, kind='stable')[:count]


def estimate_sparsity(phi) -> int:
    """Stable sparsity ||φ||_1^2 / ||φ||_2^2, rounded and clamped to [1, n]."""
    phi = _nonzero(phi)
    return _round_clamp(np.sum(np.abs(phi))**2 / np.sum(phi**2), phi.size)


def improve_sparse(phi, s: Optional[int] = None, kappa: float = DEFAULT_KAPPA) -> ImprovedShift:
    """Returns κ·sign(φ) on the s largest-magnitude entries of φ.

    Parameters
    ----------
    phi : ndarray
        Prior vector
    s : int, optional
        Number of entries kept.  Estimated with :func:`estimate_sparsity` when omitted, by default None
    kappa : float, optional
        Scale in (0, 1), by default DEFAULT_KAPPA

    Returns
    -------
    ImprovedShift
        Improved shift

    Raises
    ------
    ValueError
        Raised if φ is zero, κ is outside (0, 1) or s is outside [0, n]

    """
    _check_kappa(kappa)
    phi = _nonzero(phi)
    estimated = s is None
    s = estimate_sparsity(phi) if estimated else int(s)
    if not 0 <= s <= phi.size:
        raise ValueError(f'Sparsity {s} is outside [0, {phi.size}]!')

    payload = np.zeros_like(phi)
    keep = _top(np.abs(phi), s)
    payload[keep] = kappa * np.sign(phi[keep])
    return ImprovedShift(payload, kappa, s, estimated, Structure.SPARSE)


def estimate_block_count(phi, part: BlockPartition) -> int:
    """Stable block count ||φ||_{2,1}^2 / ||φ||_2^2, rounded and clamped to [1, l]."""
    phi = _nonzero(phi)
    norms = part.block_norms(phi)
    return _round_clamp(np.sum(norms)**2 / np.sum(norms**2), part.l)


def improve_block(phi, part: BlockPartition, l_keep: Optional[int] = None, kappa: float = DEFAULT_KAPPA) -> ImprovedShift:
    """Returns κ times the unit directions of the `l_keep` largest blocks of φ.

    Raises
    ------
    ValueError
        Raised if φ is zero, κ is outside (0, 1) or l_keep is outside [0, l]

    """
    _check_kappa(kappa)
    phi = _nonzero(phi)
    estimated = l_keep is None
    l_keep = estimate_block_count(phi, part) if estimated else int(l_keep)
    if not 0 <= l_keep <= part.l:
        raise ValueError(f'Block count {l_keep} is outside [0, {part.l}]!')

    blocks = part.reshape(phi)
    norms = np.linalg.norm(blocks, axis=1)
    keep = _top(norms, l_keep)
    keep = keep[norms[keep] > 0]

    payload = np.zeros_like(blocks)
    payload[keep] = kappa * blocks[keep] / norms[keep, None]
    return ImprovedShift(payload.reshape(-1), kappa, l_keep, estimated, Structure.BLOCK_SPARSE)


def estimate_rank(Phi) -> int:
    """Stable rank ||Φ||_F^2 / ||Φ||^2, rounded and clamped to [1, min(n1, n2)]."""
    Phi = _nonzero(Phi)
    if Phi.ndim != 2:
        raise ValueError(f'Expected a matrix, got shape {Phi.shape}!')
    s = svd(Phi, compute_uv=False)
    return _round_clamp(np.sum(s**2) / s[0]**2, min(Phi.shape))


def improve_lowrank(Phi, r: Optional[int] = None, kappa: float = DEFAULT_KAPPA) -> ImprovedShift:
    """Returns κ·Û_rV̂_rᵀ from the top r singular vectors of Φ."""
    _check_kappa(kappa)
    Phi = _nonzero(Phi)
    if Phi.ndim != 2:
        raise ValueError(f'Expected a matrix, got shape {Phi.shape}!')
    estimated = r is None
    r = estimate_rank(Phi) if estimated else int(r)
    if not 0 <= r <= min(Phi.shape):
        raise ValueError(f'Rank {r} is outside [0, {min(Phi.shape)}]!')

    U, _, Vt = svd(Phi)
    payload = kappa * U[:, :r] @ Vt[:r]
    return ImprovedShift(payload, kappa, r, estimated, Structure.LOW_RANK)


def improve(structure, phi, level: Optional[int] = None, kappa: float = DEFAULT_KAPPA,
            part: Optional[BlockPartition] = None) -> ImprovedShift:
    """Dispatches to improve_sparse, improve_block or improve_lowrank."""
    structure = Structure(structure)
    if structure is Structure.SPARSE:
        shift = improve_sparse(phi, level, kappa)
    elif structure is Structure.BLOCK_SPARSE:
        if part is None:
            raise ValueError('Improving a block-sparse prior needs a partition!')
        shift = improve_block(phi, part, level, kappa)
    else:
        shift = improve_lowrank(phi, level, kappa)

    logger.debug('Improved %s prior with level %d (estimated=%s), kappa=%g', structure.value, shift.level,
                 shift.estimated, kappa)
    return shift
