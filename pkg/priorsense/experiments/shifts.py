"""The six built-in shift rules of the phase-transition studies.

Sparse signals (I is the support of x*):

a. λφ = 0
b. λφ = sign(x*)/2
c. λφ = -sign(x*)/2
d. λφ = 0 on I and 1 on the complement
e. sign(x*)/2 on I, 1/4 at one random index of the complement, 0 elsewhere
f. -sign(x*)/2 on I and 1 on the complement

Low-rank signals (X* = UΣVᵀ with complements U', V'):

a. λΦ = 0
b. UVᵀ/2
c. -UVᵀ/2
d. U'V'ᵀ/2
e. UVᵀ/2 + U' diag(1/2, 0, ..., 0) V'ᵀ
f. -UVᵀ/2 + U'V'ᵀ/2

"""
#pylint: disable=invalid-name
import numpy as np

from priorsense.geometry import make_subspace_pair
from priorsense.proximal import PriorShift, Structure
from priorsense.utilities import SeedLike, make_rng


def sparse_shift(rule: str, x_star, seed: SeedLike = None) -> PriorShift:
    """Returns the shift of `rule` for the sparse signal `x_star`.

    Rule e draws its off-support index uniformly from `seed`; when the
    complement is empty that entry is skipped.

    """
    x_star = np.asarray(x_star, dtype=float)
    on = x_star != 0
    half_sign = np.sign(x_star) / 2
    payload = np.zeros_like(x_star)

    if rule == 'a':
        pass
    elif rule == 'b':
        payload = half_sign
    elif rule == 'c':
        payload = -half_sign
    elif rule == 'd':
        payload[~on] = 1
    elif rule == 'e':
        payload = half_sign.copy()
        complement = np.flatnonzero(~on)
        if complement.size:
            payload[make_rng(seed).choice(complement)] = 0.25
    elif rule == 'f':
        payload = -half_sign
        payload[~on] = 1
    else:
        raise ValueError(f'Unknown shift rule {rule!r}!')

    return PriorShift(payload, Structure.SPARSE)


def lowrank_shift(rule: str, X_star, rank: int = None) -> PriorShift:
    """Returns the shift of `rule` for the low-rank matrix `X_star`."""
    X_star = np.asarray(X_star, dtype=float)
    if rule == 'a':
        return PriorShift.zero(X_star.shape, Structure.LOW_RANK)

    pair = make_subspace_pair(X_star, rank)
    on_space = pair.UVt / 2
    off_space = pair.U_perp[:, :pair.V_perp.shape[1]] @ pair.V_perp[:, :pair.U_perp.shape[1]].T / 2

    if rule == 'b':
        payload = on_space
    elif rule == 'c':
        payload = -on_space
    elif rule == 'd':
        payload = off_space
    elif rule == 'e':
        payload = on_space.copy()
        if pair.U_perp.shape[1] and pair.V_perp.shape[1]:
            payload += np.outer(pair.U_perp[:, 0], pair.V_perp[:, 0]) / 2
    elif rule == 'f':
        payload = -on_space + off_space
    else:
        raise ValueError(f'Unknown shift rule {rule!r}!')

    return PriorShift(payload, Structure.LOW_RANK)
