"""Gaussian-width machinery for recovery with a shifted norm objective.

The squared Gaussian width of the descent cone of ||x|| - <x, λφ> at x* is
the measurement-count proxy.  This module computes the parameters (v, u) of
the shifted subdifferential, the two closed-form upper bounds built from
them, the exact squared distance from a Gaussian sample to the scaled
shifted subdifferential and the Monte-Carlo minimum of its mean over the
scale t, which upper-bounds the squared width more tightly than either
closed form.

Three structures are supported: sparse vectors (l1 norm), block-sparse
vectors (l2,1 norm) and low-rank matrices (nuclear norm).

"""
#pylint: disable=invalid-name
import logging
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from priorsense.proximal import BlockPartition, PriorShift, Structure, as_payload, svd
from priorsense.utilities import SeedLike, make_rng, num_to_str

logger = logging.getLogger(__name__)

RANK_TOL = 1e-8
RANK_GAP = 1e3
MEMBERSHIP_TOL = 1e-10
GRID_POINTS = 64
GRID_SPAN = 4.0

BOUND_COLUMNS = ['shift', 'v', 'u', 'bound_I', 'bound_II', 'optimal_mc', 'result']


class ShiftHypothesisError(ValueError):
    """Raised when 0 lies in the shifted subdifferential, so the width bounds do not apply."""


HYPOTHESES = {
    Structure.SPARSE: 'sparse bound hypothesis 0 ∉ ∂||x*||_1 - λφ',
    Structure.BLOCK_SPARSE: 'block-sparse bound hypothesis 0 ∉ ∂||x*||_1,2 - λφ',
    Structure.LOW_RANK: 'low-rank bound hypothesis 0 ∉ ∂||X*||_* - λΦ',
}


# ---------------------------------------------------------------------------
# Sparse vectors
# ---------------------------------------------------------------------------
def _nonzero_signal(x_star) -> np.ndarray:
    x_star = np.asarray(x_star, dtype=float)
    if not np.any(x_star):
        raise ValueError('The true signal must be nonzero!')
    return x_star


def sparse_params(x_star, shift) -> Tuple[float, float]:
    """Returns (v1, u1) for a sparse signal and the shift λφ.

    v1 = Σ_I (sign(x*_i) - λφ_i)^2 + Σ_Ic (1 + |λφ_i|)^2
    u1 = Σ_I (sign(x*_i) - λφ_i)^2 + Σ_Ic (λφ_i)^2

    Raises
    ------
    ValueError
        Raised if `x_star` is zero or the shapes differ

    """
    x_star = _nonzero_signal(x_star)
    p = as_payload(shift, x_star.shape)
    on = x_star != 0

    on_support = np.sum((np.sign(x_star[on]) - p[on])**2)
    v1 = on_support + np.sum((1 + np.abs(p[~on]))**2)
    u1 = on_support + np.sum(p[~on]**2)
    return float(v1), float(u1)


def sparse_bounds(n: int, s: int, v1: float, u1: float) -> Tuple[float, float]:
    """Returns (bound_I, bound_II) on the squared width for an s-sparse signal in R^n.

    bound_I = n·(1 - (n/v1)·(2/π)·(1 - s/n)^2)
    bound_II = s + (n - s)·u1

    """
    if not 0 < s <= n:
        raise ValueError(f'Sparsity must satisfy 0 < s <= n, got s={s}, n={n}!')
    if v1 <= 0:
        raise ValueError(f'v1 must be positive, got {v1}!')

    bound_I = n * (1 - (n / v1) * (2 / np.pi) * (1 - s / n)**2)
    bound_II = s + (n - s) * u1
    return float(bound_I), float(bound_II)


# ---------------------------------------------------------------------------
# Block-sparse vectors
# ---------------------------------------------------------------------------
def chi_mean(k: int) -> float:
    """Mean of the χ distribution with k degrees of freedom, √2·Γ((k+1)/2)/Γ(k/2)."""
    if k < 1:
        raise ValueError(f'Degrees of freedom must be at least 1, got {k}!')
    return float(np.sqrt(2) * np.exp(gammaln((k + 1) / 2) - gammaln(k / 2)))


def _block_directions(x_star, part: BlockPartition) -> Tuple[np.ndarray, np.ndarray]:
    blocks = part.reshape(x_star)
    norms = np.linalg.norm(blocks, axis=1)
    on = norms > 0
    directions = np.zeros_like(blocks)
    directions[on] = blocks[on] / norms[on, None]
    return directions, on


def block_params(x_star, shift, part: BlockPartition) -> Tuple[float, float]:
    """Returns (v2, u2) for a block-sparse signal and the shift λφ.

    v2 = Σ_B ||x*_b/||x*_b|| - (λφ)_b||^2 + Σ_Bc (1 + ||(λφ)_b||)^2
    u2 = Σ_B ||x*_b/||x*_b|| - (λφ)_b||^2 + Σ_Bc ||(λφ)_b||^2

    """
    x_star = _nonzero_signal(x_star)
    p = part.reshape(as_payload(shift, x_star.shape))
    directions, on = _block_directions(x_star, part)

    on_support = np.sum((directions[on] - p[on])**2)
    off_norms = np.linalg.norm(p[~on], axis=1)
    v2 = on_support + np.sum((1 + off_norms)**2)
    u2 = on_support + np.sum(off_norms**2)
    return float(v2), float(u2)


def block_bounds(n: int, k: int, l: int, s: int, v2: float, u2: float) -> Tuple[float, float]:
    """Returns (bound_I, bound_II) for a signal supported on s of l blocks of size k.

    bound_I = n·(1 - (l/v2)·(μ_k^2/k)·(1 - s/l)^2)
    bound_II = k·(s + (l - s)·u2)

    """
    if n != k * l:
        raise ValueError(f'Dimension {n} is not {l} blocks of size {k}!')
    if not 0 < s <= l:
        raise ValueError(f'Block count must satisfy 0 < s <= l, got s={s}, l={l}!')
    if v2 <= 0:
        raise ValueError(f'v2 must be positive, got {v2}!')

    mu = chi_mean(k)
    bound_I = n * (1 - (l / v2) * (mu**2 / k) * (1 - s / l)**2)
    bound_II = k * (s + (l - s) * u2)
    return float(bound_I), float(bound_II)


# ---------------------------------------------------------------------------
# Low-rank matrices
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SubspacePair:
    """Singular subspaces of a rank-r matrix and their complements.

    U (n1 x r) and V (n2 x r) span the column and row spaces; U_perp and
    V_perp complete them to orthonormal bases.

    """
    U: np.ndarray
    V: np.ndarray
    U_perp: np.ndarray
    V_perp: np.ndarray

    @property
    def rank(self) -> int:
        return self.U.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.U.shape[0], self.V.shape[0]

    @property
    def UVt(self) -> np.ndarray:
        return self.U @ self.V.T


def detect_rank(s: np.ndarray, rel_tol: float = RANK_TOL) -> int:
    """Numerical rank from singular values `s` (descending).

    Raises
    ------
    ValueError
        Raised if the matrix is zero or the gap at the threshold is too small
        to call the rank

    """
    if s.size == 0 or s[0] == 0:
        raise ValueError('Cannot detect the rank of a zero matrix!')

    r = int(np.sum(s > rel_tol * s[0]))
    if r < s.size and s[r] > 0 and s[r - 1] / s[r] < RANK_GAP:
        raise ValueError(f'Ambiguous rank: singular values {s[r - 1]:.3e} and {s[r]:.3e} straddle '
                         f'the threshold {rel_tol * s[0]:.3e}; pass the rank explicitly!')
    return r


def make_subspace_pair(X_star, rank: Optional[int] = None, rel_tol: float = RANK_TOL) -> SubspacePair:
    """Builds the subspace pair of `X_star`.

    Parameters
    ----------
    X_star : ndarray
        Low-rank matrix
    rank : int, optional
        Rank to use.  Detected from the singular values when omitted, by default None
    rel_tol : float, optional
        Singular values at most rel_tol·σ_1 count as zero, by default RANK_TOL

    Returns
    -------
    SubspacePair
        Subspaces of X_star

    """
    X_star = np.asarray(X_star, dtype=float)
    if X_star.ndim != 2:
        raise ValueError(f'Expected a matrix, got shape {X_star.shape}!')

    U_full, s, Vt_full = svd(X_star, full_matrices=True)
    if rank is None:
        rank = detect_rank(s, rel_tol)
    elif not 1 <= rank <= min(X_star.shape):
        raise ValueError(f'Rank {rank} is outside [1, {min(X_star.shape)}]!')

    V_full = Vt_full.T
    return SubspacePair(U_full[:, :rank], V_full[:, :rank], U_full[:, rank:], V_full[:, rank:])


def project_S(pair: SubspacePair, M) -> np.ndarray:
    """P_S(M) = UUᵀM + MVVᵀ - UUᵀMVVᵀ (broadcasts over leading axes)."""
    PU = pair.U @ pair.U.T
    PV = pair.V @ pair.V.T
    PUM = PU @ M
    return PUM + M @ PV - PUM @ PV


def project_S_perp(pair: SubspacePair, M) -> np.ndarray:
    """P_S⊥(M) = U'U'ᵀ M V'V'ᵀ (broadcasts over leading axes)."""
    return pair.U_perp @ (pair.U_perp.T @ M @ pair.V_perp) @ pair.V_perp.T


def _perp_singular_values(pair: SubspacePair, M) -> np.ndarray:
    """Singular values of P_S⊥(M), computed from the (n1-r) x (n2-r) core U'ᵀMV'."""
    core = pair.U_perp.T @ M @ pair.V_perp
    if core.size == 0:
        return np.zeros(core.shape[:-2] + (0,))
    return np.linalg.svd(core, compute_uv=False)


def lowrank_params(X_star, shift, rank: Optional[int] = None) -> Tuple[float, float]:
    """Returns (v3, u3) for a low-rank matrix and the shift λΦ.

    u3 = ||UVᵀ - P_S(λΦ)||_F^2 + ||P_S⊥(λΦ)||_F^2
    v3 = ||UVᵀ - P_S(λΦ)||_F^2 + Σ_{i<=d} (σ_i(P_S⊥(λΦ)) + 1)^2, d = min(n1 - r, n2 - r)

    """
    X_star = _nonzero_signal(X_star)
    P = as_payload(shift, X_star.shape)
    pair = make_subspace_pair(X_star, rank)

    on_space = np.sum((pair.UVt - project_S(pair, P))**2)
    perp_sv = _perp_singular_values(pair, P)
    v3 = on_space + np.sum((perp_sv + 1)**2)
    u3 = on_space + np.sum(perp_sv**2)
    return float(v3), float(u3)


def lowrank_bounds(n1: int, n2: int, r: int, v3: float, u3: float) -> Tuple[float, float]:
    """Returns (bound_I, bound_II) for a rank-r n1 x n2 matrix.

    bound_I = n1·n2·(1 - (n2/v3)·(4/27)^2·(1 - r/n1)·(1 - r/n2)^2)
    bound_II = r(n1 + n2 - r) + u3·((√(n1-r) + √(n2-r))^2 + 2)

    The dimensions are ordered so that n2 <= n1; the width is invariant to transposition.

    """
    n1, n2 = max(n1, n2), min(n1, n2)
    if not 1 <= r <= n2:
        raise ValueError(f'Rank must satisfy 1 <= r <= {n2}, got {r}!')
    if v3 <= 0:
        raise ValueError(f'v3 must be positive, got {v3}!')

    bound_I = n1 * n2 * (1 - (n2 / v3) * (4 / 27)**2 * (1 - r / n1) * (1 - r / n2)**2)
    bound_II = r * (n1 + n2 - r) + u3 * ((np.sqrt(n1 - r) + np.sqrt(n2 - r))**2 + 2)
    return float(bound_I), float(bound_II)


# ---------------------------------------------------------------------------
# Distances and the Monte-Carlo optimal bound
# ---------------------------------------------------------------------------
def _sparse_distance(x_star, p) -> Callable[[np.ndarray, float], np.ndarray]:
    on = x_star != 0
    centre = np.sign(x_star) - p

    def dist_sq(g, t):
        lo = t * (-1 - p)
        hi = t * (1 - p)
        off = np.maximum(0, np.maximum(lo - g, g - hi))
        d = np.where(on, g - t * centre, off)
        return np.sum(d**2, axis=-1)

    return dist_sq


def _block_distance(x_star, p, part: BlockPartition) -> Callable[[np.ndarray, float], np.ndarray]:
    directions, on = _block_directions(x_star, part)
    p_blocks = part.reshape(p)
    centre = directions - p_blocks

    def dist_sq(g, t):
        g_blocks = g.reshape(g.shape[:-1] + (part.l, part.k))
        on_part = np.sum((g_blocks[..., on, :] - t * centre[on])**2, axis=(-2, -1))
        off_norms = np.linalg.norm(g_blocks[..., ~on, :] + t * p_blocks[~on], axis=-1)
        off_part = np.sum(np.maximum(0, off_norms - t)**2, axis=-1)
        return on_part + off_part

    return dist_sq


def _lowrank_distance(X_star, P, rank: Optional[int]) -> Callable[[np.ndarray, float], np.ndarray]:
    pair = make_subspace_pair(X_star, rank)
    centre = pair.UVt - project_S(pair, P)
    P_core = pair.U_perp.T @ P @ pair.V_perp

    def dist_sq(G, t):
        on_space = np.sum((project_S(pair, G) - t * centre)**2, axis=(-2, -1))
        core = pair.U_perp.T @ G @ pair.V_perp + t * P_core
        if core.size == 0:
            return on_space
        sv = np.linalg.svd(core, compute_uv=False)
        return on_space + np.sum(np.maximum(0, sv - t)**2, axis=-1)

    return dist_sq


def _distance_function(structure, x_star, shift, part=None, rank=None):
    structure = Structure(structure)
    x_star = np.asarray(x_star, dtype=float)
    p = as_payload(shift, x_star.shape)
    if structure is Structure.SPARSE:
        return _sparse_distance(x_star, p)
    if structure is Structure.BLOCK_SPARSE:
        if part is None:
            raise ValueError('Block-sparse geometry needs a partition!')
        return _block_distance(x_star, p, part)
    return _lowrank_distance(x_star, p, rank)


def dist_sq_scaled_subdiff(structure, x_star, shift, g, t: float, part: Optional[BlockPartition] = None,
                           rank: Optional[int] = None) -> float:
    """Exact squared distance from `g` to t·(∂||x*|| - λφ).

    Parameters
    ----------
    structure : Structure
        sparse, block_sparse or low_rank
    x_star : ndarray
        True signal
    shift : PriorShift or ndarray
        λφ
    g : ndarray
        Point (same shape as `x_star`)
    t : float
        Nonnegative scale
    part : BlockPartition, optional
        Required for block-sparse signals
    rank : int, optional
        Rank override for low-rank signals

    Returns
    -------
    float
        Squared distance

    """
    if t < 0:
        raise ValueError(f'Scale t must be nonnegative, got {t}!')
    g = np.asarray(g, dtype=float)
    if g.shape != np.shape(x_star):
        raise ValueError(f'Sample of shape {g.shape} does not match signal of shape {np.shape(x_star)}!')
    dist_sq = _distance_function(structure, x_star, shift, part, rank)
    return float(dist_sq(g[None], t)[0])


def _signal_level(structure, x_star, part=None, rank=None) -> int:
    structure = Structure(structure)
    if structure is Structure.SPARSE:
        return int(np.count_nonzero(x_star))
    if structure is Structure.BLOCK_SPARSE:
        return int(np.count_nonzero(part.block_norms(x_star)))
    return make_subspace_pair(x_star, rank).rank


def structure_params(structure, x_star, shift, part: Optional[BlockPartition] = None,
                     rank: Optional[int] = None) -> Tuple[float, float]:
    """Dispatches to sparse_params, block_params or lowrank_params."""
    structure = Structure(structure)
    if structure is Structure.SPARSE:
        return sparse_params(x_star, shift)
    if structure is Structure.BLOCK_SPARSE:
        if part is None:
            raise ValueError('Block-sparse geometry needs a partition!')
        return block_params(x_star, shift, part)
    return lowrank_params(x_star, shift, rank)


def structure_bounds(structure, x_star, v: float, u: float, part: Optional[BlockPartition] = None,
                     rank: Optional[int] = None) -> Tuple[float, float]:
    """Dispatches to sparse_bounds, block_bounds or lowrank_bounds using the shape of `x_star`."""
    structure = Structure(structure)
    x_star = _nonzero_signal(x_star)
    level = _signal_level(structure, x_star, part, rank)
    if structure is Structure.SPARSE:
        return sparse_bounds(x_star.size, level, v, u)
    if structure is Structure.BLOCK_SPARSE:
        return block_bounds(part.n, part.k, part.l, level, v, u)
    n1, n2 = x_star.shape
    return lowrank_bounds(n1, n2, level, v, u)


def width_heuristic_t(structure, x_star, shift, part: Optional[BlockPartition] = None,
                      rank: Optional[int] = None) -> float:
    """Closed-form scale used to centre the t search.

    sparse: √(2/π)(n - s)/v1; block: (l - s)μ_k/v2; low rank: (4/27)(n2 - r)√(n1 - r)/v3.
    Falls back to 1 when the formula vanishes (a fully dense signal).

    """
    structure = Structure(structure)
    x_star = _nonzero_signal(x_star)
    v, _ = structure_params(structure, x_star, shift, part, rank)
    level = _signal_level(structure, x_star, part, rank)

    if structure is Structure.SPARSE:
        t = np.sqrt(2 / np.pi) * (x_star.size - level) / v
    elif structure is Structure.BLOCK_SPARSE:
        t = (part.l - level) * chi_mean(part.k) / v
    else:
        n1, n2 = max(x_star.shape), min(x_star.shape)
        t = (4 / 27) * (n2 - level) * np.sqrt(n1 - level) / v

    return float(t) if t > 0 else 1.0


def optimal_width_bound(structure, x_star, shift, n_samples: int = 10000, seed: SeedLike = 0,
                        part: Optional[BlockPartition] = None, rank: Optional[int] = None,
                        t_grid: Optional[Sequence[float]] = None) -> Tuple[float, float]:
    """Monte-Carlo estimate of min over t >= 0 of E[dist^2(g, t·(∂||x*|| - λφ))].

    The same standard-normal samples are used for every t.  By default t is
    searched on a grid of GRID_POINTS points over [0, GRID_SPAN·t_h], where
    t_h is :func:`width_heuristic_t`, and the best grid point is refined by a
    golden-section search bracketed by its neighbours.

    Parameters
    ----------
    structure : Structure
        sparse, block_sparse or low_rank
    x_star : ndarray
        True signal
    shift : PriorShift or ndarray
        λφ
    n_samples : int, optional
        Number of Gaussian samples, at least 100, by default 10000
    seed : int, SeedSequence or Generator, optional
        Sample stream, by default 0
    part : BlockPartition, optional
        Required for block-sparse signals
    rank : int, optional
        Rank override for low-rank signals
    t_grid : sequence of float, optional
        Explicit t values.  When given, only these are evaluated and no
        refinement is done, by default None

    Returns
    -------
    float
        Minimized sample mean
    float
        Standard error of the mean at the minimizing t

    """
    if n_samples < 100:
        raise ValueError(f'At least 100 samples are needed, got {n_samples}!')

    x_star = _nonzero_signal(x_star)
    dist_sq = _distance_function(structure, x_star, shift, part, rank)
    samples = make_rng(seed).standard_normal((n_samples,) + x_star.shape)

    def mean_dist(t):
        return float(np.mean(dist_sq(samples, t)))

    if t_grid is not None:
        grid = np.asarray(t_grid, dtype=float)
        if grid.size == 0 or np.any(grid < 0):
            raise ValueError('The t grid must hold nonnegative values!')
    else:
        t_h = width_heuristic_t(structure, x_star, shift, part, rank)
        grid = np.linspace(0, GRID_SPAN * t_h, GRID_POINTS)

    means = np.array([mean_dist(t) for t in grid])
    best = int(np.argmin(means))
    t_best, value = grid[best], means[best]

    if t_grid is None and 0 < best < grid.size - 1:
        bracket = (grid[best - 1], t_best, grid[best + 1])
        try:
            refined = minimize_scalar(mean_dist, bracket=bracket, method='golden')
        except (ValueError, RuntimeError):
            # Flat neighbourhood, the grid point stands
            logger.debug('No strict bracket around t=%.6g, keeping the grid minimum', t_best)
        else:
            if refined.fun < value:
                t_best, value = float(refined.x), float(refined.fun)

    values = dist_sq(samples, t_best)
    std_error = float(np.std(values, ddof=1) / np.sqrt(n_samples))
    logger.debug('Optimal width bound %.6g ± %.2g at t=%.6g', value, std_error, t_best)
    return float(value), std_error


# ---------------------------------------------------------------------------
# Hypothesis check and reports
# ---------------------------------------------------------------------------
def shifted_subdifferential_contains_zero(structure, x_star, shift, part: Optional[BlockPartition] = None,
                                          rank: Optional[int] = None, atol: float = MEMBERSHIP_TOL) -> bool:
    """Returns whether 0 ∈ ∂||x*|| - λφ, decided in closed form.

    sparse: λφ_i = sign(x*_i) on the support and |λφ_i| <= 1 off it.
    block: (λφ)_b = x*_b/||x*_b|| on active blocks and ||(λφ)_b|| <= 1 elsewhere.
    low rank: P_S(λΦ) = UVᵀ and ||P_S⊥(λΦ)|| <= 1.

    """
    structure = Structure(structure)
    x_star = _nonzero_signal(x_star)
    p = as_payload(shift, x_star.shape)

    if structure is Structure.SPARSE:
        on = x_star != 0
        return bool(np.all(np.abs(p[on] - np.sign(x_star[on])) <= atol) and np.all(np.abs(p[~on]) <= 1 + atol))

    if structure is Structure.BLOCK_SPARSE:
        if part is None:
            raise ValueError('Block-sparse geometry needs a partition!')
        directions, on = _block_directions(x_star, part)
        p_blocks = part.reshape(p)
        return bool(np.all(np.abs(p_blocks[on] - directions[on]) <= atol)
                    and np.all(np.linalg.norm(p_blocks[~on], axis=1) <= 1 + atol))

    pair = make_subspace_pair(x_star, rank)
    perp_sv = _perp_singular_values(pair, p)
    spectral = perp_sv[0] if perp_sv.size else 0.0
    return bool(np.all(np.abs(project_S(pair, p) - pair.UVt) <= atol) and spectral <= 1 + atol)


@dataclass(frozen=True)
class BoundReport:
    """Width parameters and bounds for one (signal, shift) pair."""
    structure: Structure
    v: float
    u: float
    bound_I: float
    bound_II: float
    optimal_mc: Optional[float] = None
    optimal_mc_std_error: Optional[float] = None
    label: str = ''

    @property
    def width_sq_estimate(self) -> float:
        candidates = [self.bound_I, self.bound_II]
        if self.optimal_mc is not None:
            candidates.append(self.optimal_mc)
        return float(min(candidates))

    @property
    def measurement_proxy(self) -> float:
        """The squared-width estimate; absolute constants of the measurement bound are not modelled."""
        return self.width_sq_estimate

    def to_dict(self) -> dict:
        data = asdict(self)
        data['structure'] = Structure(self.structure).value
        data['width_sq_estimate'] = self.width_sq_estimate
        data['measurement_proxy'] = self.measurement_proxy
        return data

    def to_row(self, places: int = 4) -> list:
        """Returns the report as a list ordered like BOUND_COLUMNS."""
        def fmt(value):
            return num_to_str(value, places, allow_less=True) if value is not None else ''

        return [self.label, fmt(self.v), fmt(self.u), fmt(self.bound_I), fmt(self.bound_II),
                fmt(self.optimal_mc), fmt(self.width_sq_estimate)]


def bound_report(structure, x_star, shift, part: Optional[BlockPartition] = None, rank: Optional[int] = None,
                 mc_samples: int = 0, seed: SeedLike = 0, label: str = '') -> BoundReport:
    """Assembles v, u, both bounds and, if `mc_samples` > 0, the Monte-Carlo optimal bound.

    Raises
    ------
    ShiftHypothesisError
        Raised if 0 lies in the shifted subdifferential

    """
    structure = Structure(structure)
    x_star = _nonzero_signal(x_star)
    if shifted_subdifferential_contains_zero(structure, x_star, shift, part, rank):
        raise ShiftHypothesisError(f'Shift {label or "(unlabelled)"} violates the {HYPOTHESES[structure]}; '
                                   'the width bounds do not apply!')

    v, u = structure_params(structure, x_star, shift, part, rank)
    bound_I, bound_II = structure_bounds(structure, x_star, v, u, part, rank)

    optimal = std_error = None
    if mc_samples:
        optimal, std_error = optimal_width_bound(structure, x_star, shift, mc_samples, seed, part, rank)

    return BoundReport(structure, v, u, bound_I, bound_II, optimal, std_error, label)


def classical_bound(structure, x_star, part: Optional[BlockPartition] = None, rank: Optional[int] = None) -> float:
    """Bound I without prior information (λφ = 0), e.g. n(1 - (2/π)(1 - s/n)^2) for sparse signals."""
    x_star = _nonzero_signal(x_star)
    zero = PriorShift.zero(x_star.shape, Structure(structure))
    v, u = structure_params(structure, x_star, zero, part, rank)
    return structure_bounds(structure, x_star, v, u, part, rank)[0]
