"""
Mean square displacements of the harmonic chain.

Every variance is a mode sum
    <u_n^2>/a^2 = sum_j w_j (xi_n^(j))^2
with the regime-dependent weight
    quantum / finite T:  w_j = (alpha/2) (1 + 2 n_B(omega_j)) / omega_j
    classical:           w_j = eta_cl / omega_j^2
(frequencies in units of omega_s).
"""

import logging
import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import toeplitz

from ..config import BLOCK_ELEMENTS, EXACT_PAIR_MAX_N, chunk_bounds, parallel_map
from ..errors import ComputeError, CostGuardError, FitError, ParameterError
from ..models import (
    ChainParams, Curve, FluctuationProfile, ModeSet, MonteCarloEstimate,
    PairMethod, PairVarianceMatrix, Regime, RegimeKind
)
from .spectrum import eigenvector_matrix, mode_set

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


def ensure_finite(values: np.ndarray, what: str) -> np.ndarray:
    """Raise ComputeError if any entry is NaN or infinite."""
    bad = ~np.isfinite(values)
    if np.any(bad):
        raise ComputeError(f"non-finite {what} ({int(np.count_nonzero(bad))} of {values.size} entries)")
    return values


def bose_occupation(omega_ratio: ArrayLike, eta: float) -> Union[float, np.ndarray]:
    """
    Bose function n_B = 1/(exp(omega/eta) - 1), exactly 0 at eta = 0.

    Uses expm1 so that omega/eta << 1 keeps full relative precision.

    Raises:
        ParameterError: If any frequency is not positive or eta is negative
    """
    omega = np.asarray(omega_ratio, dtype=float)
    if np.any(omega <= 0.0):
        raise ParameterError("mode frequencies must be positive")
    if eta < 0.0:
        raise ParameterError(f"temperature must be non-negative, got {eta}")

    if eta == 0.0:
        occupation = np.zeros_like(omega)
    else:
        with np.errstate(over="ignore"):
            occupation = 1.0 / np.expm1(omega / eta)

    return float(occupation) if occupation.ndim == 0 else occupation


def thermal_factor(omega_ratio: ArrayLike, eta: float) -> Union[float, np.ndarray]:
    """1 + 2 n_B = coth(omega/(2 eta))."""
    occupation = bose_occupation(omega_ratio, eta)
    return 1.0 + 2.0 * occupation


def oscillator_variance(eta: float) -> float:
    """
    Thermal position variance of a single oscillator in units of its
    ground state value sigma_qm^2 = hbar/(2 m omega_0).
    """
    return float(thermal_factor(1.0, eta))


def oscillator_density(x_grid: ArrayLike, eta: float) -> Curve:
    """
    Position density of a single oscillator at temperature eta, x in units of sigma_qm.
    The density is Gaussian at every temperature.
    """
    xs = np.asarray(x_grid, dtype=float)
    if xs.size == 0:
        raise ParameterError("empty grid")

    variance = oscillator_variance(eta)
    ys = np.exp(-0.5 * xs ** 2 / variance) / np.sqrt(2.0 * np.pi * variance)
    ensure_finite(ys, "oscillator density")
    return Curve(x_label="x_over_sigma_qm", y_label="density", xs=xs, ys=ys,
                 meta={"eta": eta, "variance": variance})


def oscillator_characteristic(k_sigma: ArrayLike, eta: float) -> Union[float, np.ndarray]:
    """<exp(-i k x)> = exp(-k^2 <x^2>/2) with k in units of 1/sigma_qm."""
    k = np.asarray(k_sigma, dtype=float)
    result = np.exp(-0.5 * k ** 2 * oscillator_variance(eta))
    return float(result) if result.ndim == 0 else result


def mode_weights(params: ChainParams, regime: Regime) -> Tuple[ModeSet, np.ndarray]:
    """Modes and the per-mode weights w_j of the variance sums."""
    modes = mode_set(params)
    omega = modes.omega_ratio

    if regime.kind == RegimeKind.CLASSICAL:
        weights = regime.eta_cl / omega ** 2
    elif params.alpha == 0.0:
        weights = np.zeros_like(omega)
    else:
        weights = 0.5 * params.alpha * thermal_factor(omega, regime.effective_eta) / omega

    return modes, weights


def _check_site(params: ChainParams, n: int) -> None:
    if not 1 <= n <= params.n_atoms:
        raise ParameterError(f"site index {n} outside 1..{params.n_atoms}")


def _resolve_sites(params: ChainParams, sites: Optional[Sequence[int]]) -> np.ndarray:
    if sites is None:
        return np.arange(1, params.n_atoms + 1)

    resolved = np.unique(np.asarray(sites, dtype=int))
    if resolved.size == 0:
        raise ParameterError("no sites requested")
    if resolved[0] < 1 or resolved[-1] > params.n_atoms:
        raise ParameterError(f"site indices must lie in 1..{params.n_atoms}")
    return resolved


def site_variance(params: ChainParams, regime: Regime, n: int) -> float:
    """
    <u_n^2>/a^2 for a single site, summed with exact rounding in fixed mode order.

    Raises:
        ParameterError: If n is outside 1..N
    """
    _check_site(params, n)
    modes, weights = mode_weights(params, regime)
    xi_squared = (modes.norm * np.sin(modes.k_tilde * n)) ** 2
    return math.fsum(weights * xi_squared)


def fluctuation_profile(params: ChainParams, regime: Regime,
                        sites: Optional[Sequence[int]] = None) -> FluctuationProfile:
    """
    Variances for many sites at once (all sites by default).

    Rows are processed in blocks so the temporary site x mode table stays
    bounded; blocks are independent and may run on worker threads.
    """
    rows = _resolve_sites(params, sites)
    _, weights = mode_weights(params, regime)

    block = max(1, BLOCK_ELEMENTS // params.n_atoms)

    def evaluate(bounds):
        start, stop = bounds
        table = eigenvector_matrix(params, rows[start:stop])
        return np.sum(table * table * weights, axis=1)

    parts = parallel_map(evaluate, chunk_bounds(rows.size, block))
    values = ensure_finite(np.concatenate(parts), "variance")

    logger.debug("Profile for %d sites (N=%d, regime=%s)", rows.size, params.n_atoms, regime.kind.value)
    return FluctuationProfile(params=params, regime=regime, sites=rows, values=values)


def pair_variance_matrix(params: ChainParams, regime: Regime,
                         method: PairMethod = PairMethod.EXACT_MODE) -> PairVarianceMatrix:
    """
    D_nl = <(u_n - u_l)^2>/a^2.

    ExactMode uses the weighted eigenvector table M_nj = sqrt(w_j) xi_n^(j):
    D_nl = |M_n - M_l|^2 = |M_n|^2 + |M_l|^2 - 2 M_n . M_l.
    BulkApprox sets D_nl = <u_|n-l|^2>/a^2.

    Raises:
        CostGuardError: If ExactMode is requested above the size guard
    """
    n_atoms = params.n_atoms

    if method == PairMethod.BULK_APPROX:
        kernel = np.zeros(n_atoms)
        if n_atoms > 1:
            profile = fluctuation_profile(params, regime, sites=range(1, n_atoms))
            kernel[1:] = profile.values
        return PairVarianceMatrix(size=n_atoms, method=method, entries=toeplitz(kernel))

    if n_atoms > EXACT_PAIR_MAX_N:
        raise CostGuardError(f"exact pair matrix limited to N <= {EXACT_PAIR_MAX_N}, got {n_atoms}")

    _, weights = mode_weights(params, regime)
    table = eigenvector_matrix(params) * np.sqrt(weights)
    squared_norms = np.sum(table * table, axis=1)

    entries = table @ table.T
    entries *= -2.0
    entries += squared_norms[:, None]
    entries += squared_norms[None, :]
    ensure_finite(entries, "pair variance")
    np.maximum(entries, 0.0, out=entries)

    upper = np.triu(entries, 1)
    entries = upper + upper.T

    logger.debug("Exact pair matrix for N=%d (regime=%s)", n_atoms, regime.kind.value)
    return PairVarianceMatrix(size=n_atoms, method=method, entries=entries)


def pair_variance_window(params: ChainParams, regime: Regime, sites: Sequence[int],
                         method: PairMethod = PairMethod.EXACT_MODE) -> np.ndarray:
    """
    D_nl for n, l in a contiguous site window, as a len(sites) x len(sites) array.

    BulkApprox only evaluates the distances the window spans, so long chains
    never materialise the full N x N matrix.

    Raises:
        ParameterError: If the sites are not a contiguous ascending range inside the chain
        CostGuardError: If ExactMode is requested above the size guard
    """
    window = _resolve_sites(params, sites)
    if window.size > 1 and np.any(np.diff(window) != 1):
        raise ParameterError("pair window must be a contiguous range of sites")

    if method == PairMethod.EXACT_MODE:
        entries = pair_variance_matrix(params, regime, method).entries
        return entries[np.ix_(window - 1, window - 1)]

    kernel = np.zeros(window.size)
    if window.size > 1:
        kernel[1:] = fluctuation_profile(params, regime, sites=range(1, window.size)).values
    return toeplitz(kernel)


def asymptotic_linear_law(eta_cl: float, n: ArrayLike) -> Union[float, np.ndarray]:
    """Infinite-chain classical law eta_cl (n - 1/pi^2) for the linearized dispersion."""
    sites = np.asarray(n, dtype=float)
    if np.any(sites < 1):
        raise ParameterError("site index must be >= 1")
    result = eta_cl * (sites - 1.0 / np.pi ** 2)
    return float(result) if result.ndim == 0 else result


def asymptotic_log_law(alpha: float, n: ArrayLike, c0: float) -> Union[float, np.ndarray]:
    """Infinite-chain ground state law alpha (c0 + log(n)/(2 pi)); c0 comes from a fit."""
    sites = np.asarray(n, dtype=float)
    if np.any(sites < 1):
        raise ParameterError("site index must be >= 1")
    result = alpha * (c0 + np.log(sites) / (2.0 * np.pi))
    return float(result) if result.ndim == 0 else result


def fit_log_law_offset(profile: FluctuationProfile, alpha: float, lo: int = 10,
                       hi: Optional[int] = None) -> float:
    """
    Constant c0 of the logarithmic law, fitted with the slope held at 1/(2 pi).

    The default window is 10 <= n <= N/3.
    """
    if alpha <= 0.0:
        raise FitError("log law needs alpha > 0")
    if hi is None:
        hi = profile.params.n_atoms // 3

    mask = (profile.sites >= lo) & (profile.sites <= hi)
    if np.count_nonzero(mask) < 4:
        raise FitError(f"need at least 4 sites in [{lo}, {hi}]")

    sites = profile.sites[mask].astype(float)
    residual = profile.values[mask] / alpha - np.log(sites) / (2.0 * np.pi)
    return float(np.mean(residual))


def classical_monte_carlo(params: ChainParams, eta_cl: float, n_samples: int,
                          seed: Optional[int] = None, batch_size: int = 100_000) -> MonteCarloEstimate:
    """
    Sample the classical Gibbs distribution of the chain.

    Normal-mode amplitudes are independent Gaussians with variance
    eta_cl / omega_j^2; displacements follow from the eigenvector table.
    """
    if n_samples < 2:
        raise ParameterError("need at least two samples")
    if eta_cl < 0.0:
        raise ParameterError("temperature must be non-negative")

    modes = mode_set(params)
    scale = np.sqrt(eta_cl) / modes.omega_ratio
    table = eigenvector_matrix(params)
    rng = np.random.default_rng(seed)

    first = np.zeros(params.n_atoms)
    second = np.zeros(params.n_atoms)
    for start, stop in chunk_bounds(n_samples, batch_size):
        amplitudes = rng.standard_normal((stop - start, params.n_atoms)) * scale
        squared = (amplitudes @ table.T) ** 2
        first += squared.sum(axis=0)
        second += (squared ** 2).sum(axis=0)

    mean = first / n_samples
    sample_variance = (second - n_samples * mean ** 2) / (n_samples - 1)
    standard_error = np.sqrt(np.maximum(sample_variance, 0.0) / n_samples)

    return MonteCarloEstimate(n_samples=n_samples, mean=mean, standard_error=standard_error)
