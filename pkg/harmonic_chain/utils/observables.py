"""
Experimental observables built from the chain's fluctuations: density profiles,
static structure factors, Bragg peak exponents, zero-phonon (recoilless)
probabilities and the dimensional long-range-order classifier.
"""

import logging
import math
from typing import Optional, Sequence, Union

import numpy as np

from ..config import BLOCK_ELEMENTS, chunk_bounds, parallel_map
from ..errors import ComputeError, ParameterError
from ..models import (
    BraggAnalysis, ChainParams, Curve, FluctuationKind, OrderClass,
    PairMethod, Regime
)
from .fluctuations import ensure_finite, fluctuation_profile, pair_variance_matrix, site_variance

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]

# Below this argument the removable singularities switch to their limit forms
LIMIT_THRESHOLD = 1e-8

# S(q) may dip below zero only by summation noise of this size times N
NEGATIVITY_TOLERANCE = 1e-9

# Gaussian tails beyond this many standard deviations are dropped from density windows
DENSITY_TAIL_SIGMAS = 12.0


def _grid(values: ArrayLike, name: str) -> np.ndarray:
    grid = np.atleast_1d(np.asarray(values, dtype=float))
    if grid.size == 0:
        raise ParameterError(f"empty {name} grid")
    return grid


def _scalar_or_array(result: np.ndarray, like: ArrayLike) -> Union[float, np.ndarray]:
    return float(result[0]) if np.ndim(like) == 0 else result


def _meta(params: ChainParams, regime: Regime, **extra) -> dict:
    meta = {"params": params.model_dump(mode="json"), "regime": regime.model_dump(mode="json")}
    meta.update(extra)
    return meta


# --- density -----------------------------------------------------------------

def density_profile(params: ChainParams, regime: Regime, x_grid: ArrayLike,
                    sites: Optional[Sequence[int]] = None) -> Curve:
    """
    Average density <rho(x)> a as a sum of normalized Gaussians centred on the
    lattice sites, each with the site's variance.

    When sites is omitted only sites within reach of the grid contribute, so a
    window near one end of a very long chain costs O(window * N).

    Raises:
        ParameterError: For an empty grid or a chain without fluctuations
    """
    xs = _grid(x_grid, "x")
    n_atoms = params.n_atoms

    if sites is None:
        widest = site_variance(params, regime, n_atoms)
        if widest <= 0.0:
            raise ParameterError("density profile needs non-zero fluctuations")
        pad = int(math.ceil(DENSITY_TAIL_SIGMAS * math.sqrt(widest))) + 1
        lo = max(1, int(math.floor(xs.min())) - pad)
        hi = min(n_atoms, int(math.ceil(xs.max())) + pad)
        sites = range(lo, hi + 1) if lo <= hi else []

    sites = list(sites)
    ys = np.zeros_like(xs)
    if sites:
        profile = fluctuation_profile(params, regime, sites)
        if np.any(profile.values <= 0.0):
            raise ParameterError("density profile needs non-zero fluctuations")

        centres = profile.sites.astype(float)
        variances = profile.values
        block = max(1, BLOCK_ELEMENTS // centres.size)
        for start, stop in chunk_bounds(xs.size, block):
            offsets = xs[start:stop, None] - centres[None, :]
            gaussians = np.exp(-0.5 * offsets ** 2 / variances) / np.sqrt(2.0 * np.pi * variances)
            ys[start:stop] = np.sum(gaussians, axis=1)

    ensure_finite(ys, "density")
    return Curve(x_label="x_over_a", y_label="density_times_a", xs=xs, ys=ys,
                 meta=_meta(params, regime, sites=[int(sites[0]), int(sites[-1])] if sites else []))


def peak_to_valley_contrast(curve: Curve) -> float:
    """(max - min)/(max + min) of the sampled values."""
    top = float(np.max(curve.ys))
    bottom = float(np.min(curve.ys))
    if top + bottom <= 0.0:
        raise ParameterError("contrast undefined for a vanishing curve")
    return (top - bottom) / (top + bottom)


# --- structure factors ---------------------------------------------------------

def structure_factor_rigid(n_atoms: int, qa: ArrayLike) -> Union[float, np.ndarray]:
    """
    Structure factor of the static lattice, (1/N) [sin(qaN/2)/sin(qa/2)]^2,
    equal to N at the Bragg points qa = 2 pi nu.
    """
    if n_atoms < 1:
        raise ParameterError("N must be >= 1")

    q = np.atleast_1d(np.asarray(qa, dtype=float))
    half = 0.5 * q
    denominator = np.sin(half)
    at_bragg = np.abs(denominator) < LIMIT_THRESHOLD

    result = np.full_like(q, float(n_atoms))
    regular = ~at_bragg
    result[regular] = (np.sin(n_atoms * half[regular]) / denominator[regular]) ** 2 / n_atoms
    return _scalar_or_array(result, qa)


def structure_factor_classical_infinite(eta_cl: float, qa: ArrayLike) -> Union[float, np.ndarray]:
    """
    Strict classical limit of the infinite chain,
    sinh(x)/(cosh(x) - cos(qa)) with x = eta_cl (qa)^2 / 2.

    The denominator is evaluated as 2 sinh^2(x/2) + 2 sin^2(qa/2).

    Raises:
        ParameterError: For qa = 0 (the forward peak is lost) or eta_cl <= 0
    """
    if eta_cl <= 0.0:
        raise ParameterError("classical closed form needs eta_cl > 0")

    q = np.atleast_1d(np.asarray(qa, dtype=float))
    if np.any(q == 0.0):
        raise ParameterError("classical closed form is undefined at qa = 0")

    x = 0.5 * eta_cl * q ** 2
    small = x < LIMIT_THRESHOLD

    numerator = np.where(small, x, np.sinh(x))
    thermal = np.where(small, 0.5 * x ** 2, 2.0 * np.sinh(0.5 * x) ** 2)
    result = numerator / (thermal + 2.0 * np.sin(0.5 * q) ** 2)
    return _scalar_or_array(result, qa)


def structure_factor_classical_finite(n_atoms: int, eta_cl: float, qa: ArrayLike) -> Union[float, np.ndarray]:
    """
    Classical finite chain through the even-part reduction
    S = 1 + 2 sum_{m=1}^{N-1} (1 - m/N) cos(qa m) exp(-eta_cl (qa)^2 m / 2).
    """
    if n_atoms < 1:
        raise ParameterError("N must be >= 1")
    if eta_cl < 0.0:
        raise ParameterError("eta_cl must be non-negative")

    q = np.atleast_1d(np.asarray(qa, dtype=float))
    distances = np.arange(1, n_atoms, dtype=float)
    kernel = np.zeros((q.size, distances.size))
    if distances.size:
        decay = np.exp(-0.5 * eta_cl * np.outer(q ** 2, distances))
        kernel = (1.0 - distances / n_atoms) * np.cos(np.outer(q, distances)) * decay

    result = 1.0 + 2.0 * np.sum(kernel, axis=1)
    return _scalar_or_array(result, qa)


def _diagonal_layout(entries: np.ndarray):
    """Upper-triangle entries grouped by distance m = l - n, with the group offsets."""
    n_atoms = entries.shape[0]
    diagonals = [np.diagonal(entries, m) for m in range(1, n_atoms)]
    flat = np.concatenate(diagonals)
    lengths = np.arange(n_atoms - 1, 0, -1)
    offsets = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    return flat, offsets


def structure_factor(params: ChainParams, regime: Regime, q_grid: ArrayLike,
                     method: PairMethod = PairMethod.EXACT_MODE) -> Curve:
    """
    S_N(q) = (1/N) sum_{n,l} cos(qa(n - l)) exp(-(qa)^2 D_nl / 2).

    The imaginary parts cancel because D is symmetric, so only the upper
    triangle is summed, grouped by distance. ExactMode uses the exact pair
    matrix; BulkApprox uses D_nl = <u_|n-l|^2> through the single-sum reduction.

    Raises:
        CostGuardError: If the exact pair matrix is too large
        ComputeError: If S(q) comes out negative beyond summation tolerance
    """
    qs = _grid(q_grid, "q")
    n_atoms = params.n_atoms
    distances = np.arange(1, n_atoms, dtype=float)

    if n_atoms == 1:
        def evaluate(bounds):
            start, stop = bounds
            return np.ones(stop - start)
    elif method == PairMethod.BULK_APPROX:
        kernel = fluctuation_profile(params, regime, sites=range(1, n_atoms)).values
        taper = 1.0 - distances / n_atoms

        def evaluate(bounds):
            start, stop = bounds
            q = qs[start:stop, None]
            terms = taper * np.cos(q * distances) * np.exp(-0.5 * q ** 2 * kernel)
            return 1.0 + 2.0 * np.sum(terms, axis=1)
    else:
        pairs = pair_variance_matrix(params, regime, PairMethod.EXACT_MODE)
        flat, offsets = _diagonal_layout(pairs.entries)

        def evaluate(bounds):
            start, stop = bounds
            out = np.empty(stop - start)
            for index, q in enumerate(qs[start:stop]):
                sums = np.add.reduceat(np.exp(-0.5 * q * q * flat), offsets)
                out[index] = 1.0 + 2.0 * np.sum(np.cos(q * distances) * sums) / n_atoms
            return out

    block = max(1, BLOCK_ELEMENTS // max(1, n_atoms)) if method == PairMethod.BULK_APPROX else 1
    ys = np.concatenate(parallel_map(evaluate, chunk_bounds(qs.size, block)))
    ensure_finite(ys, "structure factor")

    floor = -NEGATIVITY_TOLERANCE * n_atoms
    if np.any(ys < floor):
        worst = int(np.argmin(ys))
        raise ComputeError(f"negative structure factor {ys[worst]:.3e} at qa={qs[worst]:.6g}")

    logger.debug("S(q) on %d points, N=%d, method=%s", qs.size, n_atoms, method.value)
    return Curve(x_label="qa", y_label="S", xs=qs, ys=ys, meta=_meta(params, regime, method=method.value))


def lorentzian_half_width(eta_cl: float, nu: int) -> float:
    """Half width 2 pi^2 nu^2 eta_cl (in qa) of the classical Bragg peak nu."""
    return 2.0 * np.pi ** 2 * nu ** 2 * eta_cl


def bragg_grid(n_atoms: int, nu: int, max_offset: float = 0.1, points: int = 24, side: int = 1) -> np.ndarray:
    """
    Geometric qa grid on one side of Q_nu, offsets from 4 pi/N to max_offset.
    The finite-size core |q a - Q_nu a| < 4 pi/N is excluded.
    """
    if nu == 0:
        raise ParameterError("nu must be non-zero")
    core = 4.0 * np.pi / n_atoms
    if max_offset <= core:
        raise ParameterError(f"max_offset must exceed the finite-size core {core:.3g}")

    offsets = np.geomspace(core, max_offset, points)
    centre = 2.0 * np.pi * nu
    return centre + offsets if side >= 0 else np.sort(centre - offsets)


# --- Bragg exponents --------------------------------------------------------------

def bragg_analysis(alpha: float, nu: int) -> BraggAnalysis:
    """
    Exponent beta(Q_nu) = 2 pi alpha nu^2 and the resulting power laws.

    Raises:
        ParameterError: If nu = 0 or alpha <= 0
    """
    if nu == 0:
        raise ParameterError("nu must be non-zero")
    if alpha <= 0.0:
        raise ParameterError("alpha must be positive")

    bragg_qa = 2.0 * np.pi * nu
    beta = alpha / (2.0 * np.pi) * bragg_qa ** 2
    direct = 2.0 * np.pi * alpha * nu ** 2
    if not math.isclose(beta, direct, rel_tol=4 * np.finfo(float).eps):
        raise ComputeError(f"inconsistent beta: {beta!r} vs {direct!r}")

    divergent = beta <= 1.0
    return BraggAnalysis(
        nu=nu,
        alpha=alpha,
        beta=beta,
        divergent=divergent,
        n_scaling_exponent=1.0 - beta if divergent else None,
        shape_exponent=beta - 1.0 if divergent else None,
    )


# --- recoilless emission ------------------------------------------------------------

def debye_waller_factor(params: ChainParams, regime: Regime, qa: float, l: int) -> float:
    """exp(-(qa)^2 <u_l^2>/a^2) for any regime."""
    return math.exp(-qa * qa * site_variance(params, regime, l))


def moessbauer_recoilless(params: ChainParams, qa: float, l: int) -> float:
    """
    Ground-state probability that gamma emission from site l excites no phonon.

    Raises:
        ParameterError: If the chain is not at zero temperature or l is out of range
    """
    if params.eta != 0.0:
        raise ParameterError("recoilless probability is defined for the ground state (eta = 0)")
    return debye_waller_factor(params, Regime.quantum_zero_t(), qa, l)


def moessbauer_profile(params: ChainParams, qa: float, sites: Optional[Sequence[int]] = None) -> Curve:
    """Recoilless probability for many emitting sites (all sites by default)."""
    if params.eta != 0.0:
        raise ParameterError("recoilless probability is defined for the ground state (eta = 0)")

    regime = Regime.quantum_zero_t()
    profile = fluctuation_profile(params, regime, sites)
    ys = np.exp(-qa * qa * profile.values)
    ensure_finite(ys, "recoilless probability")
    return Curve(x_label="l", y_label="p0", xs=profile.sites.astype(float), ys=ys,
                 meta=_meta(params, regime, qa=qa))


# --- dimensional classifier -----------------------------------------------------------

def order_classification(d: int, kind: FluctuationKind) -> OrderClass:
    """
    Classify the small-k behaviour of the mean square displacement in d dimensions.

    Thermal fluctuations scale as the integral of k^(d-3), ground state quantum
    fluctuations as k^(d-2). Exponent -2 diverges linearly, -1 logarithmically,
    anything larger converges and long range order survives.

    Raises:
        ParameterError: If d is not 1, 2 or 3
    """
    if d not in (1, 2, 3):
        raise ParameterError(f"dimension must be 1, 2 or 3, got {d}")

    exponent = d - 3 if kind == FluctuationKind.THERMAL_CLASSICAL else d - 2
    if exponent == -2:
        return OrderClass.LINEAR_DIVERGENCE
    if exponent == -1:
        return OrderClass.LOG_DIVERGENCE
    return OrderClass.LONG_RANGE_ORDER
