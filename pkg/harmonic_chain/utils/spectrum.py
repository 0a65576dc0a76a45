"""
Coupling matrix and normal modes of the pinned harmonic chain.

The left end is tied to the origin by a spring of the same strength as the
bonds (fixed boundary condition xi_0 = 0); the right end is free (open
boundary condition xi_N = xi_{N+1}). The analytic modes are

    k_j = (j - 1/2) pi / (N + 1/2),   xi_n^(j) = A_N sin(k_j n),   A_N = sqrt(2 / (N + 1/2)).
"""

import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..config import EXACT_PAIR_MAX_N
from ..errors import ParameterError
from ..models import ChainParams, CouplingMatrix, Dispersion, ModeSet

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-12


def normalization(n_atoms: int) -> float:
    """A_N = sqrt(2/(N + 1/2))."""
    return float(np.sqrt(2.0 / (n_atoms + 0.5)))


def wavenumbers(n_atoms: int) -> np.ndarray:
    """Allowed k_j for j = 1..N, strictly increasing in (0, pi)."""
    j = np.arange(1, n_atoms + 1, dtype=float)
    return (j - 0.5) * np.pi / (n_atoms + 0.5)


def mode_set(params: ChainParams) -> ModeSet:
    """
    Analytic normal modes for the given chain.

    Args:
        params: Chain description (N, dispersion, pinning)

    Returns:
        ModeSet: wavenumbers, frequencies omega_j/omega_s and A_N
    """
    k = wavenumbers(params.n_atoms)

    if params.dispersion == Dispersion.LINEARIZED:
        omega = np.sqrt(params.pin_ratio + k ** 2)
    else:
        omega = np.sqrt(params.pin_ratio + 4.0 * np.sin(k / 2.0) ** 2)

    return ModeSet(k_tilde=k, omega_ratio=omega, norm=normalization(params.n_atoms))


def eigenvector_component(params: ChainParams, j: int, n: int) -> float:
    """
    Component n of the normalized eigenvector j.

    Ghost sites n = 0 and n = N + 1 are allowed; they realise the boundary
    conditions xi_0 = 0 and xi_N = xi_{N+1}.

    Raises:
        ParameterError: If j or n is out of range
    """
    n_atoms = params.n_atoms
    if not 1 <= j <= n_atoms:
        raise ParameterError(f"mode index {j} outside 1..{n_atoms}")
    if not 0 <= n <= n_atoms + 1:
        raise ParameterError(f"site index {n} outside 0..{n_atoms + 1}")

    k_j = (j - 0.5) * np.pi / (n_atoms + 0.5)
    return normalization(n_atoms) * float(np.sin(k_j * n))


def eigenvector_matrix(params: ChainParams, sites: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Table xi[row, j-1] = A_N sin(k_j n) for the requested sites (all sites by default).

    Columns are the eigenvectors when all sites are requested.
    """
    n_atoms = params.n_atoms
    if sites is None:
        rows = np.arange(1, n_atoms + 1, dtype=float)
    else:
        rows = np.asarray(sites, dtype=float)
        if rows.size and (rows.min() < 0 or rows.max() > n_atoms + 1):
            raise ParameterError(f"site indices must lie in 0..{n_atoms + 1}")

    return normalization(n_atoms) * np.sin(np.outer(rows, wavenumbers(n_atoms)))


def coupling_matrix(params: ChainParams) -> CouplingMatrix:
    """
    Tridiagonal coupling matrix C (2 on the diagonal, 1 in the last diagonal
    entry, -1 off the diagonal) plus pin_ratio times the identity.
    """
    n_atoms = params.n_atoms
    diagonal = np.full(n_atoms, 2.0)
    diagonal[-1] = 1.0
    diagonal += params.pin_ratio

    entries = np.diag(diagonal)
    if n_atoms > 1:
        off = -np.ones(n_atoms - 1)
        entries += np.diag(off, 1) + np.diag(off, -1)

    return CouplingMatrix(size=n_atoms, entries=entries)


def inverse_column(params: ChainParams, n: int) -> np.ndarray:
    """
    Column n of C^-1 for the unpinned chain, b_n = (1, 2, ..., n-1, n, n, ..., n).

    Raises:
        ParameterError: If the chain is pinned or n is out of range
    """
    if params.pin_ratio > 0.0:
        raise ParameterError("closed-form inverse exists only for pin_ratio = 0")
    if not 1 <= n <= params.n_atoms:
        raise ParameterError(f"site index {n} outside 1..{params.n_atoms}")

    return np.minimum(np.arange(1, params.n_atoms + 1), n).astype(float)


def dense_eigensolve(matrix: Union[CouplingMatrix, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Dense symmetric eigensolver used to validate the analytic spectrum.

    Returns:
        tuple: (eigenvalues ascending, orthonormal eigenvectors as columns)

    Raises:
        ParameterError: If the matrix is not square and symmetric or too large
    """
    entries = matrix.entries if isinstance(matrix, CouplingMatrix) else np.asarray(matrix, dtype=float)

    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {entries.shape}")
    if entries.shape[0] > EXACT_PAIR_MAX_N:
        raise ParameterError(f"dense eigensolve limited to N <= {EXACT_PAIR_MAX_N}")

    scale = max(1.0, float(np.max(np.abs(entries)))) if entries.size else 1.0
    if not np.allclose(entries, entries.T, rtol=0.0, atol=SYMMETRY_TOLERANCE * scale):
        raise ParameterError("matrix is not symmetric")

    values, vectors = linalg.eigh(entries)
    logger.debug("Dense eigensolve of %dx%d matrix", *entries.shape)
    return values, vectors
