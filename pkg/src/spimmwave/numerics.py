"""Dense complex-matrix kernel and reproducible random sampling.

Every determinant taken in this package is of a Hermitian positive-definite
covariance, so factorization goes through Cholesky: it is numerically stable
and rejects non-PD input for free. Randomness is built on counter-based
Philox streams keyed by (seed, stream); identical pairs reproduce identical
sequences under any parallel schedule, distinct stream ids are independent.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NotPositiveDefiniteError, ParameterError

MAX_DET_DIM = 64

_UINT64_MASK = (1 << 64) - 1


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for the (seed, stream) pair of the splittable RNG contract."""
    key = np.array([seed & _UINT64_MASK, stream & _UINT64_MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_complex_gaussian(rng: np.random.Generator, dim: int, variance: float) -> np.ndarray:
    """Draw a CN(0, variance * I_dim) vector; variance is per complex entry."""
    if variance < 0:
        raise ParameterError(f"variance must be >= 0, got {variance}")
    if dim < 0:
        raise ParameterError(f"dim must be >= 0, got {dim}")
    if variance == 0:
        return np.zeros(dim, dtype=np.complex128)
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def _checked_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DET_DIM:
        raise DimensionError(f"dimension {m.shape[0]} exceeds supported maximum {MAX_DET_DIM}")
    return m


def hermitian_cholesky(m: np.ndarray) -> np.ndarray:
    """Lower-triangular L with m = L L^H; raises if m is not Hermitian PD."""
    m = _checked_square(m)
    # tolerance scales with entry magnitude; covariances formed as G G^H are
    # exactly Hermitian in IEEE arithmetic, so this only catches misuse
    tol = 1e-12 * max(1.0, float(np.abs(m).max(initial=0.0)))
    if not np.allclose(m, m.conj().T, rtol=0.0, atol=tol):
        raise ParameterError("matrix is not Hermitian")
    try:
        return np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("matrix is not positive definite") from exc


def hermitian_det(m: np.ndarray) -> float:
    """Determinant of a Hermitian positive-definite matrix (strictly positive)."""
    diag = np.real(np.diagonal(hermitian_cholesky(m)))
    return float(np.prod(diag) ** 2)


def hermitian_logdet(m: np.ndarray) -> float:
    """Natural log of hermitian_det(m); preferred inside entropy sums."""
    diag = np.real(np.diagonal(hermitian_cholesky(m)))
    return float(2.0 * np.sum(np.log(diag)))
