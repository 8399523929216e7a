"""
Phase-space linear algebra for N-mode bosonic Gaussian states.

Quadratures are ordered (q1, p1, ..., qN, pN) with hbar = 1, so the vacuum
covariance is I/2. Vectors are columns; an expression written as a row vector
times a matrix, r @ A, corresponds here to A.T @ r.
"""

import math
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from app.constants.error_constant import (
    ERROR_SYM_INVALID_MODE_COUNT,
    ERROR_SYM_NON_FINITE,
    ERROR_SYM_SHAPE_MISMATCH,
    ERROR_SYM_ZETA_OUT_OF_DISK,
)
from app.core.config import settings
from app.core.exception import AppException
from app.schemas.measurement import MeasurementParams

_OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _as_finite(values: Sequence[float] | np.ndarray, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise AppException(
            error_code=ERROR_SYM_SHAPE_MISMATCH,
            message=f"{name} must be a non-empty 1-D sequence",
            details={"shape": list(arr.shape)},
        )
    if not np.all(np.isfinite(arr)):
        raise AppException(
            error_code=ERROR_SYM_NON_FINITE,
            message=f"{name} contains non-finite entries",
        )
    return arr


def n_modes_of(matrix: np.ndarray) -> int:
    dim = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != dim or dim % 2:
        raise AppException(
            error_code=ERROR_SYM_SHAPE_MISMATCH,
            message="Phase-space matrices must be square with even dimension",
            details={"shape": list(matrix.shape)},
        )
    return dim // 2


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with 2x2 blocks ((0, 1), (-1, 0))."""
    if n_modes < 1:
        raise AppException(
            error_code=ERROR_SYM_INVALID_MODE_COUNT,
            message="n_modes must be at least 1",
            details={"n_modes": n_modes},
        )
    return np.kron(np.eye(n_modes), _OMEGA)


def rotation_block(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def phase_rotation(thetas: Sequence[float]) -> np.ndarray:
    """
    Direct sum of per-mode rotations V_theta = ((cos, sin), (-sin, cos)).

    Args:
        thetas: One angle per mode, radians

    Returns:
        2N x 2N orthogonal symplectic matrix
    """
    angles = _as_finite(thetas, "thetas")
    return block_diag(*[rotation_block(t) for t in angles])


def phase_rotation_derivative(thetas: Sequence[float], mode: int) -> np.ndarray:
    """d/d(theta_mode) of phase_rotation(thetas)."""
    angles = _as_finite(thetas, "thetas")
    out = np.zeros((2 * angles.size, 2 * angles.size))
    c, s = math.cos(angles[mode]), math.sin(angles[mode])
    out[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = [[-s, c], [-c, -s]]
    return out


def squeezer_symplectic(rs: Sequence[float]) -> np.ndarray:
    """Per-mode squeezer diag(e^{-r}, e^{r}); positive r squeezes q."""
    squeezings = _as_finite(rs, "rs")
    return np.diag(np.column_stack([np.exp(-squeezings), np.exp(squeezings)]).ravel())


def squeezer_covariance(rs: Sequence[float]) -> np.ndarray:
    """Covariance of a product of squeezed vacua, diag(e^{-2r}/2, e^{2r}/2, ...)."""
    s = squeezer_symplectic(rs)
    return 0.5 * s @ s.T


def vacuum_covariance(n_modes: int) -> np.ndarray:
    if n_modes < 1:
        raise AppException(
            error_code=ERROR_SYM_INVALID_MODE_COUNT,
            message="n_modes must be at least 1",
            details={"n_modes": n_modes},
        )
    return 0.5 * np.eye(2 * n_modes)


def passive_from_unitary(u: np.ndarray) -> np.ndarray:
    """
    Lift an N x N mode unitary (a -> U a) to its 2N x 2N phase-space matrix.

    Each entry x + iy becomes the block ((x, -y), (y, x)).
    """
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    out = np.zeros((2 * n, 2 * n))
    for j in range(n):
        for k in range(n):
            x, y = u[j, k].real, u[j, k].imag
            out[2 * j : 2 * j + 2, 2 * k : 2 * k + 2] = [[x, -y], [y, x]]
    return out


def beamsplitter(zeta_mag: float, zeta_arg: float = 0.0) -> np.ndarray:
    """
    Two-mode beamsplitter exp(zeta a1^dag a2 - conj(zeta) a2^dag a1).

    The generator exponential is taken in closed form: it acts on the mode
    operators as the unitary ((cos|z|, e^{i arg} sin|z|), (-e^{-i arg} sin|z|, cos|z|)).
    """
    if not (math.isfinite(zeta_mag) and math.isfinite(zeta_arg)):
        raise AppException(error_code=ERROR_SYM_NON_FINITE, message="zeta must be finite")
    if zeta_mag < 0.0 or zeta_mag > math.pi / 2 + 1e-12:
        raise AppException(
            error_code=ERROR_SYM_ZETA_OUT_OF_DISK,
            message="|zeta| must lie in [0, pi/2]",
            details={"zeta_mag": zeta_mag},
        )
    c, s = math.cos(zeta_mag), math.sin(zeta_mag)
    phase = complex(math.cos(zeta_arg), math.sin(zeta_arg))
    u = np.array([[c, phase * s], [-phase.conjugate() * s, c]])
    return passive_from_unitary(u)


def two_mode_symplectic(params: MeasurementParams) -> np.ndarray:
    """M = phase_rotation(phi) . beamsplitter(zeta) . squeezer(r): squeeze, mix, rotate."""
    return (
        phase_rotation([params.phi1, params.phi2])
        @ beamsplitter(params.zeta_mag, params.zeta_arg)
        @ squeezer_symplectic([params.r1, params.r2])
    )


def two_mode_pure_covariance(params: MeasurementParams) -> np.ndarray:
    m = two_mode_symplectic(params)
    return 0.5 * m @ m.T


def conjugate(cov: np.ndarray, transform: np.ndarray) -> np.ndarray:
    """T Sigma T^T"""
    return transform @ cov @ transform.T


def covariance_energy(cov: np.ndarray) -> float:
    """Mean photon number of a centered state: (1/2) Tr Sigma - N/2."""
    return float(0.5 * np.trace(cov) - 0.5 * n_modes_of(cov))


def is_symplectic(t: np.ndarray, tol: float | None = None) -> bool:
    tol = settings.SYMPLECTIC_TOL if tol is None else tol
    t = np.asarray(t, dtype=float)
    try:
        delta = symplectic_form(n_modes_of(t))
    except AppException:
        return False
    return bool(np.max(np.abs(t.T @ delta @ t - delta)) < tol)


def is_valid_covariance(cov: np.ndarray) -> bool:
    """Symmetric and Sigma + (i/2) Delta positive semidefinite, tolerances relative to max |Sigma|."""
    cov = np.asarray(cov, dtype=float)
    try:
        delta = symplectic_form(n_modes_of(cov))
    except AppException:
        return False
    if not np.all(np.isfinite(cov)):
        return False
    scale = max(1.0, float(np.max(np.abs(cov))))
    if np.max(np.abs(cov - cov.T)) > settings.SYMMETRY_TOL * scale:
        return False
    hermitian = 0.5 * (cov + cov.T) + 0.5j * delta
    return bool(np.linalg.eigvalsh(hermitian).min() >= -settings.PSD_TOL * scale)


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Williamson spectrum nu_1 <= ... <= nu_N (pure states have all nu = 1/2)."""
    cov = np.asarray(cov, dtype=float)
    delta = symplectic_form(n_modes_of(cov))
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * delta @ cov)))
    return moduli[::2]


def reduced_covariance(cov: np.ndarray, modes: Sequence[int]) -> np.ndarray:
    idx = np.concatenate([[2 * k, 2 * k + 1] for k in modes])
    return np.asarray(cov)[np.ix_(idx, idx)]
