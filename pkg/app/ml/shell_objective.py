"""
Batched evaluation of the estimand Fisher information over two-mode pure seeds.

Seeds are addressed by shell coordinates x = (t, |zeta|, arg zeta, phi1, phi2)
at fixed energy E: r1 = asinh sqrt(tE), r2 = asinh sqrt((1-t)E). Leading
dimensions of x broadcast, so a whole search grid is scored in one call.
"""

import numpy as np

_DELTA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def split_squeezings(t: np.ndarray, energy: float) -> tuple[np.ndarray, np.ndarray]:
    t = np.clip(t, 0.0, 1.0)
    return np.arcsinh(np.sqrt(t * energy)), np.arcsinh(np.sqrt((1.0 - t) * energy))


def seed_outcome_noise(
    r1: np.ndarray,
    r2: np.ndarray,
    zeta_mag: np.ndarray,
    zeta_arg: np.ndarray,
    phi1: np.ndarray,
    phi2: np.ndarray,
) -> np.ndarray:
    """
    Delta Sigma_S Delta^T for Sigma_S = M M^T / 2, M = R(phi) B(zeta) S(r); shape (..., 4, 4)

    Batched copy of symplectic.two_mode_pure_covariance: the squeezer, mixer
    and rotation blocks below must stay in step with squeezer_symplectic,
    beamsplitter and phase_rotation there.
    """
    r1, r2, zeta_mag, zeta_arg, phi1, phi2 = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (r1, r2, zeta_mag, zeta_arg, phi1, phi2))
    )
    shape = r1.shape + (4, 4)

    squeeze = np.zeros(shape)
    squeeze[..., 0, 0] = np.exp(-r1)
    squeeze[..., 1, 1] = np.exp(r1)
    squeeze[..., 2, 2] = np.exp(-r2)
    squeeze[..., 3, 3] = np.exp(r2)

    c, s = np.cos(zeta_mag), np.sin(zeta_mag)
    ca, sa = np.cos(zeta_arg), np.sin(zeta_arg)
    mix = np.zeros(shape)
    for k in range(4):
        mix[..., k, k] = c
    mix[..., 0, 2] = s * ca
    mix[..., 0, 3] = -s * sa
    mix[..., 1, 2] = s * sa
    mix[..., 1, 3] = s * ca
    mix[..., 2, 0] = -s * ca
    mix[..., 2, 1] = -s * sa
    mix[..., 3, 0] = s * sa
    mix[..., 3, 1] = -s * ca

    rot = np.zeros(shape)
    for j, phi in enumerate((phi1, phi2)):
        cp, sp = np.cos(phi), np.sin(phi)
        rot[..., 2 * j, 2 * j] = cp
        rot[..., 2 * j, 2 * j + 1] = sp
        rot[..., 2 * j + 1, 2 * j] = -sp
        rot[..., 2 * j + 1, 2 * j + 1] = cp

    m = rot @ mix @ squeeze
    cov_s = 0.5 * m @ np.swapaxes(m, -1, -2)
    return _DELTA @ cov_s @ _DELTA.T


def shell_fisher(
    x: np.ndarray, energy: float, probe_cov: np.ndarray, mean_derivative: np.ndarray
) -> np.ndarray:
    """d^T (Sigma_rho + Delta Sigma_S Delta^T)^{-1} d for every shell point in x[..., 5]."""
    x = np.asarray(x, dtype=float)
    r1, r2 = split_squeezings(x[..., 0], energy)
    noise = seed_outcome_noise(r1, r2, x[..., 1], x[..., 2], x[..., 3], x[..., 4])
    cov = probe_cov + noise
    d = np.broadcast_to(mean_derivative, cov.shape[:-1])
    solved = np.linalg.solve(cov, d[..., None])[..., 0]
    return np.einsum("...i,...i->...", d, solved)
