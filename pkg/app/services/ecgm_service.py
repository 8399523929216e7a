import math
from typing import Sequence

import numpy as np
from scipy import linalg
from scipy.stats import multivariate_normal

from app.constants.error_constant import (
    ERROR_ECGM_DIMENSION_MISMATCH,
    ERROR_ECGM_INVALID_COUNT,
    ERROR_ECGM_NEGATIVE_ENERGY,
    ERROR_ECGM_SINGULAR_COVARIANCE,
)
from app.core.config import settings
from app.core.exception import AppException
from app.core.logging_config import get_logger
from app.dtos.gaussian_dto import ECGM, GaussianState
from app.ml import symplectic
from app.schemas.measurement import MeasurementParams

logger = get_logger(__name__)

RandomSeed = int | np.random.SeedSequence | np.random.Generator


class EcgmService:
    """
    Service for energy-constrained Gaussian measurements

    Outcomes are reported in the displacement frame: the outcome y of the
    measurement seeded by S on the state rho has density
    N(y; m_rho, Sigma_rho + Delta Sigma_S Delta^T). For heterodyne detection
    of a displaced thermal mode this is the Husimi density centered at the
    probe mean with covariance (N0 + 1) I.
    """

    def __init__(self, homodyne_energy: float = settings.HOMODYNE_ENERGY):
        self.homodyne_energy = homodyne_energy

    def energy(self, m: ECGM) -> float:
        return m.energy

    def heterodyne(self, n_modes: int) -> ECGM:
        return ECGM(n_modes=n_modes, cov_s=symplectic.vacuum_covariance(n_modes), label="heterodyne")

    def squeezed_product(
        self, energies: Sequence[float], quadrature_angles: Sequence[float]
    ) -> ECGM:
        """
        Product of single-mode squeezed vacua

        Args:
            energies: Photon number sinh^2 r_j invested in each mode
            quadrature_angles: Per-mode angle a_j of the quadrature
                cos(a_j) q + sin(a_j) p whose outcome noise is squeezed

        Returns:
            Separable ECGM with total energy sum(energies)
        """
        if len(energies) != len(quadrature_angles):
            raise AppException(
                error_code=ERROR_ECGM_DIMENSION_MISMATCH,
                message="energies and quadrature_angles differ in length",
            )
        if any(e < 0 for e in energies):
            raise AppException(
                error_code=ERROR_ECGM_NEGATIVE_ENERGY,
                message="Per-mode energies must be non-negative",
                details={"energies": list(energies)},
            )

        n_modes = len(energies)
        rs = [math.asinh(math.sqrt(e)) for e in energies]
        frame_rotation = symplectic.phase_rotation(quadrature_angles).T
        outcome_noise = symplectic.conjugate(symplectic.squeezer_covariance(rs), frame_rotation)
        delta = symplectic.symplectic_form(n_modes)
        return ECGM(n_modes=n_modes, cov_s=delta.T @ outcome_noise @ delta, label="separable")

    def homodyne_limit(
        self,
        n_modes: int,
        quadrature_angles: Sequence[float] | None = None,
        e_large: float | None = None,
    ) -> ECGM:
        """Finite-energy stand-in for homodyne detection; energy is split evenly over the modes."""
        e_large = self.homodyne_energy if e_large is None else e_large
        if e_large < 0:
            raise AppException(
                error_code=ERROR_ECGM_NEGATIVE_ENERGY,
                message="Homodyne energy must be non-negative",
                details={"e_large": e_large},
            )
        angles = quadrature_angles if quadrature_angles is not None else [math.pi / 2] * n_modes
        m = self.squeezed_product([e_large / n_modes] * n_modes, angles)
        return ECGM(n_modes=n_modes, cov_s=m.cov_s, label="homodyne")

    def separable_seed(self, energies: Sequence[float], thetas: Sequence[float]) -> ECGM:
        """Squeeze each mode along its theta-rotated mean-derivative direction."""
        return self.squeezed_product(energies, [t + math.pi / 2 for t in thetas])

    def from_params(self, params: MeasurementParams) -> ECGM:
        return ECGM.from_params(params)

    def optimal_seed_params(self, energy: float) -> MeasurementParams:
        """All energy squeezes mode 1, balanced beamsplitter, zero phases."""
        return MeasurementParams(r1=math.asinh(math.sqrt(energy)), r2=0.0, zeta_mag=math.pi / 4)

    def optimal_ecgm(self, energy: float, thetas: Sequence[float] | None = None) -> ECGM:
        m = ECGM.from_params(self.optimal_seed_params(energy), label="optimal")
        return m.rotated(thetas) if thetas is not None else m

    def outcome_covariance(self, state: GaussianState, m: ECGM) -> np.ndarray:
        if state.n_modes != m.n_modes:
            raise AppException(
                error_code=ERROR_ECGM_DIMENSION_MISMATCH,
                message="State and measurement mode counts differ",
                details={"state": state.n_modes, "measurement": m.n_modes},
            )
        cov = state.cov + m.outcome_noise
        self._check_invertible(cov)
        return cov

    def outcome_density(self, state: GaussianState, m: ECGM, z: Sequence[float] | np.ndarray) -> np.ndarray | float:
        cov = self.outcome_covariance(state, m)
        return multivariate_normal(mean=state.mean, cov=cov).pdf(np.asarray(z, dtype=float))

    def log_outcome_density(self, state: GaussianState, m: ECGM, z: np.ndarray) -> np.ndarray | float:
        cov = self.outcome_covariance(state, m)
        return multivariate_normal(mean=state.mean, cov=cov).logpdf(np.asarray(z, dtype=float))

    def sample_outcomes(
        self, state: GaussianState, m: ECGM, count: int, seed: RandomSeed
    ) -> np.ndarray:
        """
        Draw i.i.d. outcomes

        Args:
            state: Probe state after the phase channel
            m: Measurement
            count: Number of outcomes
            seed: Integer seed, SeedSequence or Generator (PCG64 stream)

        Returns:
            Array of shape (count, 2N)
        """
        if count < 1:
            raise AppException(
                error_code=ERROR_ECGM_INVALID_COUNT,
                message="count must be at least 1",
                details={"count": count},
            )
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        root = self._principal_sqrt(self.outcome_covariance(state, m))
        normals = rng.standard_normal((count, state.mean.size))
        return state.mean + normals @ root

    @staticmethod
    def _principal_sqrt(cov: np.ndarray) -> np.ndarray:
        w, v = linalg.eigh(cov)
        return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T

    @staticmethod
    def _check_invertible(cov: np.ndarray) -> None:
        if np.linalg.cond(cov) > 1e15:
            raise AppException(
                error_code=ERROR_ECGM_SINGULAR_COVARIANCE,
                message="Outcome covariance is singular",
                details={"condition": float(np.linalg.cond(cov))},
            )
