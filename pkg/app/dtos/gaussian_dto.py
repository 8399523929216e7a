from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from app.constants.error_constant import (
    ERROR_ECGM_DIMENSION_MISMATCH,
    ERROR_ECGM_NEGATIVE_ENERGY,
    ERROR_SYM_INVALID_COVARIANCE,
)
from app.core.config import settings
from app.core.exception import AppException
from app.ml import symplectic
from app.schemas.measurement import MeasurementParams


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of an N-mode Gaussian state"""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (mean.size, mean.size):
            raise AppException(
                error_code=ERROR_ECGM_DIMENSION_MISMATCH,
                message="Mean and covariance dimensions disagree",
                details={"mean": mean.size, "cov": list(cov.shape)},
            )
        if not symplectic.is_valid_covariance(cov):
            raise AppException(
                error_code=ERROR_SYM_INVALID_COVARIANCE,
                message="Covariance violates the uncertainty principle",
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def transformed(self, t: np.ndarray) -> "GaussianState":
        """Image under x -> T x."""
        return GaussianState(mean=t @ self.mean, cov=symplectic.conjugate(self.cov, t))


@dataclass(frozen=True)
class ECGM:
    """Energy-constrained Gaussian measurement defined by a centered seed state"""

    n_modes: int
    cov_s: np.ndarray
    label: str = field(default="custom", compare=False)

    def __post_init__(self):
        cov = np.asarray(self.cov_s, dtype=float)
        if cov.shape != (2 * self.n_modes, 2 * self.n_modes):
            raise AppException(
                error_code=ERROR_ECGM_DIMENSION_MISMATCH,
                message="Seed covariance does not match the mode count",
                details={"n_modes": self.n_modes, "cov": list(cov.shape)},
            )
        if not symplectic.is_valid_covariance(cov):
            raise AppException(
                error_code=ERROR_SYM_INVALID_COVARIANCE,
                message="Seed covariance violates the uncertainty principle",
            )
        if symplectic.covariance_energy(cov) < -settings.PSD_TOL:
            raise AppException(
                error_code=ERROR_ECGM_NEGATIVE_ENERGY,
                message="Seed energy is negative",
            )
        object.__setattr__(self, "cov_s", 0.5 * (cov + cov.T))

    @classmethod
    def from_params(cls, params: MeasurementParams, label: str = "two-mode") -> "ECGM":
        return cls(n_modes=2, cov_s=symplectic.two_mode_pure_covariance(params), label=label)

    @property
    def energy(self) -> float:
        return symplectic.covariance_energy(self.cov_s)

    @property
    def outcome_noise(self) -> np.ndarray:
        """Seed covariance in the outcome frame, Delta Sigma_S Delta^T."""
        delta = symplectic.symplectic_form(self.n_modes)
        return delta @ self.cov_s @ delta.T

    def rotated(self, thetas: Sequence[float]) -> "ECGM":
        """Seed counter-rotated to the parameter point thetas: R^T Sigma_S R."""
        r = symplectic.phase_rotation(thetas)
        return ECGM(n_modes=self.n_modes, cov_s=r.T @ self.cov_s @ r, label=self.label)
