import math
from typing import Sequence

import numpy as np

from app.constants.error_constant import (
    ERROR_PROBE_LENGTH_MISMATCH,
    ERROR_PROBE_NEGATIVE_OCCUPATION,
    ERROR_PROBE_NON_UNIT_DIRECTION,
)
from app.core.config import settings
from app.core.exception import AppException
from app.core.logging_config import get_logger
from app.dtos.gaussian_dto import GaussianState
from app.ml import symplectic
from app.schemas.probe import ChannelSpec, ProbeSpec

logger = get_logger(__name__)


class ProbeService:
    """Service for displaced thermal probes, phase imprinting and transmission noise"""

    def __init__(self, unit_norm_tol: float = settings.UNIT_NORM_TOL):
        self.unit_norm_tol = unit_norm_tol

    def probe_state(self, spec: ProbeSpec) -> GaussianState:
        """
        Build the unrotated probe

        Args:
            spec: Probe amplitudes and thermal occupations

        Returns:
            GaussianState with mean blocks (sqrt(2) alpha_j, 0) and
            covariance (+)_j (N_j + 1/2) I_2
        """
        occupations = np.asarray(spec.thermal_occupations, dtype=float)
        if np.any(occupations < 0):
            raise AppException(
                error_code=ERROR_PROBE_NEGATIVE_OCCUPATION,
                message="Thermal occupations must be non-negative",
                details={"thermal_occupations": spec.thermal_occupations},
            )

        mean = np.zeros(2 * spec.n_modes)
        mean[0::2] = math.sqrt(2.0) * np.asarray(spec.alphas, dtype=float)
        cov = np.diag(np.repeat(occupations + 0.5, 2))
        return GaussianState(mean=mean, cov=cov)

    def imprint_phases(self, state: GaussianState, thetas: Sequence[float]) -> GaussianState:
        """Apply the phase channel: mean -> R^T mean, cov -> R^T cov R, R = (+)_j V_theta_j."""
        self._check_length(thetas, state.n_modes)
        r = symplectic.phase_rotation(thetas)
        return state.transformed(r.T)

    def phased_probe(self, spec: ProbeSpec, thetas: Sequence[float]) -> GaussianState:
        return self.imprint_phases(self.probe_state(spec), thetas)

    def apply_channel(self, spec: ProbeSpec, ch: ChannelSpec) -> ProbeSpec:
        """Loss and thermal injection rescale the probe: alpha -> eta alpha, N -> N + N_channel."""
        return ProbeSpec(
            n_modes=spec.n_modes,
            alphas=[ch.eta * a for a in spec.alphas],
            thermal_occupations=[n + ch.n_channel for n in spec.thermal_occupations],
        )

    def compose_channels(self, first: ChannelSpec, second: ChannelSpec) -> ChannelSpec:
        return ChannelSpec(eta=first.eta * second.eta, n_channel=first.n_channel + second.n_channel)

    def mean_jacobian(self, spec: ProbeSpec, thetas: Sequence[float]) -> np.ndarray:
        """2N x N matrix whose column j is d m_theta / d theta_j."""
        self._check_length(thetas, spec.n_modes)
        m0 = self.probe_state(spec).mean
        columns = [
            symplectic.phase_rotation_derivative(thetas, j).T @ m0
            for j in range(spec.n_modes)
        ]
        return np.column_stack(columns)

    def covariance_derivatives(
        self, state: GaussianState, thetas: Sequence[float]
    ) -> list[np.ndarray]:
        """d Sigma_theta / d theta_j for an arbitrary base state under the phase channel."""
        self._check_length(thetas, state.n_modes)
        r = symplectic.phase_rotation(thetas)
        out = []
        for j in range(state.n_modes):
            dr = symplectic.phase_rotation_derivative(thetas, j)
            out.append(dr.T @ state.cov @ r + r.T @ state.cov @ dr)
        return out

    def phase_derivative_of_mean(
        self, spec: ProbeSpec, thetas: Sequence[float], direction: Sequence[float]
    ) -> np.ndarray:
        """
        Directional derivative (v . grad_theta) m_theta

        Args:
            spec: Probe specification
            thetas: Parameter point
            direction: Unit vector v in R^N

        Returns:
            Phase-space vector whose squared norm is 2 sum_j v_j^2 alpha_j^2
        """
        v = self.check_unit(direction, spec.n_modes)
        return self.mean_jacobian(spec, thetas) @ v

    def check_unit(self, direction: Sequence[float], n_modes: int) -> np.ndarray:
        v = np.asarray(direction, dtype=float)
        self._check_length(v, n_modes)
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > self.unit_norm_tol:
            raise AppException(
                error_code=ERROR_PROBE_NON_UNIT_DIRECTION,
                message="Direction vector must have unit norm",
                details={"norm": norm},
            )
        return v

    @staticmethod
    def _check_length(values: Sequence[float], n_modes: int) -> None:
        if len(values) != n_modes:
            raise AppException(
                error_code=ERROR_PROBE_LENGTH_MISMATCH,
                message=f"Expected {n_modes} entries, got {len(values)}",
                details={"expected": n_modes, "received": len(values)},
            )
