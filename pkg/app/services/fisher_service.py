import math
from typing import Sequence

import numpy as np

from app.constants.error_constant import (
    ERROR_FISHER_INVALID_MODE_COUNT,
    ERROR_FISHER_NON_ORTHONORMAL_BASIS,
    ERROR_FISHER_SINGULAR_COVARIANCE,
    ERROR_FISHER_ZERO_AMPLITUDE,
)
from app.core.config import settings
from app.core.exception import AppException
from app.core.logging_config import get_logger
from app.dtos.gaussian_dto import ECGM, GaussianState
from app.enumerations.receiver_enum import EgMode
from app.ml import closed_forms, symplectic
from app.schemas.probe import ProbeSpec
from app.schemas.report import FisherReport, GfiSummary, SldCoefficients, SldTerm
from app.services.ecgm_service import EcgmService
from app.services.probe_service import ProbeService

logger = get_logger(__name__)

PHASE_DIFFERENCE = np.array([1.0, -1.0]) / math.sqrt(2.0)


class FisherService:
    """Service for classical Fisher information of Gaussian receivers and its quantum bounds"""

    def __init__(
        self,
        probe_service: ProbeService | None = None,
        ecgm_service: EcgmService | None = None,
        orthonormal_tol: float = settings.ORTHONORMAL_TOL,
    ):
        self.probe_service = probe_service or ProbeService()
        self.ecgm_service = ecgm_service or EcgmService()
        self.orthonormal_tol = orthonormal_tol

    def fisher_matrix(self, spec: ProbeSpec, thetas: Sequence[float], m: ECGM) -> np.ndarray:
        """
        Fisher matrix of the outcome density with respect to theta

        For displaced thermal probes the covariance is phase invariant and
        F_ij = (d_i m)^T Sigma^{-1} (d_j m), Sigma = Sigma_rho + Delta Sigma_S Delta^T.
        """
        f, _ = self.gaussian_fisher_matrix(self.probe_service.probe_state(spec), thetas, m)
        return f

    def gaussian_fisher_matrix(
        self, base_state: GaussianState, thetas: Sequence[float], m: ECGM
    ) -> tuple[np.ndarray, dict[str, str]]:
        """
        Fisher matrix for an arbitrary Gaussian base state sent through the phase channel

        Returns:
            Tuple of (F, notes). The covariance term follows the product-of-traces
            expression and is only validated when it vanishes.
        """
        state = self.probe_service.imprint_phases(base_state, thetas)
        cov = self.ecgm_service.outcome_covariance(state, m)
        cov_inv = self._inverse(cov)

        jac = np.column_stack(
            [
                symplectic.phase_rotation_derivative(thetas, j).T @ base_state.mean
                for j in range(base_state.n_modes)
            ]
        )
        f = jac.T @ cov_inv @ jac
        notes = {"mean_term": "d_i m^T Sigma^-1 d_j m"}

        dcovs = self.probe_service.covariance_derivatives(base_state, thetas)
        if max(float(np.max(np.abs(d))) for d in dcovs) > settings.SYMPLECTIC_TOL:
            traces = np.array([np.trace(d @ cov_inv) for d in dcovs])
            f = f + 0.25 * np.outer(traces, traces)
            notes["covariance_term"] = "product of traces; outside validated regime"
            logger.warning(
                "Probe covariance depends on theta; covariance term is unvalidated",
                extra={"thetas": list(thetas)},
            )
        else:
            notes["covariance_term"] = "zero (phase-invariant probe covariance)"

        return 0.5 * (f + f.T), notes

    def rotate_fisher(self, f: np.ndarray, v_basis: np.ndarray) -> np.ndarray:
        """F_tilde = J^T F J with J = [v_1, ..., v_N]."""
        j = self._check_orthonormal(v_basis)
        return j.T @ np.asarray(f, dtype=float) @ j

    def linear_function_fi(
        self, spec: ProbeSpec, thetas: Sequence[float], m: ECGM, v1: Sequence[float]
    ) -> float:
        """F_tilde_11 for the estimand v1 . theta, straight from the directional mean derivative."""
        d = self.probe_service.phase_derivative_of_mean(spec, thetas, v1)
        state = self.probe_service.phased_probe(spec, thetas)
        cov = self.ecgm_service.outcome_covariance(state, m)
        return float(d @ np.linalg.solve(cov, d))

    def qfi_linear_function(self, spec: ProbeSpec, v1: Sequence[float]) -> float:
        v = self.probe_service.check_unit(v1, spec.n_modes)
        alphas = np.asarray(spec.alphas)
        occupations = np.asarray(spec.thermal_occupations)
        return float(np.sum(2.0 * v**2 * alphas**2 / (occupations + 0.5)))

    def qfi_phase_difference(self, spec: ProbeSpec) -> float:
        """sum_j alpha_j^2 / (N_j + 1/2) for (theta_1 - theta_2) / sqrt(2)."""
        if spec.n_modes != 2:
            raise AppException(
                error_code=ERROR_FISHER_INVALID_MODE_COUNT,
                message="Phase difference is defined for two modes",
                details={"n_modes": spec.n_modes},
            )
        return self.qfi_linear_function(spec, PHASE_DIFFERENCE)

    def sld_coefficients(
        self,
        spec: ProbeSpec,
        thetas: Sequence[float],
        v1: Sequence[float] | None = None,
    ) -> SldCoefficients:
        """
        SLD of v1 . theta

        The SLD is sum_j v_j alpha_j / (N_j + 1/2) (i e^{i theta_j} a_j + h.c.);
        in quadratures it is l^T (x - m_theta) with l = Sigma_rho^{-1} (v1 . grad) m.
        """
        if v1 is None:
            v1 = PHASE_DIFFERENCE if spec.n_modes == 2 else None
        if v1 is None:
            raise AppException(
                error_code=ERROR_FISHER_INVALID_MODE_COUNT,
                message="v1 is required beyond two modes",
            )
        v = self.probe_service.check_unit(v1, spec.n_modes)
        terms = [
            SldTerm(
                mode=j,
                magnitude=alpha / (n + 0.5),
                phase_re=math.cos(theta),
                phase_im=math.sin(theta),
                weight=float(v[j]),
            )
            for j, (alpha, n, theta) in enumerate(
                zip(spec.alphas, spec.thermal_occupations, thetas)
            )
        ]
        state = self.probe_service.phased_probe(spec, thetas)
        d = self.probe_service.phase_derivative_of_mean(spec, thetas, v)
        form = np.linalg.solve(state.cov, d)
        return SldCoefficients(
            terms=terms,
            quadrature_form=form.tolist(),
            qfi=float(form @ state.cov @ form),
        )

    def fisher_report(
        self,
        spec: ProbeSpec,
        thetas: Sequence[float],
        m: ECGM,
        v_basis: np.ndarray | None = None,
    ) -> FisherReport:
        if v_basis is None:
            v_basis = self.completed_basis(PHASE_DIFFERENCE if spec.n_modes == 2 else np.eye(spec.n_modes)[0])
        f, notes = self.gaussian_fisher_matrix(self.probe_service.probe_state(spec), thetas, m)
        f_tilde = self.rotate_fisher(f, v_basis)
        notes["F_tilde_11"] = "(J^T F J)_11"
        notes["qfi"] = "sum_j 2 v_j^2 alpha_j^2 / (N_j + 1/2)"
        return FisherReport(
            F=f.tolist(),
            F_tilde=f_tilde.tolist(),
            F_tilde_11=float(f_tilde[0, 0]),
            qfi=self.qfi_linear_function(spec, v_basis[:, 0]),
            notes=notes,
        )

    def seed_entanglement_entropy(self, m: ECGM) -> float:
        """Entropy of mode 1 of a pure two-mode seed, g(nu - 1/2)."""
        if m.n_modes != 2:
            raise AppException(
                error_code=ERROR_FISHER_INVALID_MODE_COUNT,
                message="Seed entanglement entropy is defined for two-mode seeds",
                details={"n_modes": m.n_modes},
            )
        nu = symplectic.symplectic_eigenvalues(symplectic.reduced_covariance(m.cov_s, [0]))[0]
        return closed_forms.bosonic_entropy(max(float(nu) - 0.5, 0.0))

    def fir(
        self, thetas_true: Sequence[float], alpha: float, n0: float, energy: float
    ) -> float:
        """
        Fisher information ratio of the receiver designed for theta = 0

        Returns:
            F_tilde_11 at thetas_true divided by the maximal value 4 alpha^2 / (2 N0 + 1)
        """
        if alpha == 0.0:
            raise AppException(
                error_code=ERROR_FISHER_ZERO_AMPLITUDE,
                message="FIR is undefined for a zero-amplitude probe",
                details={"alpha": alpha},
            )
        spec = ProbeSpec.isothermal(alpha, n0, 2)
        m = self.ecgm_service.optimal_ecgm(energy)
        achieved = self.linear_function_fi(spec, thetas_true, m, PHASE_DIFFERENCE)
        return achieved / closed_forms.qfi_isothermal(alpha, n0)

    def fir_map(
        self,
        theta1_grid: Sequence[float],
        theta2_grid: Sequence[float],
        alpha: float,
        n0: float,
        energy: float,
    ) -> np.ndarray:
        """Cell (i, j) holds fir((theta1_grid[i], theta2_grid[j]))."""
        return np.array(
            [[self.fir((t1, t2), alpha, n0, energy) for t2 in theta2_grid] for t1 in theta1_grid]
        )

    def gfi_summary(
        self,
        alpha: float,
        n0: float,
        energy: float,
        n_modes: int = 2,
        v11_sq: float | None = None,
    ) -> GfiSummary:
        v11_sq = 1.0 / n_modes if v11_sq is None else v11_sq
        return GfiSummary(
            alpha=alpha,
            n0=n0,
            energy=energy,
            n_modes=n_modes,
            qfi=closed_forms.qfi_isothermal(alpha, n0),
            gfi=closed_forms.gfi_closed_form(alpha, n0, energy),
            heterodyne=closed_forms.heterodyne_fi(alpha, n0),
            separable_balanced=closed_forms.separable_fi_balanced(alpha, n0, energy, n_modes),
            separable_unbalanced=closed_forms.separable_fi_unbalanced(alpha, n0, energy, v11_sq, n_modes),
            v11_sq=v11_sq,
            entanglement_gain_balanced=closed_forms.entanglement_gain(
                alpha, n0, energy, EgMode.BALANCED, n_modes=n_modes
            ),
            entanglement_gain_unbalanced=closed_forms.entanglement_gain(
                alpha, n0, energy, EgMode.UNBALANCED, n_modes=n_modes, v11_sq=v11_sq
            ),
            seed_entropy=closed_forms.entanglement_entropy_of_optimal_seed(energy),
        )

    @staticmethod
    def completed_basis(v1: Sequence[float]) -> np.ndarray:
        """Orthonormal basis whose first column is v1 (Householder completion)."""
        v = np.asarray(v1, dtype=float)
        v = v / np.linalg.norm(v)
        n = v.size
        e1 = np.zeros(n)
        e1[0] = 1.0
        w = v - e1
        if np.linalg.norm(w) < 1e-14:
            return np.eye(n)
        w = w / np.linalg.norm(w)
        return np.eye(n) - 2.0 * np.outer(w, w)

    def _check_orthonormal(self, v_basis: np.ndarray) -> np.ndarray:
        j = np.asarray(v_basis, dtype=float)
        if j.ndim != 2 or j.shape[0] != j.shape[1]:
            raise AppException(
                error_code=ERROR_FISHER_NON_ORTHONORMAL_BASIS,
                message="Basis must be a square matrix",
                details={"shape": list(j.shape)},
            )
        deviation = float(np.max(np.abs(j.T @ j - np.eye(j.shape[0]))))
        if deviation > self.orthonormal_tol:
            raise AppException(
                error_code=ERROR_FISHER_NON_ORTHONORMAL_BASIS,
                message="Basis columns are not orthonormal",
                details={"deviation": deviation},
            )
        return j

    @staticmethod
    def _inverse(cov: np.ndarray) -> np.ndarray:
        try:
            return np.linalg.inv(cov)
        except np.linalg.LinAlgError as e:
            raise AppException(
                error_code=ERROR_FISHER_SINGULAR_COVARIANCE,
                message="Outcome covariance is singular",
                details={"error": str(e)},
            ) from e
