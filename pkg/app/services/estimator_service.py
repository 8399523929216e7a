import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from tqdm import tqdm

from app.constants.error_constant import (
    ERROR_EST_INVALID_EXPERIMENT,
    ERROR_EST_NOT_CONVERGED,
    ERROR_EST_REP_FAILED,
)
from app.core.config import settings
from app.core.exception import EXIT_NUMERICAL, AppException
from app.core.logging_config import get_logger
from app.dtos.gaussian_dto import ECGM
from app.enumerations.receiver_enum import ReceiverKind
from app.schemas.probe import ProbeSpec
from app.schemas.report import McReport
from app.services.fisher_service import FisherService

logger = get_logger(__name__)

MIN_SAMPLES = 1000
MIN_REPETITIONS = 100


def wrap_phase(angle: float) -> float:
    """Map an angle to (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


class EstimatorService:
    """Service for maximum-likelihood phase estimation on simulated receiver outcomes"""

    def __init__(
        self,
        fisher_service: FisherService | None = None,
        scalar_tol: float = settings.SCALAR_TOL,
        local_half_width: float = settings.LOCAL_HALF_WIDTH,
        max_workers: int = settings.MAX_WORKERS,
        show_progress: bool = settings.SHOW_PROGRESS,
    ):
        self.fisher_service = fisher_service or FisherService()
        self.scalar_tol = scalar_tol
        self.local_half_width = local_half_width
        self.max_workers = max_workers
        self.show_progress = show_progress

    @property
    def probe_service(self):
        return self.fisher_service.probe_service

    @property
    def ecgm_service(self):
        return self.fisher_service.ecgm_service

    def log_likelihood(
        self, thetas: Sequence[float], outcomes: np.ndarray, spec: ProbeSpec, m: ECGM
    ) -> float:
        state = self.probe_service.phased_probe(spec, thetas)
        return float(np.sum(self.ecgm_service.log_outcome_density(state, m, np.atleast_2d(outcomes))))

    def mle_estimate(
        self,
        outcomes: np.ndarray,
        spec: ProbeSpec,
        m: ECGM,
        v1: Sequence[float],
        theta_init: Sequence[float],
        full_vector: bool = False,
    ) -> float:
        """
        Maximum-likelihood estimate of v1 . theta

        The outcome covariance does not depend on theta for displaced thermal
        probes, so the likelihood only enters through the sample mean and the
        search minimizes (y_bar - m_theta)^T Sigma^{-1} (y_bar - m_theta).

        Args:
            outcomes: Array of shape (M, 2N)
            spec: Probe specification
            m: Measurement
            v1: Unit estimand direction
            theta_init: Prior point; other directions stay pinned here unless full_vector
            full_vector: Maximize over all of theta instead of the line theta_init + s v1

        Returns:
            v1 . theta_hat wrapped to (-pi, pi]
        """
        v = self.probe_service.check_unit(v1, spec.n_modes)
        theta0 = np.asarray(theta_init, dtype=float)
        y_bar = np.atleast_2d(outcomes).mean(axis=0)
        cov = self.ecgm_service.outcome_covariance(self.probe_service.phased_probe(spec, theta0), m)
        precision = np.linalg.inv(cov)
        scale = (np.asarray(spec.alphas) * math.sqrt(2.0)).repeat(2)

        def misfit(thetas: np.ndarray) -> float:
            c, s = np.cos(thetas), np.sin(thetas)
            # R^T m0 for real amplitudes: block j is sqrt(2) alpha_j (cos, sin)
            mean = np.column_stack([c, s]).ravel() * scale
            r = y_bar - mean
            return float(r @ precision @ r)

        if full_vector:
            res = minimize(
                misfit,
                theta0,
                method="Nelder-Mead",
                options={"xatol": self.scalar_tol, "fatol": 1e-14, "maxiter": 400 * theta0.size},
            )
            if not res.success:
                raise AppException(
                    error_code=ERROR_EST_NOT_CONVERGED,
                    message="Full-vector likelihood maximization did not converge",
                    exit_code=EXIT_NUMERICAL,
                    details={"message": res.message},
                )
            return wrap_phase(float(v @ res.x))

        w = self.local_half_width
        res = minimize_scalar(
            lambda s: misfit(theta0 + s * v),
            bounds=(-w, w),
            method="bounded",
            options={"xatol": self.scalar_tol},
        )
        if not res.success or abs(res.x) > w * (1.0 - 1e-6):
            raise AppException(
                error_code=ERROR_EST_NOT_CONVERGED,
                message="Likelihood maximum not found inside the local window",
                exit_code=EXIT_NUMERICAL,
                details={"s": float(res.x), "half_width": w},
            )
        return wrap_phase(float(v @ theta0 + res.x))

    def crb_experiment(
        self,
        spec: ProbeSpec,
        thetas_true: Sequence[float],
        m: ECGM,
        v1: Sequence[float],
        m_samples: int,
        reps: int,
        seed: int,
        full_vector: bool = False,
        receiver: ReceiverKind | None = None,
    ) -> McReport:
        """
        Compare the MLE variance across independent experiments to 1 / (M F_tilde_11)

        Repetition k draws from the k-th child of SeedSequence(seed), so the
        report does not depend on scheduling.
        """
        if m_samples < MIN_SAMPLES or reps < MIN_REPETITIONS:
            raise AppException(
                error_code=ERROR_EST_INVALID_EXPERIMENT,
                message=f"Experiments need M >= {MIN_SAMPLES} and reps >= {MIN_REPETITIONS}",
                details={"m_samples": m_samples, "reps": reps},
            )
        v = self.probe_service.check_unit(v1, spec.n_modes)
        state = self.probe_service.phased_probe(spec, thetas_true)
        truth = wrap_phase(float(v @ np.asarray(thetas_true, dtype=float)))
        streams = np.random.SeedSequence(seed).spawn(reps)

        def run(rep: int) -> float:
            try:
                outcomes = self.ecgm_service.sample_outcomes(state, m, m_samples, streams[rep])
                return self.mle_estimate(outcomes, spec, m, v, thetas_true, full_vector)
            except AppException as e:
                raise AppException(
                    error_code=ERROR_EST_REP_FAILED,
                    message=f"Repetition {rep} failed: {e.message}",
                    exit_code=EXIT_NUMERICAL,
                    details={"rep": rep, "cause": e.error_code, **e.details},
                ) from e

        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            estimates = np.array(
                list(tqdm(pool.map(run, range(reps)), total=reps, desc="mc-crb", disable=not self.show_progress))
            )

        errors = np.array([wrap_phase(e - truth) for e in estimates])
        variance = float(np.var(errors, ddof=1))
        fisher = self.fisher_service.linear_function_fi(spec, thetas_true, m, v)
        crb = 1.0 / (m_samples * fisher)
        bias = float(errors.mean())

        logger.info(
            "Cramer-Rao experiment finished",
            extra={"reps": reps, "m_samples": m_samples, "ratio": variance / crb},
        )
        return McReport(
            receiver=receiver,
            m_samples=m_samples,
            repetitions=reps,
            empirical_variance=variance,
            crb=crb,
            ratio=variance / crb,
            fisher_information=fisher,
            mean_estimate=wrap_phase(truth + bias),
            truth=truth,
            bias=bias,
            bias_standard_error=math.sqrt(variance / reps),
            full_vector=full_vector,
            seed=seed,
        )
