import math
import time
from typing import Sequence

import numpy as np
import pandas as pd

from app.core.logging_config import get_logger
from app.dtos.gaussian_dto import ECGM
from app.enumerations.receiver_enum import EgMode, ReceiverKind
from app.ml import closed_forms
from app.schemas.probe import ChannelSpec, ProbeSpec
from app.schemas.report import GfiSummary, McReport, OptimizationResult
from app.services.estimator_service import EstimatorService
from app.services.fisher_service import PHASE_DIFFERENCE, FisherService
from app.services.optimizer_service import OptimizerService

logger = get_logger(__name__)


class RunOrchestrator:
    """Orchestrates the multi-step runs behind each CLI subcommand"""

    def __init__(
        self,
        fisher_service: FisherService,
        optimizer_service: OptimizerService,
        estimator_service: EstimatorService,
    ):
        self.fisher_service = fisher_service
        self.optimizer_service = optimizer_service
        self.estimator_service = estimator_service

    def gfi_summary(
        self,
        alpha: float,
        n0: float,
        energy: float,
        n_modes: int = 2,
        v11_sq: float | None = None,
        channel: ChannelSpec | None = None,
    ) -> GfiSummary:
        """
        Headline values for an isothermal probe

        Args:
            channel: Optional transmission channel; the probe is rescaled before evaluation
        """
        if channel is not None:
            spec = self.fisher_service.probe_service.apply_channel(
                ProbeSpec.isothermal(alpha, n0, n_modes), channel
            )
            alpha, n0 = spec.alphas[0], spec.thermal_occupations[0]
        return self.fisher_service.gfi_summary(alpha, n0, energy, n_modes, v11_sq)

    def eg_curve(
        self,
        mode: EgMode,
        param_grid: Sequence[float],
        energy_grid: Sequence[float],
        alpha: float = 1.0,
        n0: float = 0.0,
    ) -> pd.DataFrame:
        """
        Entanglement gain over a parameter and energy grid

        For the balanced mode `param` is the mode count N; for the unbalanced
        mode it is (v1)_1^2.
        """
        rows = []
        for param in param_grid:
            for energy in energy_grid:
                if mode == EgMode.BALANCED:
                    eg = closed_forms.entanglement_gain(alpha, n0, energy, mode, n_modes=int(param))
                else:
                    eg = closed_forms.entanglement_gain(alpha, n0, energy, mode, v11_sq=param)
                rows.append({"E": energy, "param": param, "eg": eg})
        return pd.DataFrame(rows, columns=["E", "param", "eg"])

    def fir_map(self, theta_steps: int, energy: float, alpha: float, n0: float) -> pd.DataFrame:
        """FIR over a theta_steps x theta_steps grid on [-pi, pi]^2."""
        grid = np.linspace(-math.pi, math.pi, theta_steps)
        start = time.time()
        values = self.fisher_service.fir_map(grid, grid, alpha, n0, energy)
        t1, t2 = np.meshgrid(grid, grid, indexing="ij")
        logger.info(
            "FIR map computed",
            extra={"cells": values.size, "min_fir": float(values.min()), "duration_s": round(time.time() - start, 3)},
        )
        return pd.DataFrame({"theta1": t1.ravel(), "theta2": t2.ravel(), "fir": values.ravel()})

    def noniso_map(
        self, n1_max: float, n2_max: float, steps: int, alpha: float, energy: float
    ) -> pd.DataFrame:
        n1_grid = np.linspace(0.0, n1_max, steps).tolist()
        n2_grid = np.linspace(0.0, n2_max, steps).tolist()
        result = self.optimizer_service.noniso_sweep(n1_grid, n2_grid, alpha, energy)
        n1, n2 = np.meshgrid(n1_grid, n2_grid, indexing="ij")
        return pd.DataFrame(
            {
                "n1": n1.ravel(),
                "n2": n2.ravel(),
                "best_value": np.asarray(result.best_values).ravel(),
                "entropy": np.asarray(result.entropies).ravel(),
            }
        )

    def optimize(
        self,
        alpha: float,
        n1: float,
        n2: float,
        energy: float,
        theta1: float = 0.0,
        theta2: float = 0.0,
    ) -> OptimizationResult:
        return self.optimizer_service.optimize_two_mode(alpha, (n1, n2), (theta1, theta2), energy)

    def mc_crb(
        self,
        receiver: ReceiverKind,
        m_samples: int,
        reps: int,
        seed: int,
        energy: float,
        alpha: float = 1.0,
        n0: float = 0.0,
        thetas: Sequence[float] = (0.0, 0.0),
        full_vector: bool = False,
    ) -> McReport:
        spec = ProbeSpec.isothermal(alpha, n0, 2)
        m = self.receiver(receiver, energy, thetas)
        return self.estimator_service.crb_experiment(
            spec,
            thetas,
            m,
            PHASE_DIFFERENCE,
            m_samples,
            reps,
            seed,
            full_vector=full_vector,
            receiver=receiver,
        )

    def receiver(self, kind: ReceiverKind, energy: float, thetas: Sequence[float]) -> ECGM:
        """Two-mode receiver of the given kind, aligned with the parameter point."""
        ecgm_service = self.fisher_service.ecgm_service
        if kind == ReceiverKind.HETERODYNE:
            return ecgm_service.heterodyne(2)
        if kind == ReceiverKind.OPTIMAL:
            return ecgm_service.optimal_ecgm(energy, thetas)
        return ecgm_service.separable_seed([energy / 2.0, energy / 2.0], thetas)
