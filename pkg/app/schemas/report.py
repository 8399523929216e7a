from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from app.enumerations.receiver_enum import ReceiverKind
from app.schemas.measurement import MeasurementParams

_REPORT_TOL = 1e-9


class FisherReport(BaseModel):
    """Fisher matrix, its rotation to the estimand basis and the QFI bound"""

    F: List[List[float]]
    F_tilde: List[List[float]]
    F_tilde_11: float
    qfi: float
    notes: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_bounds(self) -> "FisherReport":
        f = np.asarray(self.F)
        scale = max(1.0, float(np.max(np.abs(f))) if f.size else 1.0)
        if np.max(np.abs(f - f.T)) > _REPORT_TOL * scale:
            raise ValueError("Fisher matrix is not symmetric")
        if np.linalg.eigvalsh(0.5 * (f + f.T)).min() < -_REPORT_TOL * scale:
            raise ValueError("Fisher matrix is not positive semidefinite")
        if self.F_tilde_11 > self.qfi + _REPORT_TOL * max(1.0, self.qfi):
            raise ValueError("Gaussian Fisher information exceeds the QFI")
        return self


class SldTerm(BaseModel):
    mode: int
    magnitude: float
    phase_re: float
    phase_im: float
    weight: float


class SldCoefficients(BaseModel):
    """SLD of v1 . theta as a linear form in the mode operators and in quadratures"""

    terms: List[SldTerm]
    quadrature_form: List[float]
    qfi: float


class OptimizationResult(BaseModel):
    """Maximizer of the estimand Fisher information on an energy shell"""

    best_params: MeasurementParams | List[float]
    best_value: float
    objective_evals: int
    converged: bool
    energy: float
    qfi: Optional[float] = None
    message: str = ""


class NonisoSweepResult(BaseModel):
    """Grid of maximal Fisher information for non-isothermal two-mode probes"""

    alpha: float
    energy: float
    n1_grid: List[float]
    n2_grid: List[float]
    best_values: List[List[float]]
    entropies: List[List[float]]
    total_evals: int


class McReport(BaseModel):
    """Empirical estimator variance against the Cramer-Rao bound"""

    receiver: Optional[ReceiverKind] = None
    m_samples: int
    repetitions: int
    empirical_variance: float
    crb: float = Field(..., gt=0.0)
    ratio: float = Field(..., gt=0.0)
    fisher_information: float
    mean_estimate: float
    truth: float
    bias: float
    bias_standard_error: float
    full_vector: bool = False
    seed: int


class GfiSummary(BaseModel):
    """Headline Fisher information values for an isothermal probe"""

    alpha: float
    n0: float
    energy: float
    n_modes: int
    qfi: float
    gfi: float
    heterodyne: float
    separable_balanced: float
    separable_unbalanced: float
    v11_sq: float
    entanglement_gain_balanced: float
    entanglement_gain_unbalanced: float
    seed_entropy: float
