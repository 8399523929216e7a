import math
from typing import List

from pydantic import BaseModel, Field, field_validator, model_validator

from app.constants.error_constant import (
    ERROR_PROBE_LENGTH_MISMATCH,
    ERROR_PROBE_NEGATIVE_OCCUPATION,
    ERROR_VAL_INVALID_INPUT,
)


class ProbeSpec(BaseModel):
    """Displaced thermal probe: real amplitudes and thermal occupations per mode"""

    n_modes: int = Field(..., ge=1)
    alphas: List[float]
    thermal_occupations: List[float]

    model_config = {"frozen": True}

    @field_validator("thermal_occupations")
    def check_occupations(cls, v: List[float]) -> List[float]:
        if any(n < 0 or not math.isfinite(n) for n in v):
            raise ValueError(ERROR_PROBE_NEGATIVE_OCCUPATION)
        return v

    @field_validator("alphas")
    def check_alphas(cls, v: List[float]) -> List[float]:
        if not all(math.isfinite(a) for a in v):
            raise ValueError(ERROR_VAL_INVALID_INPUT)
        return v

    @model_validator(mode="after")
    def check_lengths(self) -> "ProbeSpec":
        if len(self.alphas) != self.n_modes or len(self.thermal_occupations) != self.n_modes:
            raise ValueError(ERROR_PROBE_LENGTH_MISMATCH)
        return self

    @classmethod
    def isothermal(cls, alpha: float, n0: float, n_modes: int = 2) -> "ProbeSpec":
        return cls(
            n_modes=n_modes,
            alphas=[alpha] * n_modes,
            thermal_occupations=[n0] * n_modes,
        )

    @classmethod
    def from_inverse_temperatures(cls, alphas: List[float], betas: List[float]) -> "ProbeSpec":
        """N_j = 1 / (e^{beta_j} - 1)"""
        return cls(
            n_modes=len(alphas),
            alphas=alphas,
            thermal_occupations=[1.0 / math.expm1(b) for b in betas],
        )

    @property
    def total_intensity(self) -> float:
        return sum(a * a for a in self.alphas)

    @property
    def is_isothermal(self) -> bool:
        return len(set(self.thermal_occupations)) == 1


class ChannelSpec(BaseModel):
    """Lossy thermal transmission: amplitude transmissivity and added occupation"""

    eta: float = Field(1.0, ge=0.0, le=1.0)
    n_channel: float = Field(0.0, ge=0.0)

    model_config = {"frozen": True}
