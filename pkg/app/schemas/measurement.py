import math

from pydantic import BaseModel, Field


class MeasurementParams(BaseModel):
    """Squeezings, beamsplitter angle and phases of a pure two-mode seed"""

    r1: float = 0.0
    r2: float = 0.0
    zeta_mag: float = Field(0.0, ge=0.0, le=math.pi / 2)
    zeta_arg: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0

    model_config = {"frozen": True}

    @classmethod
    def from_split(
        cls,
        split: float,
        energy: float,
        zeta_mag: float = 0.0,
        zeta_arg: float = 0.0,
        phi1: float = 0.0,
        phi2: float = 0.0,
    ) -> "MeasurementParams":
        """Place a fraction `split` of the energy on mode 1 and the rest on mode 2."""
        split = min(max(split, 0.0), 1.0)
        return cls(
            r1=math.asinh(math.sqrt(split * energy)),
            r2=math.asinh(math.sqrt((1.0 - split) * energy)),
            zeta_mag=min(max(zeta_mag, 0.0), math.pi / 2),
            zeta_arg=zeta_arg,
            phi1=phi1,
            phi2=phi2,
        )

    @property
    def energy(self) -> float:
        return math.sinh(self.r1) ** 2 + math.sinh(self.r2) ** 2
