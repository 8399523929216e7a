import math

from pydantic import Field, field_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from app.constants.error_constant import ERROR_VAL_OUT_OF_RANGE


class Settings(BaseSettings):

    # Structural tolerances
    SYMPLECTIC_TOL: float = Field(default=1e-9, gt=0.0)
    SYMMETRY_TOL: float = Field(default=1e-10, gt=0.0)
    PSD_TOL: float = Field(default=1e-9, gt=0.0)
    UNIT_NORM_TOL: float = Field(default=1e-12, gt=0.0)
    ORTHONORMAL_TOL: float = Field(default=1e-10, gt=0.0)

    # Measurement model
    HOMODYNE_ENERGY: float = Field(default=1e8, gt=0.0)

    # Optimizer
    GRID_SIZE: int = Field(default=33, ge=2, le=257)
    SIMPLEX_TOL: float = Field(default=1e-9, gt=0.0)
    SIMPLEX_FTOL: float = Field(default=1e-13, gt=0.0)
    ITERATIONS_PER_DIM: int = Field(default=200, ge=10)
    REFINE_STARTS: int = Field(default=3, ge=1, le=16)

    # Estimator
    SCALAR_TOL: float = Field(default=1e-10, gt=0.0)
    LOCAL_HALF_WIDTH: float = Field(default=math.pi / 4, gt=0.0, le=math.pi / 2)

    # Execution
    MAX_WORKERS: int = Field(default=4, ge=1, le=16)
    SHOW_PROGRESS: bool = False

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = True

    model_config = SettingsConfigDict(extra="ignore")

    @field_validator("LOG_LEVEL")
    def check_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR"}:
            raise ValueError(ERROR_VAL_OUT_OF_RANGE)
        return level

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # runs are configured by flags only; the environment never leaks in
        return (init_settings,)


settings = Settings()
