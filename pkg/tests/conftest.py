import math

import numpy as np
import pytest

from app.schemas.probe import ProbeSpec
from app.services.ecgm_service import EcgmService
from app.services.estimator_service import EstimatorService
from app.services.fisher_service import FisherService
from app.services.optimizer_service import OptimizerService
from app.services.probe_service import ProbeService


@pytest.fixture
def probe_service() -> ProbeService:
    return ProbeService()


@pytest.fixture
def ecgm_service() -> EcgmService:
    return EcgmService()


@pytest.fixture
def fisher_service(probe_service, ecgm_service) -> FisherService:
    return FisherService(probe_service=probe_service, ecgm_service=ecgm_service)


@pytest.fixture
def optimizer_service(fisher_service) -> OptimizerService:
    return OptimizerService(fisher_service=fisher_service)


@pytest.fixture
def estimator_service(fisher_service) -> EstimatorService:
    return EstimatorService(fisher_service=fisher_service)


@pytest.fixture
def vacuum_probe() -> ProbeSpec:
    """alpha = 1, N0 = 0 on two modes."""
    return ProbeSpec.isothermal(1.0, 0.0, 2)


@pytest.fixture
def balanced_v() -> np.ndarray:
    return np.array([1.0, -1.0]) / math.sqrt(2.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
