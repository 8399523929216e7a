from dependency_injector import containers, providers

from app.core.config import settings
from app.services.ecgm_service import EcgmService
from app.services.estimator_service import EstimatorService
from app.services.fisher_service import FisherService
from app.services.optimizer_service import OptimizerService
from app.services.orchestrators.run_orchestrator import RunOrchestrator
from app.services.probe_service import ProbeService


class Container(containers.DeclarativeContainer):
    """Application DI Container"""

    config = providers.Configuration()

    probe_service = providers.Singleton(
        ProbeService,
        unit_norm_tol=config.UNIT_NORM_TOL,
    )

    ecgm_service = providers.Singleton(
        EcgmService,
        homodyne_energy=config.HOMODYNE_ENERGY,
    )

    fisher_service = providers.Singleton(
        FisherService,
        probe_service=probe_service,
        ecgm_service=ecgm_service,
        orthonormal_tol=config.ORTHONORMAL_TOL,
    )

    optimizer_service = providers.Factory(
        OptimizerService,
        fisher_service=fisher_service,
        grid_size=config.GRID_SIZE,
        simplex_tol=config.SIMPLEX_TOL,
        simplex_ftol=config.SIMPLEX_FTOL,
        iterations_per_dim=config.ITERATIONS_PER_DIM,
        refine_starts=config.REFINE_STARTS,
        max_workers=config.MAX_WORKERS,
        show_progress=config.SHOW_PROGRESS,
    )

    estimator_service = providers.Factory(
        EstimatorService,
        fisher_service=fisher_service,
        scalar_tol=config.SCALAR_TOL,
        local_half_width=config.LOCAL_HALF_WIDTH,
        max_workers=config.MAX_WORKERS,
        show_progress=config.SHOW_PROGRESS,
    )

    run_orchestrator = providers.Factory(
        RunOrchestrator,
        fisher_service=fisher_service,
        optimizer_service=optimizer_service,
        estimator_service=estimator_service,
    )


container = Container()
container.config.from_dict(settings.model_dump())
