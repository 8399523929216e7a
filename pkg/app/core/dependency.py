from app.core.container import container
from app.services.orchestrators.run_orchestrator import RunOrchestrator


def get_run_orchestrator() -> RunOrchestrator:
    """Get run orchestrator instance"""
    return container.run_orchestrator()


def set_show_progress(enabled: bool) -> None:
    """Toggle tqdm progress bars for services created after this call."""
    container.config.SHOW_PROGRESS.from_value(enabled)
