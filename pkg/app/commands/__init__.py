import click

from app import __version__
from app.core.config import settings
from app.core.dependency import set_show_progress
from app.core.logging_config import setup_logging

from .gfi_command import gfi
from .mc_command import mc_crb
from .optimize_command import optimize
from .sweep_command import fir_map, noniso_map, sweep_eg


@click.group(name="gaussian-receiver")
@click.version_option(__version__)
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=settings.LOG_LEVEL,
    show_default=True,
)
@click.option("--json-logs/--text-logs", default=settings.LOG_JSON, show_default=True)
@click.option("--progress/--no-progress", default=settings.SHOW_PROGRESS, show_default=True, help="Progress bars on stderr for grid runs.")
def cli(log_level: str, json_logs: bool, progress: bool):
    """Fisher information of energy-constrained Gaussian receivers for distributed phase sensing."""
    setup_logging(level=log_level.upper(), json_format=json_logs)
    set_show_progress(progress)


cli.add_command(gfi)
cli.add_command(sweep_eg)
cli.add_command(fir_map)
cli.add_command(noniso_map)
cli.add_command(mc_crb)
cli.add_command(optimize)
