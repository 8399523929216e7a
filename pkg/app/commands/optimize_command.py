from pathlib import Path

import click

from app.commands.options import out_option
from app.constants.error_constant import ERROR_OPT_NOT_CONVERGED
from app.core.decorator import command_run
from app.core.dependency import get_run_orchestrator
from app.core.exception import EXIT_NUMERICAL, AppException
from app.utils.output import emit, render_json, resolved_config


@click.command("optimize")
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--n0", type=click.FloatRange(min=0.0), default=0.0, show_default=True, help="Occupation for modes without --n1/--n2.")
@click.option("--n1", type=click.FloatRange(min=0.0), default=None, help="Occupation of mode 1 [default: n0].")
@click.option("--n2", type=click.FloatRange(min=0.0), default=None, help="Occupation of mode 2 [default: n0].")
@click.option("--energy", type=click.FloatRange(min=0.0), default=4.0, show_default=True)
@click.option("--theta1", type=float, default=0.0, show_default=True)
@click.option("--theta2", type=float, default=0.0, show_default=True)
@out_option
@command_run
def optimize(
    alpha: float,
    n0: float,
    n1: float | None,
    n2: float | None,
    energy: float,
    theta1: float,
    theta2: float,
    out: Path | None,
):
    """Best two-mode seed on the energy shell: JSON OptimizationResult."""
    ctx = click.get_current_context()
    n1 = n0 if n1 is None else n1
    n2 = n0 if n2 is None else n2
    ctx.params.update(n1=n1, n2=n2)

    result = get_run_orchestrator().optimize(alpha, n1, n2, energy, theta1, theta2)
    emit(render_json(result, resolved_config()), out)
    if not result.converged:
        raise AppException(
            error_code=ERROR_OPT_NOT_CONVERGED,
            message="Optimizer stopped before convergence",
            exit_code=EXIT_NUMERICAL,
            details={"best_value": result.best_value, "objective_evals": result.objective_evals},
        )
