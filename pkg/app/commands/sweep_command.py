from pathlib import Path

import click
import numpy as np

from app.commands.options import float_list, out_option
from app.core.decorator import command_run
from app.core.dependency import get_run_orchestrator
from app.enumerations.receiver_enum import EgMode
from app.utils.output import emit, render_csv, resolved_config

DEFAULT_PARAMS = {
    EgMode.BALANCED: [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
    EgMode.UNBALANCED: [0.5, 0.6, 0.7, 0.8, 0.9],
}


def default_energy_grid() -> list[float]:
    return [0.0] + np.logspace(-2, 8, 41).tolist()


@click.command("sweep-eg")
@click.option(
    "--mode",
    type=click.Choice([m.value for m in EgMode]),
    default=EgMode.BALANCED.value,
    show_default=True,
)
@click.option(
    "--param-grid",
    callback=float_list,
    default=None,
    help="Comma-separated mode counts (balanced) or (v1)_1^2 values (unbalanced).",
)
@click.option("--energy-grid", callback=float_list, default=None, help="Comma-separated energies [default: 0 and 41 log-spaced points in 1e-2..1e8].")
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--n0", type=click.FloatRange(min=0.0), default=0.0, show_default=True)
@out_option
@command_run
def sweep_eg(mode: str, param_grid, energy_grid, alpha: float, n0: float, out: Path | None):
    """Entanglement gain curves: CSV columns (E, param, eg)."""
    ctx = click.get_current_context()
    eg_mode = EgMode(mode)
    params = param_grid if param_grid is not None else DEFAULT_PARAMS[eg_mode]
    energies = energy_grid if energy_grid is not None else default_energy_grid()

    if eg_mode == EgMode.BALANCED and any(p < 1 or p != int(p) for p in params):
        raise click.BadParameter("balanced mode counts must be positive integers", param_hint="--param-grid")
    if eg_mode == EgMode.UNBALANCED and any(not 0.0 < p <= 1.0 for p in params):
        raise click.BadParameter("(v1)_1^2 must lie in (0, 1]", param_hint="--param-grid")
    if any(e < 0 for e in energies):
        raise click.BadParameter("energies must be non-negative", param_hint="--energy-grid")

    ctx.params.update(param_grid=params, energy_grid=energies)
    df = get_run_orchestrator().eg_curve(eg_mode, params, energies, alpha, n0)
    emit(render_csv(df, resolved_config()), out)


@click.command("fir-map")
@click.option("--theta-steps", type=click.IntRange(min=2), default=21, show_default=True, help="Grid points per axis on [-pi, pi].")
@click.option("--energy", type=click.FloatRange(min=0.0), default=1e8, show_default=True)
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--n0", type=click.FloatRange(min=0.0), default=0.0, show_default=True)
@out_option
@command_run
def fir_map(theta_steps: int, energy: float, alpha: float, n0: float, out: Path | None):
    """Fisher information ratio of the theta=0 optimal receiver: CSV (theta1, theta2, fir)."""
    df = get_run_orchestrator().fir_map(theta_steps, energy, alpha, n0)
    emit(render_csv(df, resolved_config()), out)


@click.command("noniso-map")
@click.option("--n1-max", type=click.FloatRange(min=0.0), default=2.0, show_default=True)
@click.option("--n2-max", type=click.FloatRange(min=0.0), default=2.0, show_default=True)
@click.option("--steps", type=click.IntRange(min=1), default=21, show_default=True)
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--energy", type=click.FloatRange(min=0.0), default=4.0, show_default=True)
@out_option
@command_run
def noniso_map(n1_max: float, n2_max: float, steps: int, alpha: float, energy: float, out: Path | None):
    """Maximal F_tilde_11 for non-isothermal probes: CSV (n1, n2, best_value, entropy)."""
    df = get_run_orchestrator().noniso_map(n1_max, n2_max, steps, alpha, energy)
    emit(render_csv(df, resolved_config()), out)
