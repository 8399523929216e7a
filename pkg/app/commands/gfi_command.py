from pathlib import Path

import click
import pandas as pd

from app.core.decorator import command_run
from app.core.dependency import get_run_orchestrator
from app.commands.options import out_option
from app.schemas.probe import ChannelSpec
from app.utils.output import emit, render_csv, resolved_config


@click.command("gfi")
@click.option("--alpha", type=float, default=1.0, show_default=True, help="Probe amplitude per mode.")
@click.option("--n0", type=click.FloatRange(min=0.0), default=0.0, show_default=True, help="Thermal occupation per mode.")
@click.option("--energy", type=click.FloatRange(min=0.0), default=4.0, show_default=True, help="Measurement energy E.")
@click.option("--n-modes", type=click.IntRange(min=1), default=2, show_default=True)
@click.option(
    "--v11-sq",
    type=click.FloatRange(min=0.0, max=1.0, min_open=True),
    default=None,
    help="Squared dominant entry of v1 for the unbalanced value [default: 1/n-modes].",
)
@click.option("--eta", type=click.FloatRange(min=0.0, max=1.0), default=1.0, show_default=True, help="Channel amplitude transmissivity.")
@click.option("--n-channel", type=click.FloatRange(min=0.0), default=0.0, show_default=True, help="Thermal occupation added by the channel.")
@out_option
@command_run
def gfi(
    alpha: float,
    n0: float,
    energy: float,
    n_modes: int,
    v11_sq: float | None,
    eta: float,
    n_channel: float,
    out: Path | None,
):
    """Closed-form QFI, GFI, heterodyne and separable values as a labeled table."""
    channel = None if eta == 1.0 and n_channel == 0.0 else ChannelSpec(eta=eta, n_channel=n_channel)
    summary = get_run_orchestrator().gfi_summary(alpha, n0, energy, n_modes, v11_sq, channel)

    table = pd.DataFrame(
        [
            ("QFI", summary.qfi),
            ("GFI", summary.gfi),
            ("heterodyne", summary.heterodyne),
            ("separable_balanced", summary.separable_balanced),
            ("separable_unbalanced", summary.separable_unbalanced),
            ("eg_balanced", summary.entanglement_gain_balanced),
            ("eg_unbalanced", summary.entanglement_gain_unbalanced),
            ("seed_entropy", summary.seed_entropy),
        ],
        columns=["quantity", "value"],
    )
    emit(render_csv(table, resolved_config()), out)
