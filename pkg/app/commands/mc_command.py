from pathlib import Path

import click

from app.commands.options import out_option
from app.core.decorator import command_run
from app.core.dependency import get_run_orchestrator
from app.enumerations.receiver_enum import ReceiverKind
from app.services.estimator_service import MIN_REPETITIONS, MIN_SAMPLES
from app.utils.output import emit, render_json, resolved_config


@click.command("mc-crb")
@click.option("--m", "m_samples", type=click.IntRange(min=MIN_SAMPLES), default=100000, show_default=True, help="Outcomes per experiment.")
@click.option("--reps", type=click.IntRange(min=MIN_REPETITIONS), default=200, show_default=True, help="Independent experiments.")
@click.option("--seed", type=click.IntRange(min=0), required=True, help="Root seed; every repetition derives its own stream.")
@click.option(
    "--receiver",
    type=click.Choice([r.value for r in ReceiverKind]),
    default=ReceiverKind.HETERODYNE.value,
    show_default=True,
)
@click.option("--energy", type=click.FloatRange(min=0.0), default=4.0, show_default=True)
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--n0", type=click.FloatRange(min=0.0), default=0.0, show_default=True)
@click.option("--theta1", type=float, default=0.0, show_default=True)
@click.option("--theta2", type=float, default=0.0, show_default=True)
@click.option("--full-vector", is_flag=True, default=False, help="Estimate all phases instead of the v1 line only.")
@out_option
@command_run
def mc_crb(
    m_samples: int,
    reps: int,
    seed: int,
    receiver: str,
    energy: float,
    alpha: float,
    n0: float,
    theta1: float,
    theta2: float,
    full_vector: bool,
    out: Path | None,
):
    """Empirical MLE variance against the Cramer-Rao bound: JSON McReport."""
    report = get_run_orchestrator().mc_crb(
        ReceiverKind(receiver),
        m_samples,
        reps,
        seed,
        energy,
        alpha=alpha,
        n0=n0,
        thetas=(theta1, theta2),
        full_vector=full_vector,
    )
    emit(render_json(report, resolved_config()), out)
