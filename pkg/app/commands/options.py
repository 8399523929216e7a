from pathlib import Path
from typing import Callable

import click


def out_option(func: Callable) -> Callable:
    return click.option(
        "--out",
        type=click.Path(dir_okay=False, writable=True, path_type=Path),
        default=None,
        help="Write the result here instead of standard output.",
    )(func)


def float_list(ctx: click.Context, param: click.Parameter, value: str | None) -> list[float] | None:
    """Parse a comma-separated list of numbers."""
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")
