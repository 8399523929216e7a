import json
from pathlib import Path

import click
import pandas as pd
from pydantic import BaseModel

from app import __version__
from app.schemas.run import RunConfig


def resolved_config(exclude: tuple[str, ...] = ("out",)) -> RunConfig:
    """Configuration of the running command with every default filled in."""
    ctx = click.get_current_context()
    options = {k: v for k, v in ctx.params.items() if k not in exclude}
    return RunConfig(command=ctx.info_name or "", options=options, version=__version__)


def render_csv(df: pd.DataFrame, config: RunConfig) -> str:
    """'#' JSON header line, then a header row and newline-terminated rows in '.' decimal."""
    body = df.to_csv(index=False, lineterminator="\n", decimal=".")
    return config.header_line() + "\n" + body


def render_json(result: BaseModel, config: RunConfig) -> str:
    payload = {"config": config.model_dump(mode="json"), "result": result.model_dump(mode="json")}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit(text: str, out: Path | None) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
