import functools
import time
import uuid
from typing import Callable

import click

from app.core.logging_config import command_var, get_logger, run_id_var

logger = get_logger(__name__)


def run_logging(func: Callable) -> Callable:
    """Stamp a run id on every record of one command run and log its start, end and duration"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        run_id_token = run_id_var.set(str(uuid.uuid4()))
        command_token = command_var.set(ctx.info_name or "")
        start_time = time.time()

        logger.info("Run started", extra={"params": ctx.params})

        try:
            result = func(*args, **kwargs)
            logger.info(
                "Run completed",
                extra={"duration_ms": round((time.time() - start_time) * 1000, 2)},
            )
            return result
        except click.exceptions.Exit as e:
            logger.info(
                "Run failed" if e.exit_code else "Run completed",
                extra={
                    "exit_code": e.exit_code,
                    "duration_ms": round((time.time() - start_time) * 1000, 2),
                },
            )
            raise
        finally:
            run_id_var.reset(run_id_token)
            command_var.reset(command_token)

    return wrapper
