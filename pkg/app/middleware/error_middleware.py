import functools
import json
import traceback
from typing import Any, Callable

import click
from pydantic import ValidationError

from app.constants.error_constant import ERROR_INTERNAL_UNEXPECTED, ERROR_VAL_INVALID_INPUT
from app.core.exception import EXIT_INVALID_INPUT, EXIT_UNEXPECTED, AppException
from app.core.logging_config import get_logger

logger = get_logger(__name__)


def _fail(body: dict[str, Any], exit_code: int) -> None:
    click.echo(json.dumps(body, default=str), err=True)
    raise click.exceptions.Exit(exit_code)


def error_handling(func: Callable) -> Callable:
    """
    Wrap a command callback so that failures become an exit code and a JSON error body on stderr
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        command = click.get_current_context().info_name
        try:
            return func(*args, **kwargs)

        except AppException as exc:
            # Custom app exceptions - already formatted
            logger.warning(
                f"Application error: {exc.error_code}",
                extra={
                    "error_code": exc.error_code,
                    "command": command,
                    "details": exc.details,
                },
            )
            _fail(exc.detail, exc.exit_code)

        except ValidationError as exc:
            logger.warning(
                "Invalid input",
                extra={"command": command, "errors": exc.errors(include_url=False)},
            )
            _fail(
                {
                    "error_code": ERROR_VAL_INVALID_INPUT,
                    "message": "Invalid input",
                    "details": {"errors": json.loads(exc.json(include_url=False))},
                },
                EXIT_INVALID_INPUT,
            )

        except (click.ClickException, click.exceptions.Exit, click.exceptions.Abort):
            raise

        except Exception as exc:
            # Unexpected errors
            logger.error(
                "Unhandled exception occurred",
                exc_info=True,
                extra={
                    "command": command,
                    "error_type": type(exc).__name__,
                    "traceback": traceback.format_exc(),
                },
            )
            _fail(
                {
                    "error_code": ERROR_INTERNAL_UNEXPECTED,
                    "message": "An unexpected error occurred",
                    "details": {"error_type": type(exc).__name__},
                },
                EXIT_UNEXPECTED,
            )

    return wrapper
