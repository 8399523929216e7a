from typing import Callable

from app.middleware.error_middleware import error_handling
from app.middleware.logging_middleware import run_logging


def command_run(func: Callable) -> Callable:
    """Apply the run logging and error handling wrappers, logging outermost."""
    return run_logging(error_handling(func))
