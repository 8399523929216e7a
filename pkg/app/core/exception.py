from typing import Any, Optional

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL = 3


class AppException(Exception):

    def __init__(
        self,
        error_code: str,
        message: str | None = None,
        exit_code: int = EXIT_INVALID_INPUT,
        details: Optional[dict[str, Any]] = None,
    ):
        """
        Args:
            error_code: Error code constant (e.g., ERROR_PROBE_NEGATIVE_OCCUPATION)
            message: Human-readable message (falls back to error_code if None)
            exit_code: Process exit code used when the error reaches the CLI
            details: Additional context data
        """
        self.error_code = error_code
        self.exit_code = exit_code
        self.details = details or {}
        self.message = message or error_code

        super().__init__(self.message)

    @property
    def detail(self) -> dict[str, Any]:
        return {
            "error_code": self.error_code,
            "message": self.message,
            "details": self.details,
        }
