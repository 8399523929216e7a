"""
Command-line entry point
"""

from app.commands import cli


def main() -> None:
    cli(prog_name="gaussian-receiver")


if __name__ == "__main__":
    main()
