"""Entry point for running gauge-frontier as a module."""

import sys

from .cli import main as cli_main


def main() -> None:
    """Run the CLI and exit with its status."""
    try:
        sys.exit(cli_main())
    except KeyboardInterrupt:
        sys.exit(130)


if __name__ == "__main__":
    main()
