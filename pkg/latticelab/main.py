import sys
from typing import List, Optional

from .cli import build_config, parse_args
from .runner import run


def main(argv: Optional[List[str]] = None) -> int:
    """
    The main entry point for the application.
    It parses command-line arguments and runs the requested command.
    """
    args = parse_args(argv)
    return run(build_config(args))


if __name__ == "__main__":
    sys.exit(main())
