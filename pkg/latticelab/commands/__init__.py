import importlib
import logging
from typing import Callable, Dict, List, Optional

from ..errors import InputError

logger = logging.getLogger(__name__)

commands: Dict[str, Callable] = {}


def register_command(name: str) -> Callable:
    """Register a command handler under its CLI name."""

    def decorator(func: Callable) -> Callable:
        commands[name] = func
        return func

    return decorator


def module_name(command: str) -> str:
    return command.replace("-", "_")


def load_commands(command_names: Optional[List[str]] = None):
    """Load command modules from the 'commands' package."""
    for name in command_names or []:
        try:
            importlib.import_module(f".{module_name(name)}", __package__)
        except ImportError:
            logger.warning("Command '%s' not found.", name)


def run_command(config) -> int:
    handler = commands.get(config.command)
    if handler is None:
        raise InputError(f"unknown command {config.command!r}")
    logger.info("running %s", config.command)
    code = handler(config)
    logger.info("%s finished with exit code %d", config.command, code)
    return code


def require(value, flag: str, command: str):
    if value is None:
        raise InputError(f"{flag} is required for {command}")
    return value


def print_table(headers: List[str], rows: List[List[object]]):
    """Tab-separated table on stdout."""
    print("\t".join(headers))
    for row in rows:
        print("\t".join(str(cell) for cell in row))


def approx_point(lattice, u) -> str:
    return "(" + ", ".join(f"{z.approx():.6g}" for z in lattice.point_intervals(u)) + ")"
