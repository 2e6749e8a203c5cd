import logging

from .cli import RunConfig
from .commands import load_commands, run_command
from .errors import LatticeLabError
from .validators import load_validators

logger = logging.getLogger(__name__)


def run(config: RunConfig) -> int:
    """Configure logging, load validators and the command module, run it, map errors to exit codes."""
    logging.basicConfig(
        level=logging.DEBUG if config.debug else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    load_validators(list(config.validators))
    load_commands([config.command])
    try:
        return run_command(config)
    except LatticeLabError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
