import importlib
import logging
import sys
from typing import Any, Callable, List, Optional

from ..errors import ParseError

logger = logging.getLogger(__name__)

validators: List[Callable] = []

DEFAULT_VALIDATORS = ["lattice", "theta"]


def register_validator(func: Callable):
    """Register an input-payload validator."""
    validators.append(func)
    return func


def load_validators(validator_names: Optional[List[str]] = None):
    """Load validators from the 'validators' package."""
    # Clear existing validators to avoid duplicates during reloads
    validators.clear()

    for name in validator_names or []:
        qualified = f"{__package__}.{name}"
        try:
            if qualified in sys.modules:
                importlib.reload(sys.modules[qualified])
            else:
                importlib.import_module(f".{name}", __package__)
        except ImportError:
            logger.warning("Validator '%s' not found.", name)


def run_validators(kind: str, payload: Any, source: str = "<input>") -> None:
    """Run all registered validators; the first complaint becomes a ParseError."""
    for validator_func in validators:
        problem = validator_func(kind, payload)
        if problem:
            logger.debug("%s rejected by %s: %s", source, validator_func.__name__, problem)
            raise ParseError(f"{source}: {problem}")
