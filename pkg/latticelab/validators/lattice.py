import logging
from typing import Any, Optional

from ..lattice_core import ScalarKind
from . import register_validator

logger = logging.getLogger(__name__)

_KINDS = {k.value for k in ScalarKind}


def _is_entry(value: Any) -> bool:
    return isinstance(value, (int, float, str)) and not isinstance(value, bool)


@register_validator
def validate_lattice(kind: str, payload: Any) -> Optional[str]:
    """
    Check the shape of a lattice file before it is parsed.

    A lattice payload is an object with a `scalar` kind, an optional `dim`, a square `basis` of
    numbers or strings, a `minpoly` string for number-field lattices and an optional `embeddings`
    array with one root index per coordinate.
    """
    if kind != "lattice":
        return None
    if not isinstance(payload, dict):
        return "lattice file must hold a JSON object"
    scalar_kind = payload.get("scalar", ScalarKind.RATIONAL.value)
    if scalar_kind not in _KINDS:
        return f"unknown scalar kind {scalar_kind!r}; expected one of {sorted(_KINDS)}"
    basis = payload.get("basis")
    if not isinstance(basis, list) or not basis:
        return "missing or empty 'basis'"
    if any(not isinstance(row, list) for row in basis):
        return "'basis' must be a list of rows"
    d = len(basis)
    if any(len(row) != d for row in basis):
        return f"'basis' must be square, got {d} rows of lengths {[len(row) for row in basis]}"
    if "dim" in payload and payload["dim"] != d:
        return f"'dim' is {payload['dim']!r} but the basis has {d} rows"
    if any(not _is_entry(x) for row in basis for x in row):
        return "basis entries must be numbers or strings"
    if scalar_kind == ScalarKind.NUMBERFIELD.value:
        if not isinstance(payload.get("minpoly"), str):
            return "a numberfield lattice needs a 'minpoly' string"
        embeddings = payload.get("embeddings")
        if embeddings is not None:
            if not isinstance(embeddings, list) or any(type(e) is not int for e in embeddings):
                return "'embeddings' must be a list of integers"
            if len(embeddings) != d:
                return f"{len(embeddings)} embeddings for a {d}-dimensional basis"
    elif "minpoly" in payload and payload["minpoly"] is not None:
        logger.debug("ignoring 'minpoly' on a %s lattice", scalar_kind)
    return None
