from typing import Any, Optional

from ..lattice_core import ScalarKind
from . import register_validator


@register_validator
def validate_theta(kind: str, payload: Any) -> Optional[str]:
    """Theta files carry `m`, `n` and an n x m `rows` matrix."""
    if kind != "theta":
        return None
    if not isinstance(payload, dict):
        return "theta file must hold a JSON object"
    m, n, rows = payload.get("m"), payload.get("n"), payload.get("rows")
    if type(m) is not int or type(n) is not int or m < 1 or n < 1:
        return "'m' and 'n' must be positive integers"
    if not isinstance(rows, list) or len(rows) != n:
        return f"'rows' must hold n = {n} rows"
    if any(not isinstance(row, list) or len(row) != m for row in rows):
        return f"every row must hold m = {m} entries"
    if any(isinstance(x, bool) or not isinstance(x, (int, float, str)) for row in rows for x in row):
        return "theta entries must be numbers or strings"
    if payload.get("minpoly") is not None and not isinstance(payload["minpoly"], str):
        return "'minpoly' must be a string"
    scalar = payload.get("scalar")
    if scalar is not None and scalar not in {k.value for k in ScalarKind}:
        return f"unknown scalar kind {scalar!r}"
    embedding = payload.get("embedding")
    if embedding is not None and type(embedding) is not int:
        return "'embedding' must be an integer"
    return None
