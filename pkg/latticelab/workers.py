"""Thread-pool map whose results come back in input order."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger(__name__)

A = TypeVar("A")
R = TypeVar("R")


def deterministic_map(fn: Callable[[A], R], items: Iterable[A], threads: int = 1) -> List[R]:
    """Apply `fn` to every item; the output order never depends on `threads`."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    workers = min(threads, len(items))
    logger.debug("mapping %d tasks over %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
