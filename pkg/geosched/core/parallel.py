"""Thread pool helpers for evaluating independent work items."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, Optional, TypeVar

from geosched.config import get_config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def worker_count(threads: Optional[int] = None) -> int:
    """Resolve the worker count, capped by GEOSCHED_THREADS."""
    configured = get_config().threads
    if threads is None:
        return configured
    return max(1, min(int(threads), configured))


def parallel_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    threads: Optional[int] = None,
) -> list[R]:
    """
    Apply ``fn`` to every item, preserving input order.

    Runs inline when a single worker is configured. ``fn`` must be pure for
    results to be independent of the worker count.
    """
    items = list(items)
    workers = worker_count(threads)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


def iter_parallel(
    fn: Callable[[T], R],
    items: Iterable[T],
    threads: Optional[int] = None,
) -> Iterator[R]:
    """Like parallel_map, but yields results in order as they complete."""
    items = list(items)
    workers = worker_count(threads)
    if workers <= 1:
        for item in items:
            yield fn(item)
        return
    logger.debug(f"Running {len(items)} items on {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        yield from executor.map(fn, items)
