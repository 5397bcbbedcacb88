"""Task pool shared by the ensemble drivers.

Every sample-level computation (trajectory chunks, eigensolves, transfer
chains) funnels through :func:`map_ordered`, so the scheduling policy lives in
one place. numpy releases the GIL inside the heavy kernels.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from chiralwalk.config import settings

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: int | None) -> int:
    return max(1, settings.workers if workers is None else workers)


def map_ordered(
    fn: Callable[[T], R], items: Iterable[T], workers: int | None = None
) -> Iterator[R]:
    """Apply ``fn`` to every item, yielding results in submission order.

    Callers reduce in the order results are yielded, so the output is
    bit-identical for any worker count. ``workers <= 1`` runs inline without a
    pool.
    """
    count = resolve_workers(workers)
    if count == 1:
        for item in items:
            yield fn(item)
        return
    with ThreadPoolExecutor(max_workers=count, thread_name_prefix="chiralwalk") as pool:
        # Executor.map preserves input order regardless of completion order.
        yield from pool.map(fn, items)
