from __future__ import annotations

from contextlib import contextmanager
from typing import Callable, Iterator

from rich.console import Console
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
)

from chiralwalk.config import settings

_console = Console(stderr=True)


def _noop(_: int = 1) -> None:
    return None


@contextmanager
def progress(description: str, total: int | None = None) -> Iterator[Callable[[int], None]]:
    """Show a transient progress bar and yield an ``advance(n)`` callable.

    Output goes to stderr so data written to stdout stays clean.
    """
    if not settings.progress:
        yield _noop
        return

    with Progress(
        SpinnerColumn(),
        TextColumn("[bold blue]{task.description}"),
        BarColumn(bar_width=30),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=_console,
        transient=True,
    ) as bar:
        task_id = bar.add_task(description, total=total)

        def advance(n: int = 1) -> None:
            bar.update(task_id, advance=n)

        try:
            yield advance
        finally:
            bar.stop()
