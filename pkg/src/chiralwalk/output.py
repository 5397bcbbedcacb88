"""Result files: CSV tables with a ``#`` metadata header and JSON sidecars.

Table layout::

    # chiralwalk 0.1.0
    # command: dos
    # config: {"bins":1024,...}
    # <free-form comment lines>
    omega,rho
    -3.1385246...,0.0
    ...

The header carries everything needed to rerun the command; no timestamps, so
a rerun reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from chiralwalk.exceptions import ConfigError

_VERSION_PREFIX = "# chiralwalk "
_COMMAND_PREFIX = "# command: "
_CONFIG_PREFIX = "# config: "


def atomic_write(path: Path, text: str) -> None:
    """Write ``text`` to ``path`` atomically (temp file + os.replace).

    Readers see either the old file or the complete new one, never a partial
    write.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=_jsonable)


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def format_cell(value: Any) -> str:
    """Integers as integers, floats with ``repr`` so they round-trip exactly."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return "nan"
    return repr(float(value))


def render_table(
    command: str,
    config: Mapping[str, Any],
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    comments: Sequence[str] = (),
) -> str:
    from chiralwalk import __version__

    buffer = io.StringIO()
    buffer.write(f"{_VERSION_PREFIX}{__version__}\n")
    buffer.write(f"{_COMMAND_PREFIX}{command}\n")
    buffer.write(f"{_CONFIG_PREFIX}{canonical_json(dict(config))}\n")
    for line in comments:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row has {len(row)} cells, expected {len(columns)}")
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()


def write_table(
    path: Path,
    command: str,
    config: Mapping[str, Any],
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    comments: Sequence[str] = (),
) -> Path:
    atomic_write(Path(path), render_table(command, config, columns, rows, comments))
    return Path(path)


def write_json(path: Path, payload: Mapping[str, Any]) -> Path:
    text = json.dumps(payload, sort_keys=True, indent=2, default=_jsonable) + "\n"
    atomic_write(Path(path), text)
    return Path(path)


def sidecar_path(path: Path, suffix: str) -> Path:
    """``results.csv`` -> ``results.<suffix>``."""
    path = Path(path)
    return path.with_name(f"{path.stem}.{suffix}")


@dataclass
class Table:
    version: str
    command: str
    config: dict[str, Any]
    columns: dict[str, np.ndarray]
    comments: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def require(self, *names: str) -> None:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise ConfigError(f"table is missing column(s): {', '.join(missing)}")


def read_table(path: Path) -> Table:
    """Parse a file written by :func:`write_table`.

    Raises ConfigError for anything that does not follow the layout.
    """
    lines = Path(path).read_text().splitlines()
    if len(lines) < 4:
        raise ConfigError(f"{path}: too short to be a chiralwalk table")
    if not lines[0].startswith(_VERSION_PREFIX):
        raise ConfigError(f"{path}: missing '{_VERSION_PREFIX.strip()}' header line")
    if not lines[1].startswith(_COMMAND_PREFIX):
        raise ConfigError(f"{path}: missing '# command:' header line")
    if not lines[2].startswith(_CONFIG_PREFIX):
        raise ConfigError(f"{path}: missing '# config:' header line")
    try:
        config = json.loads(lines[2][len(_CONFIG_PREFIX) :])
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: config header is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError(f"{path}: config header must be a JSON object")

    comments, body_start = [], 3
    while body_start < len(lines) and lines[body_start].startswith("#"):
        comments.append(lines[body_start][1:].strip())
        body_start += 1
    body = list(csv.reader(lines[body_start:]))
    if not body or not body[0]:
        raise ConfigError(f"{path}: missing column header row")
    names = [name.strip() for name in body[0]]
    if len(set(names)) != len(names):
        raise ConfigError(f"{path}: duplicate column names")

    data: list[list[float]] = []
    for number, row in enumerate(body[1:], start=body_start + 2):
        if not row:
            continue
        if len(row) != len(names):
            raise ConfigError(
                f"{path}:{number}: expected {len(names)} cells, got {len(row)}"
            )
        try:
            data.append([float(cell) for cell in row])
        except ValueError as exc:
            raise ConfigError(f"{path}:{number}: non-numeric cell ({exc})") from exc

    values = np.array(data, dtype=np.float64).reshape(len(data), len(names))
    return Table(
        version=lines[0][len(_VERSION_PREFIX) :].strip(),
        command=lines[1][len(_COMMAND_PREFIX) :].strip(),
        config=config,
        columns={name: values[:, i] for i, name in enumerate(names)},
        comments=comments,
    )
