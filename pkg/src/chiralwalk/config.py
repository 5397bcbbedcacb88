from __future__ import annotations

import builtins
import os
import threading
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from a local .env if present so experiment
# defaults (workers, seed, log level) can live next to the data they produce.
load_dotenv()


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


@dataclass
class Settings:
    """Runtime configuration for chiralwalk.

    Values are mutable at runtime via :func:`configure`. Every env-derived field
    uses a default_factory so that constructing a fresh ``Settings()`` (as
    :func:`reset_defaults` does) re-reads the current environment uniformly.

    None of these knobs changes a computed number except ``renorm_interval``,
    ``lyapunov_blocks`` and ``dos_bins``, which are echoed into every output
    header so a rerun from the header reproduces the file.
    """

    # Task-pool size. Reductions run in task order, so this only changes speed.
    workers: int = field(default_factory=lambda: _env_int("CHIRALWALK_WORKERS", 1))
    # Samples per ensemble task; fixed independently of workers.
    chunk_size: int = field(default_factory=lambda: _env_int("CHIRALWALK_CHUNK_SIZE", 16))
    max_dense_sites: int = field(
        default_factory=lambda: _env_int("CHIRALWALK_MAX_DENSE_SITES", 20_000)
    )
    renorm_interval: int = field(
        default_factory=lambda: _env_int("CHIRALWALK_RENORM_INTERVAL", 16)
    )
    lyapunov_blocks: int = field(
        default_factory=lambda: _env_int("CHIRALWALK_LYAPUNOV_BLOCKS", 100)
    )
    dos_bins: int = field(default_factory=lambda: _env_int("CHIRALWALK_DOS_BINS", 1024))
    seed: int = field(default_factory=lambda: _env_int("CHIRALWALK_SEED", 0))
    progress: bool = field(default_factory=lambda: os.getenv("CHIRALWALK_PROGRESS", "1") != "0")
    # Resolved at construction so a later os.chdir() can't move the log dir.
    output_dir: Path = field(
        default_factory=lambda: Path(os.getenv("CHIRALWALK_OUTPUT_DIR", ".")).resolve()
    )
    debug: bool = field(default_factory=lambda: os.getenv("CHIRALWALK_DEBUG", "0") == "1")
    log_level: str = field(
        default_factory=lambda: os.getenv("CHIRALWALK_LOG_LEVEL", "WARNING").upper()
    )
    # Opt-in: a library must not create files in the user's CWD just on import.
    log_to_file: bool = field(
        default_factory=lambda: os.getenv("CHIRALWALK_LOG_TO_FILE", "0") == "1"
    )

    def copy(self) -> "Settings":
        # Field-driven so adding a Settings field can't silently miss the copy.
        return Settings(**{f.name: getattr(self, f.name) for f in fields(self)})

    @property
    def log_dir(self) -> Path:
        return self.output_dir / "_logs"


# Persist the settings object across module reloads so every import shares
# the same instance.
if getattr(builtins, "_chiralwalk_settings", None) is None:
    builtins._chiralwalk_settings = Settings()  # type: ignore[attr-defined]  # dynamic stash on builtins
settings: Settings = builtins._chiralwalk_settings  # type: ignore[attr-defined]

# Serializes configure()/reset_defaults() WRITERS so each caller's full update
# lands as a unit. Readers are lock-free.
_settings_lock = threading.Lock()


def _load_logging_module():
    try:
        from chiralwalk import logging as logging_mod

        return logging_mod
    except Exception:
        return None


def _check_positive(name: str, value: Optional[int]) -> None:
    if value is not None and value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")


def configure(
    *,
    workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
    max_dense_sites: Optional[int] = None,
    renorm_interval: Optional[int] = None,
    lyapunov_blocks: Optional[int] = None,
    dos_bins: Optional[int] = None,
    seed: Optional[int] = None,
    progress: Optional[bool] = None,
    output_dir: Optional[str | Path] = None,
    debug: Optional[bool] = None,
    log_level: Optional[str] = None,
    log_to_file: Optional[bool] = None,
) -> None:
    """Update global settings in-place.

    All parameters are optional; only provided values overwrite current
    settings. Accepts both strings and :class:`pathlib.Path` for ``output_dir``.
    """
    for name, value in (
        ("workers", workers),
        ("chunk_size", chunk_size),
        ("max_dense_sites", max_dense_sites),
        ("renorm_interval", renorm_interval),
        ("lyapunov_blocks", lyapunov_blocks),
        ("dos_bins", dos_bins),
    ):
        _check_positive(name, value)
    if seed is not None and seed < 0:
        raise ValueError("seed must be non-negative")

    updates = {
        "workers": workers,
        "chunk_size": chunk_size,
        "max_dense_sites": max_dense_sites,
        "renorm_interval": renorm_interval,
        "lyapunov_blocks": lyapunov_blocks,
        "dos_bins": dos_bins,
        "seed": seed,
        "progress": progress,
        "output_dir": Path(output_dir).resolve() if output_dir is not None else None,
        "debug": debug,
        "log_level": log_level.upper() if isinstance(log_level, str) else log_level,
        "log_to_file": log_to_file,
    }

    # If debug explicitly enabled, default to DEBUG level and file logging unless
    # caller provided overrides.
    if debug is True:
        if updates["log_level"] is None:
            updates["log_level"] = "DEBUG"
        if updates["log_to_file"] is None:
            updates["log_to_file"] = True
        # Progress bars and heavy debug output don't mix nicely
        if updates["progress"] is None:
            updates["progress"] = False

    with _settings_lock:
        for attr, value in updates.items():
            if value is not None:
                setattr(settings, attr, value)

    logging_mod = _load_logging_module()
    if logging_mod:
        logging_mod.configure_logging(force=True)


def reset_defaults() -> None:
    """Reset settings to environment-driven defaults (useful for tests)."""
    defaults = Settings()
    with _settings_lock:
        for f in fields(defaults):
            setattr(settings, f.name, getattr(defaults, f.name))

    logging_mod = _load_logging_module()
    if logging_mod:
        logging_mod.configure_logging(force=True)
