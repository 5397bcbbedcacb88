"""Tests for configuration and settings."""

import threading
from pathlib import Path

import pytest

from chiralwalk.config import Settings, configure, reset_defaults, settings


def test_default_settings(monkeypatch):
    for var in ("CHIRALWALK_WORKERS", "CHIRALWALK_CHUNK_SIZE", "CHIRALWALK_SEED", "CHIRALWALK_DOS_BINS"):
        monkeypatch.delenv(var, raising=False)
    s = Settings()
    assert s.workers == 1
    assert s.chunk_size == 16
    assert s.seed == 0
    assert s.dos_bins == 1024
    assert s.renorm_interval == 16
    assert s.lyapunov_blocks == 100
    assert s.max_dense_sites == 20_000
    # Absolute from construction so os.chdir() can't move the log dir.
    assert s.output_dir.is_absolute()
    assert s.log_dir == s.output_dir / "_logs"


def test_configure_workers():
    configure(workers=4)
    assert settings.workers == 4


def test_configure_output_dir_accepts_str(tmp_path):
    configure(output_dir=str(tmp_path / "runs"))
    assert settings.output_dir == (tmp_path / "runs").resolve()


def test_configure_multiple_settings():
    configure(chunk_size=8, renorm_interval=4, lyapunov_blocks=10, dos_bins=256, seed=7)
    assert settings.chunk_size == 8
    assert settings.renorm_interval == 4
    assert settings.lyapunov_blocks == 10
    assert settings.dos_bins == 256
    assert settings.seed == 7


def test_configure_none_leaves_value_alone():
    configure(workers=3)
    configure(workers=None, chunk_size=5)
    assert settings.workers == 3
    assert settings.chunk_size == 5


@pytest.mark.parametrize("name", ["workers", "chunk_size", "renorm_interval", "dos_bins"])
def test_configure_rejects_non_positive(name):
    with pytest.raises(ValueError):
        configure(**{name: 0})


def test_configure_rejects_negative_seed():
    with pytest.raises(ValueError):
        configure(seed=-1)


def test_debug_turns_on_debug_logging_and_silences_progress():
    configure(debug=True)
    assert settings.log_level == "DEBUG"
    assert settings.log_to_file is True
    assert settings.progress is False


def test_log_level_is_uppercased():
    configure(log_level="info")
    assert settings.log_level == "INFO"


def test_reset_defaults():
    configure(workers=6, seed=11)
    reset_defaults()
    assert settings.workers == Settings().workers
    assert settings.seed == Settings().seed


def test_settings_copy():
    configure(chunk_size=7)
    original = settings.copy()
    configure(chunk_size=9)
    assert original.chunk_size == 7
    assert settings.chunk_size == 9


def test_reset_defaults_rereads_env_uniformly(monkeypatch, tmp_path):
    monkeypatch.setenv("CHIRALWALK_WORKERS", "5")
    monkeypatch.setenv("CHIRALWALK_CHUNK_SIZE", "32")
    monkeypatch.setenv("CHIRALWALK_SEED", "42")
    monkeypatch.setenv("CHIRALWALK_OUTPUT_DIR", str(tmp_path / "env_out"))
    monkeypatch.setenv("CHIRALWALK_PROGRESS", "0")
    reset_defaults()
    assert settings.workers == 5
    assert settings.chunk_size == 32
    assert settings.seed == 42
    assert settings.output_dir == Path(tmp_path / "env_out").resolve()
    assert settings.progress is False


def test_concurrent_configure_is_atomic():
    """Each thread writes a matched pair; afterwards the pair must agree."""

    def worker(i: int) -> None:
        for _ in range(50):
            configure(workers=i + 1, chunk_size=100 + i + 1)

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    assert settings.chunk_size - 100 == settings.workers
