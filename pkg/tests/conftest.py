import pytest

from chiralwalk.config import configure, reset_defaults


@pytest.fixture(autouse=True)
def reset_chiralwalk(tmp_path, monkeypatch):
    # Settings are global; every test starts from env defaults with progress
    # bars off and any log files kept inside its own tmp dir.
    monkeypatch.chdir(tmp_path)
    configure(progress=False, output_dir=tmp_path, log_to_file=False)
    yield
    reset_defaults()


@pytest.fixture
def small_chunks():
    """Force several ensemble chunks even for small sample counts."""
    configure(chunk_size=3)
    yield
    configure(chunk_size=16)
