import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS_DIR))


@pytest.fixture
def data_dir() -> Path:
    return TESTS_DIR / "data"


@pytest.fixture
def out_dir(tmp_path) -> str:
    return str(tmp_path / "out")
