from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def atax_sass_path() -> Path:
    return DATA_DIR / "atax_kepler.sass.txt"


@pytest.fixture
def atax_report_path() -> Path:
    return DATA_DIR / "atax_kepler.ptxas.txt"
