import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from polycert.trace import elaborate, parse_trace

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def map_text() -> str:
    return (DATA / "map.onijn").read_text()


@pytest.fixture(scope="session")
def map_system(map_text):
    """(afs, interpretation) of the map trace, elaborated once."""
    return elaborate(parse_trace(map_text))
