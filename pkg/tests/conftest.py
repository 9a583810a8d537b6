import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for tests.oracles imports

FIXTURES = Path(__file__).parent.parent / "fixtures"
DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def dove_doc():
    from cnrank import parse_annotated_document

    return parse_annotated_document(FIXTURES.joinpath("dove.json").read_bytes())


@pytest.fixture(scope="session")
def dove_raw():
    return json.loads(FIXTURES.joinpath("dove.json").read_text())


@pytest.fixture(scope="session")
def sample10_path():
    return FIXTURES / "sample10.json"


@pytest.fixture(scope="session")
def sample10_doc(sample10_path):
    from cnrank import parse_annotated_document

    return parse_annotated_document(sample10_path.read_bytes())
