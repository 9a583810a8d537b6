from pathlib import Path

import pytest

pytest.FIXTURES = Path(__file__).resolve().parent.parent.parent / "fixtures"
