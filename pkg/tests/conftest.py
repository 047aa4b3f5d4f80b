import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpus import CORPUS  # noqa: E402

from foliations import invariants as inv  # noqa: E402


@pytest.fixture(scope="session")
def corpus_reports():
    """Full invariant reports for every corpus germ, computed once."""
    return {germ.name: inv.analyze(germ.pq) for germ in CORPUS}
