import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tt2.corpus import corpus
from tt2.elab import Config
from tt2.prelude import initial_signature

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def config():
    return Config()


@pytest.fixture(scope="session")
def manifest():
    return corpus(REPO_ROOT / "stdlib")


@pytest.fixture()
def base_sig(config):
    # fresh per test: signatures grow as files are checked into them
    return initial_signature(config)
