from pathlib import Path

import pytest

from chromaflux.instance import CHANNEL, MIGRATION, Instance

FIXTURES = Path(__file__).parent / "fixtures"

TRIANGLE = [(0, 1), (1, 2), (2, 0)]
PATH2 = [(0, 1), (1, 2)]
K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def star(leaves):
    return [(0, i) for i in range(1, leaves + 1)]


def chan(n, edges, caps, channels=None):
    caps = [caps] * n if isinstance(caps, int) else list(caps)
    return Instance.from_edges(CHANNEL, caps, edges, channels=channels or max(caps))


def mig(n, edges, caps):
    caps = [caps] * n if isinstance(caps, int) else list(caps)
    return Instance.from_edges(MIGRATION, caps, edges)


@pytest.fixture
def fixtures_dir():
    return FIXTURES
