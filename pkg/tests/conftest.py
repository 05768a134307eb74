import sys
from pathlib import Path

# make tests/oracle.py importable regardless of invocation directory
sys.path.insert(0, str(Path(__file__).parent))

import pytest

from antjam.network import build_network


@pytest.fixture
def unit_square():
    """Four nodes on a unit square, range 1.2, PE at node 2."""
    specs = [
        ((0.0, 0.0), 100.0, 1.2),
        ((1.0, 0.0), 100.0, 1.2),
        ((1.0, 1.0), 100.0, 1.2),
        ((0.0, 1.0), 100.0, 1.2),
    ]
    return build_network(specs, 2)


@pytest.fixture
def line3():
    """Three nodes in a row, unit spacing, PE at the end."""
    specs = [
        ((0.0, 0.0), 100.0, 1.5),
        ((1.0, 0.0), 100.0, 1.5),
        ((2.0, 0.0), 100.0, 1.5),
    ]
    return build_network(specs, 2)
