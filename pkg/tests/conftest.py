import random
from pathlib import Path

import pytest

from glocsur import FgAbGroup, FiniteGroup, GModule, IntMatrix
from glocsur.instances import small_group

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def C2():
    return FiniteGroup.cyclic(2)


@pytest.fixture
def neg(C2):
    """Z with the nontrivial element acting by -1."""
    return GModule(C2, FgAbGroup(1), [IntMatrix.identity(1), IntMatrix.from_rows([[-1]])])


@pytest.fixture
def swap(C2):
    """Z^2 with C2 swapping the coordinates."""
    return GModule(C2, FgAbGroup(2), [IntMatrix.identity(2), IntMatrix.from_rows([[0, 1], [1, 0]])])


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def group(name):
    return small_group(name)
