from pathlib import Path

import pytest

from datum_core import SpecialDatum

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def hypersurface(a, n=3):
    """One top member over n singletons of weight a."""
    return SpecialDatum.of(n, [(range(1, n + 1), 1)] + [((i,), a) for i in range(1, n + 1)])


def pair(a):
    return hypersurface(a, n=2)


@pytest.fixture
def point():
    return SpecialDatum.of(1, [((1,), 1)])


@pytest.fixture
def two_components():
    return SpecialDatum.of(4, [
        ((1, 2), 1), ((1,), 2), ((2,), 2),
        ((3, 4), 1), ((3,), 2), ((4,), 2),
    ])


@pytest.fixture
def nested():
    return SpecialDatum.of(4, [
        ((1, 2, 3, 4), 1),
        ((1, 2), 2), ((3, 4), 2),
        ((1,), 4), ((2,), 4), ((3,), 4), ((4,), 4),
    ])


@pytest.fixture
def strict_branch():
    """Top over {pair, singleton} with ratio 3; lct(D) = 1 > lct(D\\J)/r."""
    return SpecialDatum.of(3, [
        ((1, 2, 3), 1),
        ((1, 2), 3), ((3,), 3),
        ((1,), 6), ((2,), 6),
    ])


@pytest.fixture
def loose():
    return SpecialDatum.of(3, [((1,), 1), ((2,), 1), ((3,), 1)])


@pytest.fixture
def data_dir():
    return DATA_DIR
