import random
import pytest

from metricext import Flag, MetricTable, Space, Subset

FOUR = ["a", "b", "x", "y"]
FOUR_MATRIX = [
    [0, 4, 1, 4],
    [4, 0, 4, 2],
    [1, 4, 0, 4],
    [4, 2, 4, 0],
]


def four_point(basepoint="a", order=FOUR):
    X = Space.finite(order, basepoint=basepoint)
    pos = [FOUR.index(p) for p in order]
    rows = [[FOUR_MATRIX[i][j] for j in pos] for i in pos]
    return X, MetricTable.from_matrix(X, rows, Flag.ULTRAMETRIC), Subset(X, ["a", "b"])


@pytest.fixture
def four():
    return four_point()


@pytest.fixture
def rng():
    return random.Random(20261015)
