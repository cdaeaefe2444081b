import random

import pytest

from colorrange.core import ColoredPoint, compute_prev, normalize_input

# Shared small fixture: values/colors (1,R),(3,B),(5,R),(7,G),(9,B),(12,R),(15,G),(20,B)
E1_PAIRS = [(1, "R"), (3, "B"), (5, "R"), (7, "G"), (9, "B"), (12, "R"),
            (15, "G"), (20, "B")]


@pytest.fixture
def e1():
    points, remap = normalize_input(E1_PAIRS)
    return points


@pytest.fixture
def e1_with_prev(e1):
    return e1, compute_prev(e1)


def random_instance(rng: random.Random, n: int, u: int, c: int):
    """n distinct points over [1, u] with colors in [0, c)."""
    values = rng.sample(range(1, u + 1), n)
    values.sort()
    return [ColoredPoint(v, rng.randrange(c)) for v in values]


@pytest.fixture
def rng():
    return random.Random(0xC01)
