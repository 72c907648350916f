import pytest

from src.core.perm_core import compose_cycles, make_cycle

TWO_TRANSPOSITIONS = [(5, 3), (9, 67)]

LONG_CYCLES = [
    (3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15, 17, 18, 19, 20, 21),
    (22, 23, 24, 25, 26, 27),
    (28, 29),
    (30, 31),
]

MIXED_CYCLES = [
    (3, 5, 6, 7, 9, 10, 11, 12, 13, 14),
    (15, 17, 18, 19, 20, 21),
    (22, 23, 24),
    (25, 26, 27),
    (28, 29, 30),
]


def permutation_of(cycles, width):
    return compose_cycles([make_cycle(*c) for c in cycles], width)


@pytest.fixture
def two_transpositions():
    return permutation_of(TWO_TRANSPOSITIONS, 7)


@pytest.fixture
def long_cycles():
    return permutation_of(LONG_CYCLES, 7)


@pytest.fixture
def mixed_cycles():
    return permutation_of(MIXED_CYCLES, 7)


def read_report(text):
    """key=value lines as a dict of strings."""
    fields = {}
    for line in text.splitlines():
        key, sep, value = line.partition("=")
        if sep:
            fields[key.strip()] = value.strip()
    return fields
