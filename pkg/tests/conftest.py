import random

import pytest

from dopalg.textio import read_oneform, read_operator, read_symbol


@pytest.fixture
def rng():
    return random.Random(1234)


def S(text, dim=None):
    return read_symbol(text, dim)


def D(text, dim=None):
    return read_operator(text, dim)


def W(text, dim=None):
    return read_oneform(text, dim)
