import random

import numpy as np
import pytest

from allknap import _backend
from allknap.core import Instance, Mode


def random_instance(rng: random.Random, mode, n_max, u_max, t_max, p_max=20, distinct=False):
    n = rng.randint(1, n_max)
    u = rng.randint(1, u_max)
    if distinct:
        ws = rng.sample(range(1, u + 1), min(n, u))
    else:
        ws = [rng.randint(1, u) for _ in range(n)]
    profits = tuple(rng.randint(-p_max, p_max) for _ in ws) if mode is Mode.KNAPSACK else None
    return Instance(tuple(ws), rng.randint(0, t_max), mode, profits)


def schoolbook(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def witness_sets(a, b, outputs):
    """Brute-force witness lists per output."""
    return [[k for k in range(len(a)) if a[k] and 0 <= i - k < len(b) and b[i - k]] for i in outputs]


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def nprng():
    return np.random.default_rng(12345)


@pytest.fixture(params=_backend.available())
def backend(request):
    return request.param


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
