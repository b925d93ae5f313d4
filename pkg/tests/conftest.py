import math

import numpy as np
import pytest

from cyclewalk import kernels
from cyclewalk.model import CoinParams, InitialCondition, WalkConfig

H = math.sqrt(0.5)

# Hadamard, a moderately biased coin, and two strongly skewed ones
COINS = [
    CoinParams(H, H),
    CoinParams(0.6, 0.8),
    CoinParams(0.8, 0.6),
    CoinParams.from_a(0.1),
    CoinParams.from_a(0.95),
]
COIN_IDS = ["hadamard", "a0.6", "a0.8", "a0.1", "a0.95"]

ACCEPTANCE_LINES: list[str] = []


def make_config(n, coin, p0=H, phi=0.0, x0=0):
    return WalkConfig(n, coin, InitialCondition.from_p0(p0, phi, x0))


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    return kernels.available_backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
