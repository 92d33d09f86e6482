import cmath
import math

import numpy as np
import pytest
from hypothesis import strategies as st

from quantgames import StrategyParams, canonical_game

PI = math.pi
HALF_PI = math.pi / 2

thetas = st.floats(0.0, PI, allow_nan=False)
phis = st.floats(0.0, HALF_PI, allow_nan=False)
ps = st.floats(0.0, 1.0, allow_nan=False)
deltas = st.floats(0.0, HALF_PI, allow_nan=False)
strategies = st.builds(StrategyParams, thetas, phis)


def amplitude_oracle(payoffs: dict, p: float, delta: float, s1, s2) -> float:
    """Payoff via pure-state amplitudes: p * |<psi_ab|U1 x U2|psi>|^2 + (1-p)/4.

    Written without matrices: each single-qubit gate is applied to ket
    components by hand, using R|0> = e^{i phi}|0>, R|1> = e^{-i phi}|1>,
    C|0> = -|1>, C|1> = |0>.
    """

    def act(theta, phi, bit):
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        if bit == 0:
            return {0: c * cmath.exp(1j * phi), 1: -s}
        return {0: s, 1: c * cmath.exp(-1j * phi)}

    initial = {(0, 0): 1 / math.sqrt(2), (1, 1): 1j / math.sqrt(2)}
    out = {}
    for (a, b), amp in initial.items():
        for x, ax in act(*s1, a).items():
            for y, by in act(*s2, b).items():
                out[(x, y)] = out.get((x, y), 0) + amp * ax * by

    c, s = math.cos(delta / 2), math.sin(delta / 2)
    basis = {
        "00": {(0, 0): c, (1, 1): 1j * s},
        "11": {(1, 1): c, (0, 0): 1j * s},
        "10": {(1, 0): c, (0, 1): -1j * s},
        "01": {(0, 1): c, (1, 0): -1j * s},
    }
    total = 0.0
    for k, vec in basis.items():
        overlap = sum(v.conjugate() * out.get(idx, 0) for idx, v in vec.items())
        total += payoffs[k] * (p * abs(overlap) ** 2 + (1 - p) / 4)
    return total


@pytest.fixture
def pd():
    return canonical_game("pd")


@pytest.fixture
def cg():
    return canonical_game("cg")


@pytest.fixture
def bos():
    return canonical_game("bos")


@pytest.fixture
def rng():
    return np.random.default_rng(20131)


# filled by test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
