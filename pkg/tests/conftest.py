import numpy as np
import pytest

from synalg.automata import dfa
from synalg.regex import regex_to_dfa


@pytest.fixture
def ab_star():
    """Minimal DFA of (ab)*: 0 initial and final, 1 after a, 2 sink."""
    return regex_to_dfa("(ab)*", "ab")


@pytest.fixture
def parity_a():
    """Even number of a's over the one-letter alphabet {a}."""
    return dfa("a", {"a": [1, 0]}, 0, [0])


@pytest.fixture
def parity_ab():
    """Even number of a's over {a, b}."""
    return dfa("ab", {"a": [1, 0], "b": [0, 1]}, 0, [0])


def xor_space(dim):
    """GF(2)^dim with vectors encoded as bitmasks."""
    n = 1 << dim
    x = np.arange(n)
    return x[:, None] ^ x[None, :]


# lines printed by test_acceptance.py, repeated at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
