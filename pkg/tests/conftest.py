import numpy as np
import pytest
from hypothesis import strategies as st

from ising_lab.pauli import PauliSum

ACCEPTANCE_LINES: list[str] = []

coeffs = st.complex_numbers(min_magnitude=0.0, max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@st.composite
def pauli_sums(draw, n=None, max_terms=6):
    n = draw(st.integers(1, 4)) if n is None else n
    k = draw(st.integers(0, max_terms))
    keys = draw(st.lists(st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1)),
                         min_size=k, max_size=k))
    cs = draw(st.lists(coeffs, min_size=k, max_size=k))
    terms = {}
    for key, c in zip(keys, cs):
        terms[key] = terms.get(key, 0) + c
    return PauliSum(n, terms)


def kron_oracle(label_ops: dict[int, str], n: int) -> np.ndarray:
    """Independent dense builder: site 1 is the rightmost kron factor."""
    mats = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]),
            "Z": np.diag([1.0, -1.0])}
    out = np.eye(1)
    for site in range(n, 0, -1):
        out = np.kron(out, mats[label_ops.get(site, "I")])
    return out.astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
