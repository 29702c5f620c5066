import numpy as np
import pytest

from primewalk.characters import find_character
from primewalk.primes import sieve_count

W = np.exp(1j * np.pi / 3)

# value rows chi(0..q-1) keyed by (q, label); labels differ from the canonical order
ROWS = {
    (3, 2): [0, 1, -1],
    (5, 2): [0, 1, 1j, -1j, -1],
    (5, 3): [0, 1, -1, -1, 1],
    (5, 4): [0, 1, -1j, 1j, -1],
    (7, 2): [0, 1, W**2, W, -W, -W**2, -1],
    (7, 3): [0, 1, -W, W**2, W**2, -W, 1],
    (7, 4): [0, 1, 1, -1, 1, -1, -1],
    (7, 5): [0, 1, W**2, -W, -W, W**2, 1],
    (7, 6): [0, 1, -W, -W**2, W**2, W, -1],
}


def reference_chi(q, j):
    return find_character(q, ROWS[(q, j)])


@pytest.fixture(scope="session")
def store():
    return sieve_count(10**6)


ACCEPTANCE = []  # (criterion, passed, detail), filled by test_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE, key=lambda r: int(r[0][1:].split("-")[0])):
        terminalreporter.write_line(f"{name:<10} {'PASS' if ok else 'FAIL'}  {detail}")
