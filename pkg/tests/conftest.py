"""Shared random generators for the test suite."""

import numpy as np
import pytest
from scipy.stats import unitary_group

from pointint import BoundaryPair, PointConfiguration


def random_config(rng, d, m_max=5, n=1, min_sep=0.1, box=3.0):
    """Random point cloud with pairwise separations >= min_sep."""
    m = int(rng.integers(1, m_max + 1))
    pts = []
    while len(pts) < m:
        p = rng.uniform(-box, box, size=d)
        if all(np.linalg.norm(p - q) >= min_sep for q in pts):
            pts.append(p)
    return PointConfiguration(d, np.array(pts), n)


def random_hermitian(rng, size, scale=1.0):
    A = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return scale * 0.5 * (A + A.conj().T)


def random_self_adjoint_pair(rng, size):
    """C = i(I - U), D = I + U with U Haar unitary: C D* = D C* and C C* + D D* = 4I."""
    U = unitary_group.rvs(size, random_state=rng) if size > 1 else np.exp(2j * np.pi * rng.random()) * np.eye(1)
    eye = np.eye(size)
    return BoundaryPair(1j * (eye - U), eye + U)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
