import numpy as np
import pytest

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def pauli_x():
    return PAULI_X.copy()


@pytest.fixture
def pauli_y():
    return PAULI_Y.copy()


@pytest.fixture
def pauli_z():
    return PAULI_Z.copy()


def overlap_is_unit(u, v, tol=1e-9):
    """True when u and v agree up to a global phase."""
    return abs(abs(np.vdot(u, v)) - 1.0) <= tol
