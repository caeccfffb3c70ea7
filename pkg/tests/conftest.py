import numpy as np
import pytest

from jjphotonics.network import paper_circuit_impedance
from jjphotonics.pe import EnvironmentImpedance, FrequencyGrid, solve_minnhagen

PAPER_T = 0.021
PAPER_IC = 0.85e-9


@pytest.fixture(scope="session")
def paper_impedance():
    """Device impedance tabulated to 40 GHz (shared across tests)."""
    return EnvironmentImpedance.from_function(
        lambda f: paper_circuit_impedance(f), 40.2e9, 5e6)


@pytest.fixture(scope="session")
def paper_pe(paper_impedance):
    """Solved P(nu) for the device model at 21 mK on the default grid."""
    grid = FrequencyGrid.symmetric(40e9, 10e6)
    return solve_minnhagen(paper_impedance, PAPER_T, grid)


@pytest.fixture(scope="session")
def fit_grids():
    """Coarser commensurate grids used by round-trip and fit tests."""
    return (FrequencyGrid.step(4e9, 8e9, 40e6),
            FrequencyGrid.step(0.0, 24e9, 40e6))


def rel_err(a, b):
    return abs(a - b) / abs(b)
