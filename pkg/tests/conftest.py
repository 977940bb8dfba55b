import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nlijsa import loss_sweep, preset

SWEEP_X = np.linspace(0.0, 20.0, 41)


@pytest.fixture(scope="session")
def grid_setup():
    return preset("grid")


@pytest.fixture(scope="session")
def hde_setup():
    return preset("hde")


@pytest.fixture(scope="session")
def grid_state(grid_setup):
    return grid_setup.assemble()


@pytest.fixture(scope="session")
def hde_state(hde_setup):
    return hde_setup.assemble()


@pytest.fixture(scope="session")
def grid_sweep(grid_setup):
    return loss_sweep(grid_setup, SWEEP_X)


@pytest.fixture(scope="session")
def hde_sweep(hde_setup):
    return loss_sweep(hde_setup, SWEEP_X)
