"""Shared fixtures: small Ising chains and seeded generators."""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.services.hamiltonians import build_ising, magnetization, product_state  # noqa: E402
from src.services.propagators import Propagator  # noqa: E402


# R_y angle of the product state used for the magnetization studies
TILT = 1.8


@pytest.fixture
def ising2():
    return build_ising(2, 0.5, 1.0)


@pytest.fixture(scope="session")
def ising5():
    return build_ising(5, 0.5, 1.0)


@pytest.fixture(scope="session")
def ising5_setup(ising5):
    """Propagator, tilted initial state, Z_0 and the exact <Z_0> at t = 0.5"""
    propagator = Propagator(ising5)
    psi = product_state(5, TILT)
    observable = magnetization(5, 0)
    exact = propagator.exact_expectation(0.5, psi, observable)
    return propagator, psi, observable, exact


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
