import numpy as np
import pytest

from nmheom import BathModel, CouplingOperator, PropagatorConfig, Statistics

EPSILON = 2.0
LAM = 0.1
GAMMA0 = 0.02
T_C = 50.0


def fig_bath(delta=0.0, gamma0=GAMMA0, statistics=Statistics.BOSE):
    """Baseline bath: epsilon=2, lam=0.1, gamma0=0.02."""
    return BathModel(
        epsilon=EPSILON, lam=LAM, gamma0=gamma0, delta=delta, statistics=statistics
    )


@pytest.fixture
def bath():
    return fig_bath()


@pytest.fixture
def cfg():
    return PropagatorConfig(dt=0.005, t_final=T_C)


@pytest.fixture
def rwa_coupling():
    return CouplingOperator(chi=0.0)


@pytest.fixture
def full_coupling():
    return CouplingOperator(chi=1.0)


def excited_projector():
    return np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)


def random_density_matrix(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
