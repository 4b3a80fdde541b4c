import numpy as np
import pytest

from adseir import netgen
from adseir.adapters import SimplePairwiseModel
from adseir.model import beta_from_r0
from adseir.params import EpiParams, NetworkMoments

BASELINE_MOMENTS = NetworkMoments(k_mean=64.0, k2k=5120.0, phi=0.2)
N_BASELINE = 10000


@pytest.fixture(scope="session")
def baseline_moments():
    return BASELINE_MOMENTS


@pytest.fixture(scope="session")
def baseline_epi():
    beta = beta_from_r0(2.4, BASELINE_MOMENTS, 0.1)
    return EpiParams(beta=beta, eta=0.2, gamma=0.1, n_nodes=N_BASELINE)


@pytest.fixture(scope="session")
def baseline_model(baseline_epi):
    return SimplePairwiseModel(baseline_epi)


@pytest.fixture(scope="session")
def validation_graph():
    spec = netgen.NetworkSpec(family="bipartite-projection",
                              n=500, m=125, lam=4.0, seed=11)
    return netgen.generate(spec)


@pytest.fixture(scope="session")
def validation_setup(validation_graph):
    """(graph, moments, epi) for the N=500 validation scenario."""
    moments = netgen.empirical_moments(validation_graph)
    beta = beta_from_r0(2.4, moments, 0.1)
    epi = EpiParams(beta=beta, eta=0.2, gamma=0.1, n_nodes=500)
    return validation_graph, moments, epi


def rk4_fixed(rhs, y0, t0, t1, dt):
    """Classic fixed-step RK4; independent oracle for the adaptive stepper."""
    y = np.asarray(y0, dtype=float).copy()
    t = t0
    ts, ys = [t], [y.copy()]
    while t < t1 - 1e-12:
        h = min(dt, t1 - t)
        k1 = np.asarray(rhs(t, y))
        k2 = np.asarray(rhs(t + h / 2, y + h / 2 * k1))
        k3 = np.asarray(rhs(t + h / 2, y + h / 2 * k2))
        k4 = np.asarray(rhs(t + h, y + h * k3))
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        ts.append(t)
        ys.append(y.copy())
    return np.asarray(ts), np.asarray(ys)
