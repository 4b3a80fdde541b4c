import numpy as np
import pytest

from adseir import netgen
from adseir.adapters import ComplexClosureModel
from adseir.complexmodel import (ComplexState, complex_rhs,
                                 initial_complex_state)
from adseir.interventions import (InterventionPolicy, run_none,
                                  run_prevalence_dependent)
from adseir.params import EpiParams, NetworkMoments, RateSchedule
from adseir.pgf import PgfSpec


@pytest.fixture(scope="module")
def complex_model(validation_setup):
    graph, moments, epi = validation_setup
    return ComplexClosureModel(epi, netgen.degree_histogram(graph))


@pytest.fixture(scope="module")
def complex_run(complex_model, validation_setup):
    _, moments, _ = validation_setup
    y0 = complex_model.initial_state(10.0, 10.0, moments)
    return run_none(complex_model, y0)


def test_initial_state_layout(validation_setup):
    _, moments, _ = validation_setup
    st = initial_complex_state(500, 10.0, 10.0, moments)
    assert st.theta == 1.0
    assert st.y == pytest.approx(moments.k_mean * 10.0)
    assert st.z == pytest.approx(moments.k_mean * 10.0)
    assert st.phi == moments.phi
    assert ComplexState.from_array(st.to_array()) == st


def test_initial_susceptibles_exact(complex_model, validation_setup, complex_run):
    traj = complex_run.trajectory
    assert traj.eval_scalar("S", 0.0) == pytest.approx(480.0, abs=1e-9)


def test_node_conservation(complex_run):
    traj = complex_run.trajectory
    ts = traj.grid(1.0)
    ch = traj.channels(ts)
    total = ch["S"] + ch["E"] + ch["I"] + ch["R"]
    assert np.max(np.abs(total - 500.0)) < 1e-6 * 500.0


def test_theta_monotone_nonincreasing_static(complex_run):
    traj = complex_run.trajectory
    theta = traj.sample_states(traj.grid(1.0))[:, 11]
    assert np.all(np.diff(theta) <= 1e-12)
    assert theta[0] == pytest.approx(1.0)
    assert theta[-1] > 0.0


def test_susceptibles_bounded_and_nonincreasing(complex_run):
    traj = complex_run.trajectory
    s = traj.channel("S", traj.grid(1.0))
    assert s.max() <= 500.0 + 1e-9
    assert np.all(np.diff(s) <= 1e-9)


def test_runs_to_epidemic_end(complex_run):
    assert complex_run.converged
    traj = complex_run.trajectory
    e = traj.eval_scalar("E", traj.t_end)
    i = traj.eval_scalar("I", traj.t_end)
    assert e + i == pytest.approx(1.0, abs=1e-6)
    assert complex_run.r_inf > 100.0


def test_static_mean_degree_constant(complex_run):
    traj = complex_run.trajectory
    k = traj.channel("k_mean", traj.grid(5.0))
    assert np.allclose(k, k[0], rtol=1e-10)


def test_rhs_disease_free_static_is_stationary(validation_setup):
    graph, moments, epi = validation_setup
    hist = netgen.degree_histogram(graph)
    spec = PgfSpec.from_histogram(hist, 0.0, 0.0, epi.n_nodes)
    st = initial_complex_state(epi.n_nodes, 0.0, 0.0, moments)
    dy = complex_rhs(0.0, st, epi, RateSchedule.constant(0.0, 0.0), spec,
                     s0=float(epi.n_nodes))
    assert np.allclose(dy, 0.0, atol=1e-9)


def test_prevalence_dependent_intervention_reduces_final_size(
        complex_model, validation_setup, complex_run):
    _, moments, _ = validation_setup
    pol = InterventionPolicy(scheme="prevalence-dependent", q=0.02, p=0.25,
                             l_i=30.0, l_r=30.0)
    y0 = complex_model.initial_state(10.0, 10.0, moments)
    res = run_prevalence_dependent(complex_model, moments, pol, y0)
    assert res.converged
    assert res.r_inf < complex_run.r_inf
    # conservation must survive the phase rebasing
    traj = res.trajectory
    ch = traj.channels(traj.grid(2.0))
    total = ch["S"] + ch["E"] + ch["I"] + ch["R"]
    assert np.max(np.abs(total - 500.0)) < 1e-6 * 500.0
    # mean degree stays within the intervention band
    k = traj.channel("k_mean", traj.grid(0.5))
    k0 = moments.k_mean
    assert k.min() >= 0.25 * k0 - 1e-6 * k0
    assert k.max() <= k0 + 1e-6 * k0
