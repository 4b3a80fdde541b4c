import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from adseir import interventions as iv
from adseir.adapters import SimplePairwiseModel


@pytest.fixture(scope="module")
def baseline_setup(baseline_model, baseline_moments):
    y0 = baseline_model.initial_state(10.0, 10.0, baseline_moments)
    return baseline_model, baseline_moments, y0


class TestDerivedRates:
    def test_identity_policy_has_zero_rates(self):
        assert iv.deletion_rate(1.0, 10.0) == 0.0
        assert iv.activation_rate(1.0, 10.0, 64.0, 10000) == 0.0

    def test_deletion_rate_values(self):
        assert iv.deletion_rate(0.5, 15.0) == pytest.approx(
            math.log(2) / 15, rel=1e-12)
        assert iv.deletion_rate(0.125, 30.0) == pytest.approx(
            math.log(8) / 30, rel=1e-12)

    def test_activation_rate_values(self):
        assert iv.activation_rate(0.5, 90.0, 64.0, 10000) == pytest.approx(
            3.573066646154462e-05, rel=1e-12)
        assert iv.activation_rate(0.25, 2.0, 64.0, 10000) == pytest.approx(
            2.409885175254011e-03, rel=1e-12)

    @pytest.mark.parametrize("p,l_r", [(0.5, 90.0), (0.25, 2.0)])
    def test_activation_rate_restores_mean_degree(self, p, l_r):
        # defining property: <k> driven from p*k0 back to k0 in exactly l_r
        # days under dk/dt = alpha*(N-1-k)
        k0, n = 64.0, 10000
        alpha = iv.activation_rate(p, l_r, k0, n)
        res = solve_ivp(lambda t, k: alpha * (n - 1 - k[0]), (0.0, l_r),
                        [p * k0], rtol=1e-12, atol=1e-12)
        assert res.y[0, -1] == pytest.approx(k0, abs=1e-9)

    def test_deletion_rate_halves_mean_degree(self):
        omega = iv.deletion_rate(0.5, 15.0)
        assert 64.0 * math.exp(-omega * 15.0) == pytest.approx(32.0, rel=1e-12)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            iv.deletion_rate(0.0, 10.0)
        with pytest.raises(ValueError):
            iv.deletion_rate(0.5, 0.0)
        with pytest.raises(ValueError):
            iv.activation_rate(0.5, 10.0, 0.0, 100)
        with pytest.raises(ValueError):
            iv.activation_rate(0.5, 10.0, 99.5, 100)


class TestPolicy:
    def test_unknown_scheme_rejected(self):
        with pytest.raises(ValueError):
            iv.InterventionPolicy(scheme="aggressive")

    def test_parameter_ranges_enforced(self):
        with pytest.raises(ValueError):
            iv.InterventionPolicy(scheme="simple", q=1.0)
        with pytest.raises(ValueError):
            iv.InterventionPolicy(scheme="simple", q=0.01, p=0.0)
        with pytest.raises(ValueError):
            iv.InterventionPolicy(scheme="simple", q=0.01, p=0.5, l_i=0.0)

    def test_none_scheme_skips_validation(self):
        iv.InterventionPolicy(scheme="none")   # no raise


class TestBaselineRun:
    def test_runs_to_epidemic_end(self, baseline_setup):
        model, _, y0 = baseline_setup
        res = iv.run_none(model, y0)
        assert res.converged
        traj = res.trajectory
        e_end = traj.eval_scalar("E", traj.t_end)
        i_end = traj.eval_scalar("I", traj.t_end)
        assert e_end + i_end == pytest.approx(1.0, abs=1e-6)
        assert res.r_inf > 1000.0

    def test_transmission_free_run_ends_immediately(self, baseline_model,
                                                    baseline_moments):
        y0 = baseline_model.initial_state(0.0, 0.0, baseline_moments)
        res = iv.run_none(baseline_model, y0)
        assert res.trajectory.t_end == pytest.approx(0.0, abs=1e-6)
        assert res.r_inf == pytest.approx(0.0, abs=1e-9)


SIMPLE_POLICY = iv.InterventionPolicy(scheme="simple", q=0.01, p=0.25,
                                      l_i=30.0, l_h=15.0, l_r=60.0)
PREV_POLICY = iv.InterventionPolicy(scheme="prevalence-dependent", q=0.01,
                                    p=0.25, l_i=30.0, l_r=30.0)


@pytest.fixture(scope="module")
def simple_run(baseline_setup):
    model, moments, y0 = baseline_setup
    return iv.run_simple(model, moments, SIMPLE_POLICY, y0)


@pytest.fixture(scope="module")
def prev_run(baseline_setup):
    model, moments, y0 = baseline_setup
    return iv.run_prevalence_dependent(model, moments, PREV_POLICY, y0)


class TestSimpleScheme:

    def test_phase_sequence(self, simple_run):
        names = [rec.phase for rec in simple_run.phase_log]
        assert names == ["free", "intervention", "holding", "relaxation",
                         "free"]

    def test_phase_lengths_exact(self, simple_run):
        recs = {rec.phase: rec for rec in simple_run.phase_log}
        assert recs["intervention"].t_end - recs["intervention"].t_start == \
            pytest.approx(30.0, abs=1e-9)
        assert recs["holding"].t_end - recs["holding"].t_start == \
            pytest.approx(15.0, abs=1e-9)
        assert recs["relaxation"].t_end - recs["relaxation"].t_start == \
            pytest.approx(60.0, abs=1e-9)

    def test_trigger_at_threshold(self, simple_run):
        recs = {rec.phase: rec for rec in simple_run.phase_log}
        t_trig = recs["intervention"].t_start
        i_trig = simple_run.trajectory.eval_scalar("I", t_trig)
        assert i_trig == pytest.approx(0.01 * 10000, rel=1e-8)

    def test_mean_degree_checkpoints(self, simple_run):
        # <k> = p*k0 at intervention end, back to k0 at relaxation end
        recs = {rec.phase: rec for rec in simple_run.phase_log}
        traj = simple_run.trajectory
        k_low = traj.eval_scalar("k_mean", recs["intervention"].t_end)
        k_back = traj.eval_scalar("k_mean", recs["relaxation"].t_end)
        assert k_low == pytest.approx(16.0, rel=1e-6)
        assert k_back == pytest.approx(64.0, rel=1e-6)

    def test_identity_policy_matches_baseline(self, baseline_setup):
        model, moments, y0 = baseline_setup
        pol = iv.InterventionPolicy(scheme="simple", q=0.01, p=1.0,
                                    l_i=30.0, l_h=0.0, l_r=30.0)
        res = iv.run_simple(model, moments, pol, y0)
        base = iv.run_none(model, y0)
        assert res.r_inf == pytest.approx(base.r_inf, rel=1e-8)

    def test_never_triggered(self, baseline_setup):
        model, moments, y0 = baseline_setup
        pol = iv.InterventionPolicy(scheme="simple", q=0.9, p=0.25,
                                    l_i=30.0, l_r=30.0)
        res = iv.run_simple(model, moments, pol, y0)
        assert res.never_triggered
        assert [rec.phase for rec in res.phase_log] == ["free"]
        base = iv.run_none(model, y0)
        assert res.r_inf == pytest.approx(base.r_inf, rel=1e-10)

    def test_immediate_trigger_when_seeded_above_threshold(self,
                                                           baseline_setup):
        model, moments, y0 = baseline_setup
        pol = iv.InterventionPolicy(scheme="simple", q=0.0005, p=0.25,
                                    l_i=30.0, l_r=30.0)
        res = iv.run_simple(model, moments, pol, y0)
        assert not res.never_triggered
        assert res.phase_log[0].phase == "intervention"
        assert res.phase_log[0].t_start == 0.0
        assert (0.0, "threshold-up") in res.trajectory.events


class TestPrevalenceDependentScheme:

    def test_converges(self, prev_run):
        assert prev_run.converged
        assert not prev_run.never_triggered

    def test_mean_degree_stays_in_band(self, prev_run):
        traj = prev_run.trajectory
        k = traj.channel("k_mean", traj.grid(0.25))
        assert k.min() >= 0.25 * 64.0 - 1e-6
        assert k.max() <= 64.0 + 1e-6

    def test_phases_are_contiguous(self, prev_run):
        recs = list(prev_run.phase_log)
        assert recs[0].t_start == 0.0
        for prev, cur in zip(recs[:-1], recs[1:]):
            assert cur.t_start == pytest.approx(prev.t_end, abs=1e-9)
        assert recs[-1].t_end == pytest.approx(prev_run.trajectory.t_end, abs=1e-9)

    def test_retriggers_at_least_once(self, prev_run):
        names = [rec.phase for rec in prev_run.phase_log]
        assert names.count("intervention") >= 2

    def test_final_size_below_baseline(self, baseline_setup, prev_run):
        model, _, y0 = baseline_setup
        base = iv.run_none(model, y0)
        assert prev_run.r_inf < base.r_inf

    def test_never_triggered(self, baseline_setup):
        model, moments, y0 = baseline_setup
        pol = iv.InterventionPolicy(scheme="prevalence-dependent", q=0.9,
                                    p=0.25, l_i=30.0, l_r=30.0)
        res = iv.run_prevalence_dependent(model, moments, pol, y0)
        assert res.never_triggered


def test_phase_log_csv(tmp_path, baseline_setup):
    import csv

    model, moments, y0 = baseline_setup
    res = iv.run_simple(model, moments, SIMPLE_POLICY, y0)
    path = tmp_path / "phases.csv"
    res.phase_log.to_csv(path)
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert [r["phase"] for r in rows] == ["free", "intervention", "holding",
                                          "relaxation", "free"]
    assert float(rows[1]["omega"]) == pytest.approx(iv.deletion_rate(0.25, 30.0))
