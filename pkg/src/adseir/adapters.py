"""Adapters presenting the two closures to the phase driver with one
interface: per-phase RHS construction, the observables the intervention
state machines watch, and dense-channel extraction."""

import numpy as np

from . import model as pairwise
from .complexmodel import complex_rhs, initial_complex_state
from .integrate import CHANNELS
from .params import EpiParams, NetworkMoments, RateSchedule, initial_pairwise_state
from .pgf import PgfSpec, pgf_eval, rebase


class SimplePairwiseModel:
    """Pairwise SEIR with the simplified closure; state carries the moments."""

    name = "simple-closure"
    STATE_COLUMNS = {name: i for i, name in enumerate(CHANNELS)}

    def __init__(self, epi: EpiParams):
        self.epi = epi

    def initial_state(self, e0, i0, moments: NetworkMoments) -> np.ndarray:
        return initial_pairwise_state(self.epi.n_nodes, e0, i0, moments).to_array()

    def make_phase(self, alpha, omega, t0, prev_aux):
        return pairwise.make_rhs(self.epi, alpha, omega), None

    def infectious(self, t, y, aux):
        return y[2]

    def active_infection(self, t, y, aux):
        return y[1] + y[2]

    def recovered(self, t, y, aux):
        return y[3]

    def k_mean(self, t, y, aux):
        return y[10]

    def channels(self, ts, states, phase) -> dict:
        return {name: states[:, i] for i, name in enumerate(CHANNELS)}


class ComplexClosureModel:
    """Appendix-style closure driven by the closed-form PGF.

    [S] lives in g(theta, t), so each phase carries a PgfSpec rebased to the
    phase start (the closed form assumes rates constant since its epoch).
    """

    name = "complex-closure"
    STATE_COLUMNS = {
        "E": 0, "I": 1, "R": 2, "SS": 3, "SE": 4, "SI": 5,
        "EE": 6, "EI": 7, "II": 8, "phi": 12,
    }

    def __init__(self, epi: EpiParams, degree_hist):
        self.epi = epi
        self.hist = np.asarray(degree_hist, dtype=float)
        self.s0 = float(epi.n_nodes)

    def initial_state(self, e0, i0, moments: NetworkMoments) -> np.ndarray:
        self.s0 = float(self.epi.n_nodes) - e0 - i0
        return initial_complex_state(self.epi.n_nodes, e0, i0, moments).to_array()

    def make_phase(self, alpha, omega, t0, prev_aux):
        if prev_aux is None:
            spec = PgfSpec.from_histogram(self.hist, alpha, omega, self.epi.n_nodes)
        else:
            prev_spec, prev_t0 = prev_aux
            spec = rebase(prev_spec, t0 - prev_t0, alpha, omega)
        aux = (spec, t0)
        epi = self.epi
        rates = RateSchedule.constant(alpha, omega)

        s0 = self.s0

        def rhs(t, y, _spec=spec, _t0=t0):
            return complex_rhs(t - _t0, y, epi, rates, _spec, s0)

        return rhs, aux

    def infectious(self, t, y, aux):
        return y[1]

    def active_infection(self, t, y, aux):
        return y[0] + y[1]

    def recovered(self, t, y, aux):
        return y[2]

    def k_mean(self, t, y, aux):
        spec, t0 = aux
        return pgf_eval(spec, 1.0, t - t0)[1]

    def channels(self, ts, states, phase) -> dict:
        spec, t0 = phase.aux
        s = np.empty(len(ts))
        k = np.empty(len(ts))
        k2k = np.empty(len(ts))
        for j, t in enumerate(ts):
            theta = min(max(states[j, 11], 0.0), 1.0)
            s[j] = self.s0 * pgf_eval(spec, theta, t - t0)[0]
            _, k[j], k2k[j] = pgf_eval(spec, 1.0, t - t0)
        return {
            "S": s, "E": states[:, 0], "I": states[:, 1], "R": states[:, 2],
            "SS": states[:, 3], "SE": states[:, 4], "SI": states[:, 5],
            "EE": states[:, 6], "EI": states[:, 7], "II": states[:, 8],
            "k_mean": k, "k2k": k2k, "phi": states[:, 12],
        }
