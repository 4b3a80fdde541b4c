"""Adaptive SEIR with the heterogeneous clustered closure.

Susceptibles are not integrated: [S] = S0 * g(theta, t), where theta is
the proportion of edges that have never transmitted and S0 is the initial
susceptible count (so [S](0) = S0 exactly and nodes are conserved). Y and
Z are the edge-weighted exposed and infectious counts entering the
closures.

Note on the [ISI] closure: the clustered correction follows the generic
closure rule with A = I, i.e. its denominator is Z^2 (the edge-weighted
infectious count squared).
"""

from dataclasses import dataclass

import numpy as np

from .params import EpiParams, NetworkMoments, RateSchedule
from .pgf import PgfSpec, pgf_eval

_EPS = 1e-12

COMPLEX_FIELDS = (
    "e", "i", "r",
    "ss", "se", "si", "ee", "ei", "ii",
    "y", "z", "theta", "phi",
)


@dataclass
class ComplexState:
    e: float
    i: float
    r: float
    ss: float
    se: float
    si: float
    ee: float
    ei: float
    ii: float
    y: float
    z: float
    theta: float
    phi: float

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in COMPLEX_FIELDS], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "ComplexState":
        return cls(*(float(v) for v in arr))


def initial_complex_state(n_nodes: int, e0: float, i0: float,
                          moments: NetworkMoments) -> ComplexState:
    """Seed with theta(0) = 1 and degree/state independence for the pairs."""
    n = float(n_nodes)
    s0 = n - e0 - i0
    if s0 < 0:
        raise ValueError("initial seeds exceed population")
    k = moments.k_mean

    def pair(a, b):
        return k * a * b / n

    return ComplexState(
        e=e0, i=i0, r=0.0,
        ss=pair(s0, s0), se=pair(s0, e0), si=pair(s0, i0),
        ee=pair(e0, e0), ei=pair(e0, i0), ii=pair(i0, i0),
        y=k * e0, z=k * i0, theta=1.0, phi=moments.phi,
    )


def _mx(d):
    return d if d > _EPS else _EPS


def complex_rhs(t, state, epi: EpiParams, rates: RateSchedule,
                spec: PgfSpec, s0: float) -> np.ndarray:
    """Full derivative of the 13-component complex-closure state at time t.

    t is measured from the epoch of spec (the PGF closed form assumes the
    rates have been constant since then); rates.at(t) must agree with
    spec's (alpha, omega) whenever alpha + omega > 0.
    """
    y_arr = state.to_array() if isinstance(state, ComplexState) else np.asarray(state, dtype=float)
    alpha, omega = rates.at(t)
    e, i, r = y_arr[0], y_arr[1], y_arr[2]
    ss, se, si, ee, ei, ii = y_arr[3:9]
    yy, zz, theta, phi = y_arr[9], y_arr[10], y_arr[11], y_arr[12]
    beta, eta, gamma = epi.beta, epi.eta, epi.gamma
    n = float(epi.n_nodes)

    theta_c = min(max(theta, 0.0), 1.0)
    g, gx, gxx = pgf_eval(spec, theta_c, t)
    g1, gx1, gxx1 = pgf_eval(spec, 1.0, t)
    s = s0 * g

    denom = gxx / (s0 * _mx(gx) ** 2)
    gp1 = gx1
    ssi = ss * si * denom * ((1.0 - phi)
                             + phi * gp1 * n * si / _mx(s0 * theta_c * gx * zz))
    esi = se * si * denom * ((1.0 - phi) + phi * gp1 * n * ei / _mx(yy * zz))
    isi = si * si * denom * ((1.0 - phi) + phi * gp1 * n * ii / _mx(zz * zz))
    aw = alpha + omega

    out = np.empty(13)
    out[0] = beta * si - eta * e
    out[1] = eta * e - gamma * i
    out[2] = gamma * i
    out[3] = -2.0 * beta * ssi + alpha * s * (s - 1.0) - aw * ss
    out[4] = beta * ssi - beta * esi - eta * se + alpha * s * e - aw * se
    out[5] = (eta * se - beta * si - beta * isi - gamma * si
              + alpha * s * i - aw * si)
    out[6] = 2.0 * beta * esi - 2.0 * eta * ee + alpha * e * (e - 1.0) - aw * ee
    out[7] = (beta * isi + beta * si + eta * ee - (gamma + eta) * ei
              + alpha * e * i - aw * ei)
    out[8] = 2.0 * eta * ei - 2.0 * gamma * ii + alpha * i * (i - 1.0) - aw * ii
    out[9] = (beta * theta_c * gxx / _mx(gx) * si - (eta + aw) * yy
              + alpha * (n - 1.0) * e)
    out[10] = eta * yy - (gamma + aw) * zz + alpha * (n - 1.0) * i
    out[11] = (-beta * si / (s0 * _mx(gx))
               - (1.0 - theta_c) * (alpha * theta_c + omega
                                    - alpha * (n - 1.0) * g / _mx(gx)))
    out[12] = 3.0 * alpha - (aw + 2.0 * alpha * (n - 2.0) * gx1 / _mx(gxx1)) * phi
    return out


def complex_susceptible(spec: PgfSpec, theta: float, t: float, s0: float) -> float:
    """[S] = S0 * g(theta, t)."""
    g, _, _ = pgf_eval(spec, min(max(theta, 0.0), 1.0), t)
    return s0 * g
