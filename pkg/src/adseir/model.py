"""Adaptive pairwise SEIR model with the simplified triple closure.

Right-hand sides, the triple closure, the R0 <-> beta conversion, and the
degree-distribution Kolmogorov system (used as a small-N oracle for the
moment ODEs and for rebasing the PGF across intervention phases).
"""

import numpy as np
from scipy import sparse

from . import kernel
from .params import EpiParams, NetworkMoments, PairwiseState, RateSchedule


class ClosureDivisionError(ZeroDivisionError):
    """A closure denominator vanished; use the regularized RHS instead."""


class NoRealRootError(ValueError):
    """Target R0 exceeds the maximum of the truncated R0 series."""


class RootOutsideDomainError(ValueError):
    """The R0 series root fell outside (0, 1)."""


def closure_triples(state: PairwiseState, epi: EpiParams):
    """Closed triple approximations ([SSI], [ESI], [ISI]).

    Exact (unregularized) evaluation; raises ClosureDivisionError when a
    denominator vanishes. Every term carries a factor [SI], so si == 0
    short-circuits to zeros.
    """
    if state.si == 0.0:
        return 0.0, 0.0, 0.0
    if state.s <= 0.0 or state.k_mean <= 0.0:
        raise ClosureDivisionError("closure requires [S] > 0 and <k> > 0")
    if state.phi > 0.0 and (state.e <= 0.0 or state.i <= 0.0):
        raise ClosureDivisionError(
            "clustered closure correction requires [E] > 0 and [I] > 0")

    n = float(epi.n_nodes)
    k, k2k, phi = state.k_mean, state.k2k, state.phi
    base = (k2k / (k * k)) * (state.si / state.s)
    if phi > 0.0:
        corr = phi * n / k
        ssi = base * state.ss * (1.0 - phi + corr * state.si / (state.s * state.i))
        esi = base * state.se * (1.0 - phi + corr * state.ei / (state.e * state.i))
        isi = base * state.si * (1.0 - phi + corr * state.ii / (state.i * state.i))
    else:
        ssi = base * state.ss
        esi = base * state.se
        isi = base * state.si
    return ssi, esi, isi


def pairwise_rhs(t, state, epi: EpiParams, rates: RateSchedule) -> np.ndarray:
    """Full derivative of the 13-component pairwise state at time t.

    Accepts a PairwiseState or a flat array; always returns a flat array.
    Uses the regularized closure (denominators floored at 1e-12).
    """
    y = state.to_array() if isinstance(state, PairwiseState) else np.asarray(state, dtype=float)
    alpha, omega = rates.at(t)
    out = np.empty(13)
    kernel.pairwise_rhs_flat(t, y, out, epi.beta, epi.eta, epi.gamma,
                             alpha, omega, float(epi.n_nodes))
    return out


def make_rhs(epi: EpiParams, alpha: float, omega: float):
    """Constant-rate RHS callable suitable for the integrator (one phase)."""
    beta, eta, gamma = epi.beta, epi.eta, epi.gamma
    n = float(epi.n_nodes)
    rhs_flat = kernel.pairwise_rhs_flat

    def rhs(t, y):
        out = np.empty(13)
        rhs_flat(t, np.ascontiguousarray(y), out, beta, eta, gamma, alpha, omega, n)
        return out

    return rhs


def beta_from_r0(r0: float, moments: NetworkMoments, gamma: float) -> float:
    """Invert the two-term clustered R0 series for beta.

    With x = beta/(beta+gamma) and c = <k^2-k>/<k>, solves
    c*x - phi*c*x^2 = r0 for the smaller root (continuous with phi = 0).
    """
    if r0 < 0:
        raise ValueError("r0 must be >= 0")
    if r0 == 0.0:
        return 0.0
    if not moments.k2k > moments.k_mean > 0:
        raise ValueError("need k2k > k_mean > 0")
    c = moments.k2k / moments.k_mean
    phi = moments.phi
    if phi == 0.0:
        x = r0 / c
    else:
        disc = c * c - 4.0 * phi * c * r0
        if disc < 0.0:
            raise NoRealRootError(
                f"r0={r0} exceeds the truncated series maximum {c / (4 * phi)}")
        x = (c - np.sqrt(disc)) / (2.0 * phi * c)
    if not 0.0 < x < 1.0:
        raise RootOutsideDomainError(f"series root x={x} outside (0, 1)")
    return gamma * x / (1.0 - x)


def kolmogorov_rhs(p_vec, alpha: float, omega: float, n_nodes: int) -> np.ndarray:
    """Degree-distribution master equation under link activation/deletion.

    p_vec has length N (degrees 0 .. N-1); the derivative sums to zero.
    """
    p = np.asarray(p_vec, dtype=float)
    n = int(n_nodes)
    if p.shape != (n,):
        raise ValueError(f"p_vec must have shape ({n},)")
    k = np.arange(n, dtype=float)
    dp = -(alpha * (n - 1 - k) + omega * k) * p
    dp[1:] += alpha * (n - k[1:]) * p[:-1]
    dp[:-1] += omega * k[1:] * p[1:]
    return dp


def kolmogorov_matrix(alpha: float, omega: float, n_nodes: int,
                      k_max: int = None) -> sparse.csr_matrix:
    """Sparse generator A with dp/dt = A p (tridiagonal in degree).

    k_max truncates the state space to degrees 0 .. k_max (rates are still
    those of the N-node process); mass flowing past k_max is lost, so the
    caller must keep k_max well above the occupied degrees.
    """
    n = int(n_nodes)
    m = n if k_max is None else min(n, int(k_max) + 1)
    k = np.arange(m, dtype=float)
    diag = -(alpha * (n - 1 - k) + omega * k)
    up = omega * k[1:]          # from k to k-1
    down = alpha * (n - k[1:])  # from k-1 to k
    return sparse.diags([down, diag, up], offsets=[-1, 0, 1]).tocsr()


def moments_from_pvec(p_vec) -> tuple:
    """(<k>, <k^2-k>) of a degree distribution vector."""
    p = np.asarray(p_vec, dtype=float)
    k = np.arange(len(p), dtype=float)
    return float(np.sum(k * p)), float(np.sum(k * (k - 1.0) * p))


def rlad_equilibrium_moments(alpha: float, omega: float, n_nodes: int) -> tuple:
    """Stationary (<k>, <k^2-k>) of the moment ODEs for alpha + omega > 0."""
    aw = alpha + omega
    k_inf = alpha * (n_nodes - 1) / aw
    k2k_inf = alpha * (n_nodes - 2) * k_inf / aw
    return k_inf, k2k_inf
