"""Shared parameter and state containers for the pairwise models."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class EpiParams:
    """Epidemiological rates and population size.

    beta: per-contact transmission rate (1/day)
    eta: exposed -> infectious rate (1/day)
    gamma: recovery rate (1/day)
    n_nodes: population size N
    """

    beta: float
    eta: float
    gamma: float
    n_nodes: int

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.eta <= 0:
            raise ValueError("eta must be > 0")
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.n_nodes < 2:
            raise ValueError("n_nodes must be >= 2")


@dataclass(frozen=True)
class NetworkMoments:
    """First two factorial degree moments and the clustering coefficient.

    k_mean = <k>, k2k = <k^2 - k>, phi = 3 * triangles / triples.
    """

    k_mean: float
    k2k: float
    phi: float

    def __post_init__(self):
        if self.k_mean < 0 or self.k2k < 0:
            raise ValueError("moments must be nonnegative")
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError("phi must lie in [0, 1]")


def check_analytic_moments(m: NetworkMoments) -> NetworkMoments:
    """Extra feasibility check for analytically constructed moments.

    Empirical moments can violate k2k >= k_mean*(k_mean - 1) through sampling
    noise, so the inequality is enforced only on this path.
    """
    if m.k2k + 1e-9 < m.k_mean * (m.k_mean - 1.0):
        raise ValueError("k2k < k_mean*(k_mean-1): infeasible degree moments")
    return m


@dataclass(frozen=True)
class RateSchedule:
    """Piecewise-constant link activation/deletion rates.

    breakpoints[i] is the time at which (alphas[i+1], omegas[i+1]) take over;
    before the first breakpoint the rates are (alphas[0], omegas[0]).
    The common constant case is RateSchedule.constant(alpha, omega).
    """

    alphas: tuple = (0.0,)
    omegas: tuple = (0.0,)
    breakpoints: tuple = ()

    def __post_init__(self):
        if len(self.alphas) != len(self.omegas):
            raise ValueError("alphas and omegas must have equal length")
        if len(self.breakpoints) != len(self.alphas) - 1:
            raise ValueError("need exactly len(alphas)-1 breakpoints")
        if any(a < 0 for a in self.alphas) or any(w < 0 for w in self.omegas):
            raise ValueError("rates must be nonnegative")
        if list(self.breakpoints) != sorted(self.breakpoints):
            raise ValueError("breakpoints must be increasing")

    @classmethod
    def constant(cls, alpha: float, omega: float) -> "RateSchedule":
        return cls(alphas=(alpha,), omegas=(omega,), breakpoints=())

    def at(self, t: float) -> tuple:
        """Return (alpha, omega) active at time t."""
        i = int(np.searchsorted(self.breakpoints, t, side="right"))
        return self.alphas[i], self.omegas[i]


# State-vector layout used by the pairwise (simplified-closure) model.
PAIRWISE_FIELDS = (
    "s", "e", "i", "r",
    "ss", "se", "si", "ee", "ei", "ii",
    "k_mean", "k2k", "phi",
)


@dataclass
class PairwiseState:
    """Expected node counts, ordered-pair counts, and network moments."""

    s: float
    e: float
    i: float
    r: float
    ss: float
    se: float
    si: float
    ee: float
    ei: float
    ii: float
    k_mean: float
    k2k: float
    phi: float

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in PAIRWISE_FIELDS], dtype=float)

    @classmethod
    def from_array(cls, y) -> "PairwiseState":
        return cls(*(float(v) for v in y))


def initial_pairwise_state(n_nodes: int, e0: float, i0: float,
                           moments: NetworkMoments, r0_count: float = 0.0) -> PairwiseState:
    """Seed a pairwise state with degree/state independence.

    Pairs use the ordered convention, so the total over all pair types is
    N*<k> and [AB]_0 = <k> * A_0 * B_0 / N.
    """
    n = float(n_nodes)
    s0 = n - e0 - i0 - r0_count
    if s0 < 0:
        raise ValueError("initial seeds exceed population")
    k = moments.k_mean

    def pair(a, b):
        return k * a * b / n

    return PairwiseState(
        s=s0, e=e0, i=i0, r=r0_count,
        ss=pair(s0, s0), se=pair(s0, e0), si=pair(s0, i0),
        ee=pair(e0, e0), ei=pair(e0, i0), ii=pair(i0, i0),
        k_mean=moments.k_mean, k2k=moments.k2k, phi=moments.phi,
    )
