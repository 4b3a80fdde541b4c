"""Time-dependent degree-distribution generating function under link
activation/deletion, in closed form.

g(x,t) = g0(M(x,t)) * P(x,t)^(N-1) with a Moebius argument M and power
factor P; first and second x-derivatives are obtained by direct
differentiation (M and P have x-independent first derivatives, which keeps
the chain rule short).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.sparse.linalg import expm_multiply

from .model import kolmogorov_matrix


@dataclass(frozen=True)
class PgfSpec:
    """Initial degree histogram plus the RLAD rates acting on it."""

    coeffs: tuple    # p_k(0) for k = 0 .. N-1
    alpha: float
    omega: float
    n_nodes: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if len(c) != self.n_nodes:
            raise ValueError("need one coefficient per possible degree (N)")
        if np.any(c < -1e-12):
            raise ValueError("coefficients must be nonnegative")
        if abs(c.sum() - 1.0) > 1e-9:
            raise ValueError("coefficients must sum to 1")

    @classmethod
    def from_histogram(cls, p_k, alpha: float, omega: float, n_nodes: int) -> "PgfSpec":
        c = np.zeros(n_nodes)
        p = np.asarray(p_k, dtype=float)
        c[: len(p)] = p
        return cls(coeffs=tuple(c), alpha=alpha, omega=omega, n_nodes=n_nodes)


@lru_cache(maxsize=64)
def _g0_derivs(spec: PgfSpec):
    c = np.asarray(spec.coeffs)
    # drop the trailing tail whose total mass is < 1e-14: polyval cost is
    # linear in the padded length N otherwise
    tail = np.cumsum(np.abs(c[::-1]))[::-1]
    keep = np.nonzero(tail > 1e-14)[0]
    c = c[: keep[-1] + 1] if len(keep) else c[:1]
    c1 = npoly.polyder(c)
    c2 = npoly.polyder(c, 2)
    return c, c1, c2


def pgf_eval(spec: PgfSpec, x: float, t: float):
    """(g, g_x, g_xx) of the closed-form g(x,t) at a point.

    The static case alpha = omega = 0 short-circuits to g0 and its
    derivatives.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    c, c1, c2 = _g0_derivs(spec)
    a, w = spec.alpha, spec.omega
    if a + w == 0.0:
        return (float(npoly.polyval(x, c)),
                float(npoly.polyval(x, c1)),
                float(npoly.polyval(x, c2)))

    nm1 = spec.n_nodes - 1
    ee = math.exp(-(a + w) * t)
    A = w + a * x + w * (x - 1.0) * ee
    B = w + a * x - a * (x - 1.0) * ee
    Ap = a + w * ee
    Bp = a - a * ee
    M = A / B
    Mp = (Ap * B - A * Bp) / (B * B)
    Mpp = -2.0 * Mp * Bp / B
    P = B / (a + w)
    Pp = Bp / (a + w)

    g0 = float(npoly.polyval(M, c))
    g0p = float(npoly.polyval(M, c1))
    g0pp = float(npoly.polyval(M, c2))

    Pn1 = P ** nm1
    Pn2 = P ** (nm1 - 1)
    Pn3 = P ** (nm1 - 2)

    g = g0 * Pn1
    g_x = g0p * Mp * Pn1 + g0 * nm1 * Pn2 * Pp
    g_xx = ((g0pp * Mp * Mp + g0p * Mpp) * Pn1
            + 2.0 * g0p * Mp * nm1 * Pn2 * Pp
            + g0 * nm1 * (nm1 - 1) * Pn3 * Pp * Pp)
    return g, g_x, g_xx


def evolve_coeffs(spec: PgfSpec, dt: float) -> np.ndarray:
    """Degree distribution after dt under spec's rates.

    Applies the Kolmogorov semigroup (sparse matrix exponential); used to
    rebase the PGF when the activation/deletion rates change between
    intervention phases.
    """
    p0 = np.asarray(spec.coeffs)
    if dt == 0.0 or spec.alpha + spec.omega == 0.0:
        return p0.copy()
    n = spec.n_nodes
    occupied = np.nonzero(p0 > 1e-16)[0]
    k_hi = int(occupied[-1]) if len(occupied) else 0
    # truncated support: room for upward drift plus diffusive spread
    k_cap = k_hi + math.ceil(spec.alpha * (n - 1) * dt) + \
        10 * math.ceil(math.sqrt(k_hi + 1)) + 20
    while True:
        k_cap = min(k_cap, n - 1)
        A = kolmogorov_matrix(spec.alpha, spec.omega, n, k_max=k_cap)
        p = expm_multiply(A * dt, p0[: k_cap + 1])
        if k_cap == n - 1 or p[-5:].sum() < 1e-12:
            break
        k_cap *= 2
    out = np.zeros(n)
    out[: k_cap + 1] = np.clip(p, 0.0, None)
    return out / out.sum()


def rebase(spec: PgfSpec, dt: float, alpha: float, omega: float) -> PgfSpec:
    """New PgfSpec whose t=0 distribution is spec's state at time dt."""
    return PgfSpec(coeffs=tuple(evolve_coeffs(spec, dt)),
                   alpha=alpha, omega=omega, n_nodes=spec.n_nodes)
