"""Effectiveness metrics and infection-curve classification.

RCFS compares final sizes; CIAT/AIAT measure infections in excess of the
prevalence threshold qN; classification counts local maxima and inflection
points of [I](t).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.signal import find_peaks

CLASS_NO_SPIKE = "no-spike"
CLASS_UNIFORM = "uniform-spike"
CLASS_NONUNIFORM = "nonuniform-spike"
CLASS_MULTIPLE = "multiple-spikes"

PROMINENCE_FLOOR = 1e-6     # of N, filters integrator ripple in peak finding
CURVATURE_FLOOR = 1e-9      # of N, filters ripple in the second difference


@dataclass
class ThresholdMetrics:
    ciat: float
    aiat: Optional[float]                 # None when no above-threshold interval
    aiat_from_recovered: Optional[float]  # same metric via the [R] identity
    intervals: list


@dataclass
class MetricReport:
    r_inf_baseline: float
    r_inf_intervention: float
    rcfs: float
    ciat: float
    aiat: Optional[float]
    intervals: list
    classification: str
    n_maxima: int
    n_inflections: int


def rcfs(r_inf_int: float, r_inf_base: float) -> float:
    """Relative change in final size; -1 is total prevention, 0 no effect."""
    if r_inf_base <= 0:
        raise ValueError("baseline final size must be > 0")
    return (r_inf_int - r_inf_base) / r_inf_base


def threshold_intervals(traj, qn: float, scan_dt: float = 0.05) -> list:
    """Maximal intervals on which [I] > qN.

    Crossings are bracketed on a scan grid and refined with a root finder
    on the dense interpolant. An initial condition above qN opens an
    interval at t_start; an unclosed interval closes at t_end.
    """
    ts = traj.grid(scan_dt)
    vals = traj.channel("I", ts) - qn
    intervals = []
    open_t = ts[0] if vals[0] > 0 else None

    def refine(lo, hi):
        f = lambda t: traj.eval_scalar("I", t) - qn
        return brentq(f, lo, hi, xtol=1e-10)

    for j in range(1, len(ts)):
        a, b = vals[j - 1], vals[j]
        if a <= 0 < b and open_t is None:
            open_t = refine(ts[j - 1], ts[j]) if a < 0 else ts[j - 1]
        elif a > 0 >= b and open_t is not None:
            t_cross = refine(ts[j - 1], ts[j]) if b < 0 else ts[j]
            intervals.append((open_t, t_cross))
            open_t = None
    if open_t is not None:
        intervals.append((open_t, ts[-1]))
    return intervals


def ciat_aiat(traj, qn: float, gamma: float) -> ThresholdMetrics:
    """CIAT by adaptive quadrature plus AIAT via both defining formulas."""
    intervals = threshold_intervals(traj, qn)
    if not intervals:
        return ThresholdMetrics(0.0, None, None, [])

    phase_bounds = sorted({ph.t1 for ph in traj.phases})
    total = 0.0
    for (a, b) in intervals:
        cuts = [a] + [c for c in phase_bounds if a < c < b] + [b]
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            val, _ = quad(lambda t: traj.eval_scalar("I", t) - qn, lo, hi,
                          epsabs=1e-9, epsrel=1e-9, limit=200)
            total += val
    span = sum(b - a for a, b in intervals)
    aiat = total / span
    r_gain = sum(traj.eval_scalar("R", b) - traj.eval_scalar("R", a)
                 for a, b in intervals)
    aiat_r = r_gain / (gamma * span) - qn
    return ThresholdMetrics(total, aiat, aiat_r, intervals)


def classify(traj, grid_dt: float = 0.1) -> tuple:
    """(classification, n_maxima, n_inflections) of the prevalence curve.

    Counting runs to epidemic end on a uniform grid, starting once [I]
    exceeds twice the seeded infections (so the shape reflects
    transmission, not the arbitrary E/I split of the seed); if it never
    does, from the first time [I] exceeds one person. Maxima need
    prominence > 1e-6*N and inflection sign changes need
    |second difference| > 1e-9*N.
    """
    n = traj.model.epi.n_nodes
    ts = traj.grid(grid_dt)
    i_vals = traj.channel("I", ts)

    y0 = traj.phases[0].segment.sol(traj.t_start)
    seeded = traj.model.active_infection(traj.t_start, y0, traj.phases[0].aux)
    above = np.nonzero(i_vals > max(1.0, 2.0 * seeded))[0]
    if len(above) == 0:
        above = np.nonzero(i_vals > 1.0)[0]
    if len(above) == 0:
        return CLASS_NO_SPIKE, 0, 0
    i_vals = i_vals[above[0]:]

    peaks, _ = find_peaks(i_vals, prominence=PROMINENCE_FLOOR * n)
    n_maxima = int(len(peaks))

    d2 = np.diff(i_vals, 2)
    signs = np.sign(d2[np.abs(d2) > CURVATURE_FLOOR * n])
    n_inflections = int(np.sum(signs[1:] != signs[:-1])) if len(signs) else 0

    if n_maxima == 0:
        label = CLASS_NO_SPIKE
    elif n_maxima == 1:
        label = CLASS_NONUNIFORM if n_inflections > 2 else CLASS_UNIFORM
    else:
        label = CLASS_MULTIPLE
    return label, n_maxima, n_inflections


def compute_report(baseline, intervention_result, qn: float,
                   gamma: float) -> MetricReport:
    """Full per-scenario metric set.

    `baseline` is either the baseline RunResult or its final size (so sweep
    workers can reuse a cached baseline without shipping the trajectory).
    """
    r_base = baseline if isinstance(baseline, (int, float)) else baseline.r_inf
    r_int = intervention_result.r_inf
    tm = ciat_aiat(intervention_result.trajectory, qn, gamma)
    label, n_max, n_infl = classify(intervention_result.trajectory)
    return MetricReport(
        r_inf_baseline=r_base,
        r_inf_intervention=r_int,
        rcfs=rcfs(r_int, r_base),
        ciat=tm.ciat,
        aiat=tm.aiat,
        intervals=tm.intervals,
        classification=label,
        n_maxima=n_max,
        n_inflections=n_infl,
    )
