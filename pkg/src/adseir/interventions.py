"""Social-distancing intervention state machines.

Both schemes drive the integrator through phases with piecewise-constant
link activation/deletion rates: the simple scheme uses fixed phase lengths,
the prevalence-dependent scheme re-triggers on the prevalence threshold.
The rates omega* and alpha* are computed once from the pre-intervention
mean degree and never rescaled.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .integrate import (DEFAULT_ATOL_PER_CAPITA, DEFAULT_RTOL, END_THRESHOLD,
                        T_MAX_DEFAULT, EventSpec, Phase, Segment, Trajectory,
                        integrate)

PHASE_FREE = "free"
PHASE_INTERVENTION = "intervention"
PHASE_HOLDING = "holding"
PHASE_RELAXATION = "relaxation"


@dataclass(frozen=True)
class InterventionPolicy:
    """Scheme kind plus the trigger, severity, and phase-length parameters."""

    scheme: str                 # "none" | "simple" | "prevalence-dependent"
    q: float = 0.0              # trigger threshold as a fraction of N
    p: float = 1.0              # severity: <k> is driven to p*<k>_0
    l_i: float = 1.0            # intervention phase length (days)
    l_h: float = 0.0            # holding phase length (simple scheme only)
    l_r: float = 1.0            # relaxation phase length (days)

    def __post_init__(self):
        if self.scheme not in ("none", "simple", "prevalence-dependent"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.scheme == "none":
            return
        if not 0.0 <= self.q < 1.0:
            raise ValueError("q must lie in [0, 1)")
        if not 0.0 < self.p <= 1.0:
            raise ValueError("p must lie in (0, 1]")
        if self.l_i <= 0 or self.l_r <= 0:
            raise ValueError("l_i and l_r must be > 0")
        if self.l_h < 0:
            raise ValueError("l_h must be >= 0")

    def derived_rates(self, k0: float, n_nodes: int) -> tuple:
        """(alpha_star, omega_star) for pre-intervention mean degree k0."""
        return (activation_rate(self.p, self.l_r, k0, n_nodes),
                deletion_rate(self.p, self.l_i))


def deletion_rate(p: float, l_i: float) -> float:
    """omega* moving <k> from k0 to p*k0 in exactly l_i days (alpha = 0)."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if l_i <= 0:
        raise ValueError("l_i must be > 0")
    return -math.log(p) / l_i


def activation_rate(p: float, l_r: float, k0: float, n_nodes: int) -> float:
    """alpha* moving <k> from p*k0 back to k0 in exactly l_r days (omega = 0)."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if l_r <= 0:
        raise ValueError("l_r must be > 0")
    if not 0.0 < k0 < n_nodes - 1:
        raise ValueError("k0 must lie in (0, N-1)")
    nm1 = float(n_nodes - 1)
    return -math.log((nm1 - k0) / (nm1 - p * k0)) / l_r


@dataclass
class PhaseRecord:
    phase: str
    t_start: float
    t_end: float
    alpha: float
    omega: float


class PhaseLog(list):
    """Ordered, contiguous phase records starting at t = 0."""

    COLUMNS = ("phase", "t_start", "t_end", "alpha", "omega")

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.COLUMNS)
            for rec in self:
                w.writerow([rec.phase, repr(rec.t_start), repr(rec.t_end),
                            repr(rec.alpha), repr(rec.omega)])


@dataclass
class RunResult:
    trajectory: Trajectory
    phase_log: PhaseLog
    never_triggered: bool = False
    converged: bool = True

    @property
    def r_inf(self) -> float:
        traj = self.trajectory
        last = traj.phases[-1]
        return traj.model.recovered(traj.t_end, traj.y_end, last.aux)


class _PhaseDriver:
    """Runs successive constant-rate phases, collecting trajectory pieces."""

    def __init__(self, model, y0, t_max, rtol, atol, q=0.0):
        self.model = model
        self.t = 0.0
        self.y = np.asarray(y0, dtype=float)
        self.aux = None
        self.t_max = t_max
        self.rtol = rtol
        self.atol = atol
        self.q = q
        self.phases = []
        self.records = PhaseLog()
        self.events = []
        self.done = False

    def record_instant(self, name, alpha, omega):
        self.records.append(PhaseRecord(name, self.t, self.t, alpha, omega))

    def run(self, name, alpha, omega, t_end=None, terminal=()):
        """Integrate one phase; returns the terminal event name or None.

        `terminal` entries are (event_name, kind, observable(t, y, aux)).
        Epidemic extinction terminates every phase; threshold crossings are
        always logged as observers when q > 0.
        """
        if self.done:
            raise RuntimeError("driver already finished")
        rhs, aux = self.model.make_phase(alpha, omega, self.t, self.aux)
        self.aux = aux

        if self.model.active_infection(self.t, self.y, aux) < END_THRESHOLD:
            # already extinct: a crossing event can never fire
            seg = _point_segment(self.t, self.y)
            self.phases.append(Phase(name=name, alpha=alpha, omega=omega,
                                     segment=seg, aux=aux))
            self.records.append(PhaseRecord(name, self.t, self.t, alpha, omega))
            self.done = True
            return "epidemic-end"

        events = [EventSpec("epidemic-end", "downward-crossing",
                            lambda t, y: self.model.active_infection(t, y, aux)
                            - END_THRESHOLD)]
        terminal_names = {"epidemic-end"}
        for ev_name, kind, obs in terminal:
            events.append(EventSpec(ev_name, kind,
                                    lambda t, y, _o=obs: _o(t, y, aux)))
            terminal_names.add(ev_name)
        if self.q > 0.0:
            qn = self.q * self.model.epi.n_nodes
            for kind, tag in (("upward-crossing", "threshold-up"),
                              ("downward-crossing", "threshold-down")):
                if tag in terminal_names:
                    continue
                events.append(EventSpec(
                    tag, kind,
                    lambda t, y: self.model.infectious(t, y, aux) - qn,
                    terminal=False))

        seg = integrate(rhs, self.y, self.t, t_end if t_end is not None else self.t_max,
                        events=events, rtol=self.rtol, atol=self.atol)
        self.phases.append(Phase(name=name, alpha=alpha, omega=omega,
                                 segment=seg, aux=aux))
        self.records.append(PhaseRecord(name, seg.t0, seg.t1, alpha, omega))
        self.events.extend(seg.observed)
        self.t = seg.t1
        self.y = seg.y_end
        if seg.event == "epidemic-end" or (seg.event is None and t_end is None):
            self.done = True
        return seg.event

    def result(self, never_triggered=False):
        traj = Trajectory(self.model, self.phases, self.events)
        # non-convergence = safeguard t_max reached with epidemic still active
        last = self.phases[-1]
        still_active = (self.model.active_infection(traj.t_end, traj.y_end, last.aux)
                        >= END_THRESHOLD)
        converged = not (traj.t_end >= self.t_max - 1e-9 and still_active)
        return RunResult(traj, self.records, never_triggered=never_triggered,
                         converged=converged)


def run_constant(model, init_state, alpha=0.0, omega=0.0, t_max=T_MAX_DEFAULT,
                 rtol=DEFAULT_RTOL, atol=None, q=0.0) -> RunResult:
    """Single free phase at fixed rates, run to epidemic end."""
    atol = _atol(model, atol)
    drv = _PhaseDriver(model, init_state, t_max, rtol, atol, q=q)
    drv.run(PHASE_FREE, alpha, omega)
    return drv.result()


def run_none(model, init_state, t_max=T_MAX_DEFAULT,
             rtol=DEFAULT_RTOL, atol=None, q=0.0) -> RunResult:
    """Baseline run: static network (alpha = omega = 0) to epidemic end."""
    return run_constant(model, init_state, 0.0, 0.0, t_max=t_max,
                        rtol=rtol, atol=atol, q=q)


def run_simple(model, moments0, policy: InterventionPolicy, init_state,
               t_max=T_MAX_DEFAULT, rtol=DEFAULT_RTOL, atol=None) -> RunResult:
    """Simple scheme: fixed-length intervention, holding, relaxation phases."""
    if policy.scheme != "simple":
        raise ValueError("policy.scheme must be 'simple'")
    atol = _atol(model, atol)
    k0 = moments0.k_mean
    n = model.epi.n_nodes
    alpha_star, omega_star = policy.derived_rates(k0, n)
    qn = policy.q * n

    drv = _PhaseDriver(model, init_state, t_max, rtol, atol, q=policy.q)
    _, aux0 = model.make_phase(0.0, 0.0, 0.0, None)
    if model.infectious(0.0, drv.y, aux0) >= qn:
        # starting at/above threshold counts as an immediate trigger
        drv.aux = aux0
        drv.events.append((0.0, "threshold-up"))
    else:
        ev = drv.run(PHASE_FREE, 0.0, 0.0, terminal=[
            ("threshold-up", "upward-crossing",
             lambda t, y, aux: model.infectious(t, y, aux) - qn)])
        if ev != "threshold-up":
            return drv.result(never_triggered=True)

    if not drv.done:
        drv.run(PHASE_INTERVENTION, 0.0, omega_star, t_end=drv.t + policy.l_i)
    if not drv.done and policy.l_h > 0:
        drv.run(PHASE_HOLDING, 0.0, 0.0, t_end=drv.t + policy.l_h)
    if not drv.done:
        drv.run(PHASE_RELAXATION, alpha_star, 0.0, t_end=drv.t + policy.l_r)
    if not drv.done:
        drv.run(PHASE_FREE, 0.0, 0.0)
    return drv.result()


def run_prevalence_dependent(model, moments0, policy: InterventionPolicy,
                             init_state, t_max=T_MAX_DEFAULT,
                             rtol=DEFAULT_RTOL, atol=None) -> RunResult:
    """Prevalence-dependent scheme: re-triggering intervention state machine."""
    if policy.scheme != "prevalence-dependent":
        raise ValueError("policy.scheme must be 'prevalence-dependent'")
    atol = _atol(model, atol)
    k0 = moments0.k_mean
    n = model.epi.n_nodes
    alpha_star, omega_star = policy.derived_rates(k0, n)
    qn = policy.q * n
    k_low = policy.p * k0

    drv = _PhaseDriver(model, init_state, t_max, rtol, atol, q=policy.q)

    def obs_i(t, y, aux):
        return model.infectious(t, y, aux) - qn

    def obs_k_low(t, y, aux):
        return model.k_mean(t, y, aux) - k_low

    def obs_k_full(t, y, aux):
        return model.k_mean(t, y, aux) - k0

    _, aux0 = model.make_phase(0.0, 0.0, 0.0, None)
    triggered = model.infectious(0.0, drv.y, aux0) >= qn
    if triggered:
        drv.aux = aux0
        drv.events.append((0.0, "threshold-up"))
    else:
        ev = drv.run(PHASE_FREE, 0.0, 0.0, terminal=[
            ("threshold-up", "upward-crossing", obs_i)])
        if ev != "threshold-up":
            return drv.result(never_triggered=True)

    state = "INTERVENING"
    while not drv.done:
        if state == "INTERVENING":
            if model.k_mean(drv.t, drv.y, drv.aux) <= k_low + 1e-9 * k0:
                drv.record_instant(PHASE_INTERVENTION, 0.0, omega_star)
            else:
                drv.run(PHASE_INTERVENTION, 0.0, omega_star, terminal=[
                    ("k-target-low", "target-hit", obs_k_low)])
                if drv.done:
                    break
            below = model.infectious(drv.t, drv.y, drv.aux) < qn
            state = "RELAXING" if below else "HOLDING"
        elif state == "HOLDING":
            drv.run(PHASE_HOLDING, 0.0, 0.0, terminal=[
                ("threshold-down", "downward-crossing", obs_i)])
            if drv.done:
                break
            state = "RELAXING"
        elif state == "RELAXING":
            if model.k_mean(drv.t, drv.y, drv.aux) >= k0 - 1e-9 * k0:
                drv.record_instant(PHASE_RELAXATION, alpha_star, 0.0)
                state = "FREE"
                continue
            ev = drv.run(PHASE_RELAXATION, alpha_star, 0.0, terminal=[
                ("k-target-full", "target-hit", obs_k_full),
                ("threshold-up", "upward-crossing", obs_i)])
            if drv.done:
                break
            state = "INTERVENING" if ev == "threshold-up" else "FREE"
        elif state == "FREE":
            ev = drv.run(PHASE_FREE, 0.0, 0.0, terminal=[
                ("threshold-up", "upward-crossing", obs_i)])
            if drv.done:
                break
            state = "INTERVENING"
    return drv.result()


def _point_segment(t, y):
    """Zero-length segment holding a frozen state."""
    y = np.asarray(y, dtype=float)

    def sol(ts):
        ts = np.asarray(ts, dtype=float)
        if ts.ndim == 0:
            return y.copy()
        return np.tile(y[:, None], (1, len(ts)))

    return Segment(t0=t, t1=t, sol=sol, y_end=y.copy(), event="epidemic-end")


def _atol(model, atol):
    if atol is not None:
        return atol
    return DEFAULT_ATOL_PER_CAPITA * model.epi.n_nodes
