"""Adaptive integration with event location, and the Trajectory container.

Integration is delegated to scipy's embedded RK45 pair with dense output;
events are located on the dense interpolant by scipy's root finder, which
is well inside the 1e-8 day tolerance budget. Simultaneous events are
ordered deterministically: timer < target-hit < crossing.
"""

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

EVENT_KINDS = ("upward-crossing", "downward-crossing", "target-hit", "timer")
_PRIORITY = {"timer": 0, "target-hit": 1, "upward-crossing": 2, "downward-crossing": 2}

CHANNELS = ("S", "E", "I", "R", "SS", "SE", "SI", "EE", "EI", "II",
            "k_mean", "k2k", "phi")
CSV_COLUMNS = ("t",) + CHANNELS + ("alpha", "omega", "phase")

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL_PER_CAPITA = 1e-10
T_MAX_DEFAULT = 3650.0
END_THRESHOLD = 1.0


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class EventSpec:
    """A named scalar observable of (t, state) watched during integration."""

    name: str
    kind: str
    observable: Callable[[float, np.ndarray], float]
    terminal: bool = True

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")

    @property
    def priority(self) -> int:
        return _PRIORITY[self.kind]


@dataclass
class Segment:
    """One uninterrupted stretch of integration with its dense interpolant."""

    t0: float
    t1: float
    sol: object                      # scipy OdeSolution, in global time
    y_end: np.ndarray
    event: Optional[str]             # terminal event name, None if t_max hit
    observed: list = field(default_factory=list)   # (time, name) non-terminal


def _scipy_event(ev: EventSpec):
    def f(t, y, _obs=ev.observable):
        return _obs(t, y)

    f.terminal = ev.terminal
    if ev.kind == "upward-crossing" or ev.kind == "timer":
        f.direction = 1.0
    elif ev.kind == "downward-crossing":
        f.direction = -1.0
    else:
        f.direction = 0.0
    return f


def integrate(rhs, y0, t0: float, t_max: float, events=(),
              rtol: float = DEFAULT_RTOL, atol: float = 1e-8,
              max_step: float = np.inf) -> Segment:
    """Integrate until t_max or the earliest terminal event.

    Returns a Segment carrying the dense interpolant, the terminal event
    name (if any) and the log of non-terminal event occurrences.
    """
    # scipy breaks exact ties by list order, so order by kind priority
    events = sorted(events, key=lambda e: e.priority)
    if t_max <= t0:
        raise ValueError("t_max must exceed t0")
    res = solve_ivp(rhs, (t0, t_max), np.asarray(y0, dtype=float),
                    method="RK45", dense_output=True,
                    events=[_scipy_event(e) for e in events] or None,
                    rtol=rtol, atol=atol, max_step=max_step)
    if res.status == -1:
        raise IntegrationError(res.message)
    if np.any(~np.isfinite(res.y[:, -1])):
        raise IntegrationError("non-finite state produced by the RHS")

    observed = []
    terminal_hits = []
    for ev, t_ev in zip(events, res.t_events or []):
        if len(t_ev) == 0:
            continue
        if ev.terminal:
            terminal_hits.append((float(t_ev[-1]), ev.priority, ev.name))
        observed.extend((float(te), ev.name) for te in t_ev)

    if res.status == 1 and terminal_hits:
        # events within the root-finding tolerance count as simultaneous
        # and are ordered by kind priority
        t_first = min(t for t, _, _ in terminal_hits)
        ties = [h for h in terminal_hits if h[0] <= t_first + 1e-9]
        ties.sort(key=lambda h: (h[1], h[2]))
        t1, _, name = ties[0]
        y_end = res.sol(t1)
    else:
        t1, name = float(res.t[-1]), None
        y_end = res.y[:, -1]
    observed = sorted(o for o in observed if o[0] <= t1 + 1e-12)
    return Segment(t0=t0, t1=t1, sol=res.sol, y_end=np.asarray(y_end),
                   event=name, observed=observed)


@dataclass
class Phase:
    """A Segment annotated with the active rates and phase label."""

    name: str
    alpha: float
    omega: float
    segment: Segment
    aux: object = None               # model-specific per-phase data

    @property
    def t0(self):
        return self.segment.t0

    @property
    def t1(self):
        return self.segment.t1


class Trajectory:
    """Piecewise dense solution over successive phases, with an event log."""

    def __init__(self, model, phases, events=None):
        self.model = model
        self.phases = list(phases)
        self.events = sorted(events or [])
        if not self.phases:
            raise ValueError("trajectory needs at least one phase")

    @property
    def t_start(self) -> float:
        return self.phases[0].t0

    @property
    def t_end(self) -> float:
        return self.phases[-1].t1

    @property
    def y_end(self) -> np.ndarray:
        return self.phases[-1].segment.y_end

    def _phase_at(self, t: float) -> Phase:
        for ph in self.phases:
            if t <= ph.t1 or ph is self.phases[-1]:
                return ph
        return self.phases[-1]

    def sample_states(self, ts) -> np.ndarray:
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.empty((len(ts), len(self.phases[0].segment.y_end)))
        bounds = [ph.t1 for ph in self.phases]
        idx = np.searchsorted(bounds, ts, side="left")
        idx = np.clip(idx, 0, len(self.phases) - 1)
        for j in np.unique(idx):
            ph = self.phases[j]
            sel = idx == j
            tt = np.clip(ts[sel], ph.t0, ph.t1)
            out[sel] = ph.segment.sol(tt).T
        return out

    def channels(self, ts) -> dict:
        """Dense derived channels (S .. phi, alpha, omega, phase) at ts."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        states = self.sample_states(ts)
        bounds = [ph.t1 for ph in self.phases]
        idx = np.clip(np.searchsorted(bounds, ts, side="left"),
                      0, len(self.phases) - 1)
        chans = {name: np.empty(len(ts)) for name in CHANNELS}
        alpha = np.empty(len(ts))
        omega = np.empty(len(ts))
        labels = np.empty(len(ts), dtype=object)
        for j in np.unique(idx):
            ph = self.phases[j]
            sel = idx == j
            ph_ch = self.model.channels(ts[sel], states[sel], ph)
            for name in CHANNELS:
                chans[name][sel] = ph_ch[name]
            alpha[sel] = ph.alpha
            omega[sel] = ph.omega
            labels[sel] = ph.name
        chans["alpha"] = alpha
        chans["omega"] = omega
        chans["phase"] = labels
        return chans

    def channel(self, name: str, ts) -> np.ndarray:
        col = getattr(self.model, "STATE_COLUMNS", {}).get(name)
        if col is not None:
            return self.sample_states(ts)[:, col]
        return self.channels(ts)[name]

    def eval_scalar(self, name: str, t: float) -> float:
        return float(self.channel(name, [t])[0])

    def grid(self, dt: float = 0.1) -> np.ndarray:
        ts = np.arange(self.t_start, self.t_end, dt)
        if len(ts) == 0 or ts[-1] < self.t_end:
            ts = np.append(ts, self.t_end)
        return ts

    def to_csv(self, path, dt: float = 0.1):
        ts = self.grid(dt)
        ch = self.channels(ts)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for idx, t in enumerate(ts):
                row = [f"{t:.6f}"]
                row += [repr(float(ch[name][idx])) for name in CHANNELS]
                row += [repr(float(ch["alpha"][idx])), repr(float(ch["omega"][idx]))]
                row.append(ch["phase"][idx])
                w.writerow(row)
