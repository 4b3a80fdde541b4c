"""Exact continuous-time simulation of SEIR spread with random link
activation/deletion on an explicit graph.

Event channels and rates: transmission beta*|SI edges|, progression
eta*E, recovery gamma*I, deletion omega*|edges|, activation
alpha*(C(N,2) - |edges|). The SI edge set and the edge list are maintained
incrementally so each event is O(degree).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .netgen import Graph
from .params import EpiParams

S, E, I, R = 0, 1, 2, 3
_STATE_NAMES = ("S", "E", "I", "R")


class _IndexedSet:
    """Set with O(1) add/remove/uniform-choice (list + position map)."""

    def __init__(self):
        self.items = []
        self.pos = {}

    def __len__(self):
        return len(self.items)

    def __contains__(self, x):
        return x in self.pos

    def add(self, x):
        if x not in self.pos:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def discard(self, x):
        j = self.pos.pop(x, None)
        if j is None:
            return
        last = self.items.pop()
        if j < len(self.items):
            self.items[j] = last
            self.pos[last] = j

    def choose(self, rng):
        return self.items[rng.integers(len(self.items))]


@dataclass(frozen=True)
class SimConfig:
    graph: Graph
    epi: EpiParams
    alpha: float
    omega: float
    e0: int
    i0: int
    seed: int
    t_max: float = 1000.0

    def __post_init__(self):
        if self.e0 + self.i0 > self.graph.n:
            raise ValueError("initial seeds exceed population")
        if self.graph.n != self.epi.n_nodes:
            raise ValueError("graph size and epi.n_nodes disagree")


@dataclass
class SimTrace:
    """Event times with piecewise-constant compartment counts.

    times[0] = 0 holds the initial counts; counts[j] applies on
    [times[j], times[j+1]).
    """

    times: np.ndarray
    counts: np.ndarray          # shape (len(times), 4): S, E, I, R
    events: list = field(default_factory=list)   # (t, kind)

    def sample(self, grid) -> np.ndarray:
        """Left-continuous sampling of the counts on a time grid."""
        grid = np.asarray(grid, dtype=float)
        idx = np.searchsorted(self.times, grid, side="left") - 1
        idx = np.clip(idx, 0, len(self.times) - 1)
        # at t = 0 there is no pre-initial state: use the initial counts
        idx[grid <= self.times[0]] = 0
        return self.counts[idx]


def gillespie_run(cfg: SimConfig) -> SimTrace:
    """One statistically exact realization."""
    rng = np.random.default_rng([cfg.seed])
    return _run(cfg, rng)


def gillespie_trial(cfg: SimConfig, trial: int) -> SimTrace:
    """Trial `trial` of an ensemble keyed by cfg.seed."""
    rng = np.random.default_rng([cfg.seed, trial])
    return _run(cfg, rng)


def _run(cfg: SimConfig, rng) -> SimTrace:
    n = cfg.graph.n
    beta, eta, gamma = cfg.epi.beta, cfg.epi.eta, cfg.epi.gamma
    alpha, omega = cfg.alpha, cfg.omega
    pairs_total = n * (n - 1) // 2

    status = np.full(n, S, dtype=np.int8)
    seeds = rng.choice(n, size=cfg.e0 + cfg.i0, replace=False)
    exposed = _IndexedSet()
    infectious = _IndexedSet()
    for v in seeds[:cfg.e0]:
        status[v] = E
        exposed.add(int(v))
    for v in seeds[cfg.e0:]:
        status[v] = I
        infectious.add(int(v))

    adj = cfg.graph.adjacency()
    edges = _IndexedSet()
    si = _IndexedSet()          # (s_node, i_node) pairs over current edges
    for u, v in cfg.graph.edges:
        edges.add((u, v))
        su, sv = status[u], status[v]
        if su == S and sv == I:
            si.add((u, v))
        elif su == I and sv == S:
            si.add((v, u))

    counts = [n - cfg.e0 - cfg.i0, cfg.e0, cfg.i0, 0]
    t = 0.0
    times = [0.0]
    trace_counts = [tuple(counts)]
    events = []

    def log(kind):
        times.append(t)
        trace_counts.append(tuple(counts))
        events.append((t, kind))

    while t < cfg.t_max:
        r_trans = beta * len(si)
        r_prog = eta * len(exposed)
        r_rec = gamma * len(infectious)
        r_del = omega * len(edges)
        r_act = alpha * (pairs_total - len(edges))
        total = r_trans + r_prog + r_rec + r_del + r_act
        if total <= 0.0:
            break
        t += rng.exponential(1.0 / total)
        if t >= cfg.t_max:
            t = cfg.t_max
            break
        u = rng.random() * total
        if u < r_trans:
            s_node, _ = si.choose(rng)
            status[s_node] = E
            exposed.add(s_node)
            for nb in adj[s_node]:
                if status[nb] == I:
                    si.discard((s_node, nb))
            counts[S] -= 1
            counts[E] += 1
            log("transmission")
        elif u < r_trans + r_prog:
            v = exposed.choose(rng)
            exposed.discard(v)
            infectious.add(v)
            status[v] = I
            for nb in adj[v]:
                if status[nb] == S:
                    si.add((nb, v))
            counts[E] -= 1
            counts[I] += 1
            log("progression")
        elif u < r_trans + r_prog + r_rec:
            v = infectious.choose(rng)
            infectious.discard(v)
            status[v] = R
            for nb in adj[v]:
                if status[nb] == S:
                    si.discard((nb, v))
            counts[I] -= 1
            counts[R] += 1
            log("recovery")
        elif u < r_trans + r_prog + r_rec + r_del:
            a, b = edges.choose(rng)
            edges.discard((a, b))
            adj[a].discard(b)
            adj[b].discard(a)
            _drop_si(si, status, a, b)
            log("deletion")
        else:
            while True:
                a = int(rng.integers(n))
                b = int(rng.integers(n))
                if a == b:
                    continue
                if a > b:
                    a, b = b, a
                if (a, b) not in edges:
                    break
            edges.add((a, b))
            adj[a].add(b)
            adj[b].add(a)
            _add_si(si, status, a, b)
            log("activation")

    return SimTrace(times=np.asarray(times), counts=np.asarray(trace_counts),
                    events=events)


def _drop_si(si, status, a, b):
    if status[a] == S and status[b] == I:
        si.discard((a, b))
    elif status[a] == I and status[b] == S:
        si.discard((b, a))


def _add_si(si, status, a, b):
    if status[a] == S and status[b] == I:
        si.add((a, b))
    elif status[a] == I and status[b] == S:
        si.add((b, a))


def run_ensemble(cfg: SimConfig, n_trials: int, processes: int = 1) -> list:
    """n_trials independent runs; trial index is mixed into the seed so the
    ensemble is identical at any parallelism degree."""
    if processes > 1:
        from multiprocessing import Pool

        with Pool(processes) as pool:
            return pool.starmap(gillespie_trial,
                                [(cfg, k) for k in range(n_trials)])
    return [gillespie_trial(cfg, k) for k in range(n_trials)]


def ensemble_mean(traces, grid) -> np.ndarray:
    """Pointwise mean of the compartment counts over traces, shape (T, 4)."""
    if not traces:
        raise ValueError("need at least one trace")
    grid = np.asarray(grid, dtype=float)
    acc = np.zeros((len(grid), 4))
    for tr in traces:
        acc += tr.sample(grid)
    return acc / len(traces)
