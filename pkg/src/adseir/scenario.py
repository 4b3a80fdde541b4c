"""Scenario configuration: JSON schema parsing and single-scenario runs.

A scenario names the network (explicit generator spec or analytic moments),
the epidemiological parameters (R0-based or raw beta), the closure model,
the intervention policy, and integrator settings. See README for the full
schema.
"""

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import netgen
from .adapters import ComplexClosureModel, SimplePairwiseModel
from .integrate import DEFAULT_RTOL, T_MAX_DEFAULT
from .interventions import (InterventionPolicy, RunResult, run_none,
                            run_prevalence_dependent, run_simple)
from .metrics import MetricReport, compute_report
from .model import beta_from_r0
from .params import EpiParams, NetworkMoments


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: str
    n_nodes: int
    eta: float
    gamma: float
    policy: InterventionPolicy
    model: str = "simple-closure"            # or "complex-closure"
    r0: Optional[float] = None               # exactly one of r0 / beta
    beta: Optional[float] = None
    network: Optional[netgen.NetworkSpec] = None   # exactly one of network / moments
    moments: Optional[NetworkMoments] = None
    e0: float = 10.0
    i0: float = 10.0
    rtol: float = DEFAULT_RTOL
    atol: Optional[float] = None
    t_max: float = T_MAX_DEFAULT

    def __post_init__(self):
        if (self.r0 is None) == (self.beta is None):
            raise ValueError("give exactly one of epi.r0 / epi.beta")
        if (self.network is None) == (self.moments is None):
            raise ValueError("give exactly one of network / moments")
        if self.model not in ("simple-closure", "complex-closure"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.model == "complex-closure" and self.network is None:
            raise ValueError("complex-closure needs a network spec "
                             "(its PGF is seeded from the degree histogram)")


def scenario_from_dict(d: dict) -> ScenarioConfig:
    epi = d["epi"]
    pol = d.get("policy", {"scheme": "none"})
    policy = InterventionPolicy(
        scheme=pol.get("scheme", "none"),
        q=pol.get("q", 0.0), p=pol.get("p", 1.0),
        l_i=pol.get("l_i", 1.0), l_h=pol.get("l_h", 0.0),
        l_r=pol.get("l_r", 1.0),
    )
    network = moments = None
    if "network" in d and "moments" in d:
        raise ValueError("give exactly one of network / moments")
    if "network" in d:
        network = netgen.NetworkSpec(**d["network"])
        n_nodes = network.n
    else:
        mm = d["moments"]
        n_nodes = int(mm["n"])
        moments = NetworkMoments(k_mean=mm["k_mean"], k2k=mm["k2k"],
                                 phi=mm["phi"])
    integ = d.get("integrator", {})
    init = d.get("init", {})
    return ScenarioConfig(
        scenario_id=d.get("id", "scenario"),
        n_nodes=n_nodes,
        eta=epi["eta"], gamma=epi["gamma"],
        r0=epi.get("r0"), beta=epi.get("beta"),
        model=d.get("model", "simple-closure"),
        policy=policy, network=network, moments=moments,
        e0=init.get("e0", 10.0), i0=init.get("i0", 10.0),
        rtol=integ.get("rtol", DEFAULT_RTOL), atol=integ.get("atol"),
        t_max=d.get("t_max", T_MAX_DEFAULT),
    )


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    d = {
        "id": cfg.scenario_id,
        "epi": {"eta": cfg.eta, "gamma": cfg.gamma},
        "model": cfg.model,
        "policy": {"scheme": cfg.policy.scheme},
        "init": {"e0": cfg.e0, "i0": cfg.i0},
        "integrator": {"rtol": cfg.rtol},
        "t_max": cfg.t_max,
    }
    if cfg.r0 is not None:
        d["epi"]["r0"] = cfg.r0
    else:
        d["epi"]["beta"] = cfg.beta
    if cfg.policy.scheme != "none":
        d["policy"].update(q=cfg.policy.q, p=cfg.policy.p, l_i=cfg.policy.l_i,
                           l_h=cfg.policy.l_h, l_r=cfg.policy.l_r)
    if cfg.atol is not None:
        d["integrator"]["atol"] = cfg.atol
    if cfg.network is not None:
        d["network"] = cfg.network.to_dict()
    else:
        d["moments"] = {"n": cfg.n_nodes, "k_mean": cfg.moments.k_mean,
                        "k2k": cfg.moments.k2k, "phi": cfg.moments.phi}
    return d


def config_hash(d: dict) -> str:
    canon = json.dumps(d, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


@dataclass
class ScenarioSetup:
    """Resolved inputs shared by the baseline and intervention runs."""

    cfg: ScenarioConfig
    epi: EpiParams
    moments: NetworkMoments
    model: object
    init_state: np.ndarray
    graph: Optional[netgen.Graph] = None


def prepare(cfg: ScenarioConfig) -> ScenarioSetup:
    graph = None
    if cfg.network is not None:
        graph = netgen.generate(cfg.network)
        moments = netgen.empirical_moments(graph)
    else:
        moments = cfg.moments
    if cfg.beta is not None:
        beta = cfg.beta
    else:
        beta = beta_from_r0(cfg.r0, moments, cfg.gamma)
    epi = EpiParams(beta=beta, eta=cfg.eta, gamma=cfg.gamma,
                    n_nodes=cfg.n_nodes)
    if cfg.model == "simple-closure":
        model = SimplePairwiseModel(epi)
    else:
        model = ComplexClosureModel(epi, netgen.degree_histogram(graph))
    init_state = model.initial_state(cfg.e0, cfg.i0, moments)
    return ScenarioSetup(cfg=cfg, epi=epi, moments=moments, model=model,
                         init_state=init_state, graph=graph)


@dataclass
class ScenarioResult:
    setup: ScenarioSetup
    baseline: RunResult
    intervention: RunResult
    report: MetricReport


def run_intervention(setup: ScenarioSetup,
                     policy: Optional[InterventionPolicy] = None) -> RunResult:
    cfg = setup.cfg
    policy = policy if policy is not None else cfg.policy
    kw = dict(t_max=cfg.t_max, rtol=cfg.rtol, atol=cfg.atol)
    if policy.scheme == "none":
        return run_none(setup.model, setup.init_state, q=policy.q, **kw)
    if policy.scheme == "simple":
        return run_simple(setup.model, setup.moments, policy,
                          setup.init_state, **kw)
    return run_prevalence_dependent(setup.model, setup.moments, policy,
                                    setup.init_state, **kw)


def run_scenario(cfg: ScenarioConfig,
                 baseline: Optional[RunResult] = None) -> ScenarioResult:
    """Baseline plus intervention run from identical initial conditions.

    The baseline can be injected (sweeps cache it per network/epi pair);
    injected or not, its metrics are identical because the run is fully
    deterministic.
    """
    setup = prepare(cfg)
    if baseline is None:
        baseline = run_none(setup.model, setup.init_state, q=cfg.policy.q,
                            t_max=cfg.t_max, rtol=cfg.rtol, atol=cfg.atol)
    if cfg.policy.scheme == "none":
        intervention = baseline
    else:
        intervention = run_intervention(setup)
    report = compute_report(baseline, intervention,
                            cfg.policy.q * cfg.n_nodes, cfg.gamma)
    return ScenarioResult(setup=setup, baseline=baseline,
                          intervention=intervention, report=report)
