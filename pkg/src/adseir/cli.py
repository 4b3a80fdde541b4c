"""Command-line entry points.

Subcommands: simulate (one scenario, baseline + intervention),
sweep (policy parameter grid), validate (stochastic ensemble vs ODE),
netgen (write a network realization). Each writes CSV outputs plus a JSON
run manifest into --out.
"""

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import BACKEND, __version__, netgen
from .adapters import SimplePairwiseModel
from .gillespie import SimConfig, ensemble_mean, run_ensemble
from .interventions import run_constant
from .model import beta_from_r0
from .params import EpiParams
from .scenario import (config_hash, prepare, run_scenario, scenario_from_dict)
from .sweep import run_sweep, sweep_from_dict, write_sweep_csv

METRICS_COLUMNS = (
    "scenario_id", "model", "scheme", "p", "q", "l_i", "l_h", "l_r",
    "r_inf_base", "r_inf_int", "rcfs", "ciat", "aiat",
    "classification", "n_maxima", "n_inflections",
    "never_triggered", "converged", "config_hash", "version",
)


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def _manifest(out_dir, command, cfg_dict, outputs, extra=None):
    payload = {
        "command": command,
        "config": cfg_dict,
        "config_hash": config_hash(cfg_dict),
        "version": __version__,
        "kernel_backend": BACKEND,
        "outputs": sorted(outputs),
    }
    if extra:
        payload.update(extra)
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args):
    d = _load(args.config)
    if args.rtol is not None:
        d.setdefault("integrator", {})["rtol"] = args.rtol
    if args.atol is not None:
        d.setdefault("integrator", {})["atol"] = args.atol
    cfg = scenario_from_dict(d)
    if args.seed is not None and cfg.network is not None:
        cfg = replace(cfg, network=replace(cfg.network, seed=args.seed))
    out = _out_dir(args)

    res = run_scenario(cfg)
    res.intervention.trajectory.to_csv(out / "trajectory.csv", dt=args.dt)
    res.baseline.trajectory.to_csv(out / "baseline.csv", dt=args.dt)
    res.intervention.phase_log.to_csv(out / "phases.csv")

    rep = res.report
    pol = cfg.policy
    row = {
        "scenario_id": cfg.scenario_id, "model": cfg.model,
        "scheme": pol.scheme, "p": pol.p, "q": pol.q,
        "l_i": pol.l_i, "l_h": pol.l_h, "l_r": pol.l_r,
        "r_inf_base": rep.r_inf_baseline, "r_inf_int": rep.r_inf_intervention,
        "rcfs": rep.rcfs, "ciat": rep.ciat,
        "aiat": "" if rep.aiat is None else rep.aiat,
        "classification": rep.classification,
        "n_maxima": rep.n_maxima, "n_inflections": rep.n_inflections,
        "never_triggered": res.intervention.never_triggered,
        "converged": res.intervention.converged,
        "config_hash": config_hash(d), "version": __version__,
    }
    with open(out / "metrics.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=METRICS_COLUMNS)
        w.writeheader()
        w.writerow(row)

    _manifest(out, "simulate", d,
              ["trajectory.csv", "baseline.csv", "phases.csv", "metrics.csv"])
    print(f"{cfg.scenario_id}: R_inf={rep.r_inf_intervention:.2f} "
          f"RCFS={rep.rcfs:+.4f} class={rep.classification}")
    return 0


def cmd_sweep(args):
    d = _load(args.config)
    cfg = sweep_from_dict(d)
    if args.threads is not None:
        cfg = replace(cfg, threads=args.threads)
    out = _out_dir(args)
    rows = run_sweep(cfg, sweep_dict=d)
    write_sweep_csv(rows, out / "sweep.csv")
    n_err = sum(1 for r in rows if r["status"] != "ok")
    _manifest(out, "sweep", d, ["sweep.csv"],
              extra={"cells": len(rows), "failed_cells": n_err})
    print(f"sweep: {len(rows)} cells, {n_err} failed -> {out / 'sweep.csv'}")
    return 0


def cmd_validate(args):
    d = _load(args.config)
    out = _out_dir(args)
    spec = netgen.NetworkSpec(**d["network"])
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    graph = netgen.generate(spec)
    moments = netgen.empirical_moments(graph)
    epi_d = d["epi"]
    if "beta" in epi_d:
        beta = epi_d["beta"]
    else:
        beta = beta_from_r0(epi_d["r0"], moments, epi_d["gamma"])
    epi = EpiParams(beta=beta, eta=epi_d["eta"], gamma=epi_d["gamma"],
                    n_nodes=spec.n)
    init = d.get("init", {})
    e0, i0 = int(init.get("e0", 10)), int(init.get("i0", 10))
    alpha, omega = d.get("alpha", 0.0), d.get("omega", 0.0)
    t_max = d.get("t_max", 250.0)
    trials = int(d.get("trials", 100))
    sim = SimConfig(graph=graph, epi=epi, alpha=alpha, omega=omega,
                    e0=e0, i0=i0, seed=int(d.get("seed", 0)), t_max=t_max)

    traces = run_ensemble(sim, trials, processes=args.threads or 1)
    grid = np.arange(0.0, t_max + 1e-9, d.get("grid_dt", 1.0))
    mean = ensemble_mean(traces, grid)

    model = SimplePairwiseModel(epi)
    y0 = model.initial_state(e0, i0, moments)
    ode = run_constant(model, y0, alpha=alpha, omega=omega, t_max=t_max)
    states = ode.trajectory.sample_states(np.minimum(grid, ode.trajectory.t_end))

    with open(out / "ensemble.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "S_mean", "E_mean", "I_mean", "R_mean",
                    "S_ode", "E_ode", "I_ode", "R_ode"])
        for j, t in enumerate(grid):
            w.writerow([f"{t:.6f}"]
                       + [repr(float(v)) for v in mean[j]]
                       + [repr(float(v)) for v in states[j, :4]])

    with open(out / "trials.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial", "t", "S", "E", "I", "R"])
        for k, tr in enumerate(traces):
            samp = tr.sample(grid)
            for j, t in enumerate(grid):
                w.writerow([k, f"{t:.6f}"] + [int(v) for v in samp[j]])

    _manifest(out, "validate", d, ["ensemble.csv", "trials.csv"],
              extra={"trials": trials,
                     "empirical_moments": {"k_mean": moments.k_mean,
                                           "k2k": moments.k2k,
                                           "phi": moments.phi}})
    peak_sim = float(mean[:, 2].max())
    peak_ode = float(states[:, 2].max())
    print(f"validate: peak I sim={peak_sim:.1f} ode={peak_ode:.1f} "
          f"({trials} trials)")
    return 0


def cmd_netgen(args):
    d = _load(args.config)
    spec = netgen.NetworkSpec(**(d.get("network", d)))
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    out = _out_dir(args)
    graph = netgen.generate(spec)
    moments = netgen.empirical_moments(graph)
    netgen.write_edgelist(graph, out / "edges.txt")
    netgen.write_sidecar(out / "network.json", spec, moments)
    _manifest(out, "netgen", spec.to_dict(), ["edges.txt", "network.json"])
    print(f"netgen: n={graph.n} edges={len(graph.edges)} "
          f"k={moments.k_mean:.3f} k2k={moments.k2k:.1f} phi={moments.phi:.4f}")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="adseir",
        description="SEIR epidemics on adaptive clustered contact networks")
    ap.add_argument("--version", action="version",
                    version=f"%(prog)s {__version__} ({BACKEND} kernel)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="JSON config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the network/simulation seed")

    p_sim = sub.add_parser("simulate", help="run one scenario")
    common(p_sim)
    p_sim.add_argument("--rtol", type=float, default=None)
    p_sim.add_argument("--atol", type=float, default=None)
    p_sim.add_argument("--dt", type=float, default=0.1,
                       help="output sampling step (days)")
    p_sim.set_defaults(func=cmd_simulate)

    p_sw = sub.add_parser("sweep", help="run a policy parameter grid")
    common(p_sw)
    p_sw.add_argument("--threads", type=int, default=None)
    p_sw.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate",
                           help="stochastic ensemble vs the pairwise ODE")
    common(p_val)
    p_val.add_argument("--threads", type=int, default=None)
    p_val.set_defaults(func=cmd_validate)

    p_net = sub.add_parser("netgen", help="write a network realization")
    common(p_net)
    p_net.set_defaults(func=cmd_netgen)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
