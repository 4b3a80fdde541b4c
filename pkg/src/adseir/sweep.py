"""Batch execution of intervention parameter grids.

A sweep fixes a base scenario and varies up to two policy parameters along
axes, with optional enumerated panels (e.g. lists of p and q). The
baseline run is computed once per sweep (it does not depend on the policy)
and shared across cells. Cells execute in a worker pool; output ordering
is row-major over panels then axes regardless of parallelism.
"""

import csv
import itertools
from dataclasses import dataclass, field, replace
from multiprocessing import get_context

import numpy as np

from . import __version__
from .metrics import compute_report
from .scenario import (ScenarioConfig, config_hash, prepare, run_intervention,
                       run_none, scenario_from_dict, scenario_to_dict)

SWEEPABLE = ("p", "q", "l_i", "l_h", "l_r")

CSV_COLUMNS = (
    "cell", "scheme", "p", "q", "l_i", "l_h", "l_r",
    "r_inf_base", "r_inf_int", "rcfs", "ciat", "aiat",
    "classification", "n_maxima", "n_inflections",
    "status", "error", "config_hash", "seed", "version",
)


@dataclass(frozen=True)
class SweepAxis:
    param: str
    values: tuple

    def __post_init__(self):
        if self.param not in SWEEPABLE:
            raise ValueError(f"cannot sweep {self.param!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepAxis":
        if "values" in d:
            vals = tuple(float(v) for v in d["values"])
        else:
            vals = tuple(np.linspace(d["min"], d["max"], int(d["count"])))
        return cls(param=d["param"], values=vals)


@dataclass(frozen=True)
class SweepConfig:
    base: ScenarioConfig
    axes: tuple                   # up to 2 SweepAxis
    panels: dict = field(default_factory=dict)   # param -> list of values
    threads: int = 1

    def __post_init__(self):
        if len(self.axes) > 2:
            raise ValueError("at most 2 axes")
        for p in self.panels:
            if p not in SWEEPABLE:
                raise ValueError(f"cannot panel over {p!r}")


def sweep_from_dict(d: dict) -> SweepConfig:
    return SweepConfig(
        base=scenario_from_dict(d["base"]),
        axes=tuple(SweepAxis.from_dict(a) for a in d.get("axes", [])),
        panels={k: list(v) for k, v in d.get("panels", {}).items()},
        threads=int(d.get("threads", 1)),
    )


def _cells(cfg: SweepConfig):
    panel_params = list(cfg.panels)
    panel_combos = list(itertools.product(*(cfg.panels[p] for p in panel_params))) or [()]
    axis_combos = list(itertools.product(*(a.values for a in cfg.axes))) or [()]
    idx = 0
    for pc in panel_combos:
        for ac in axis_combos:
            overrides = dict(zip(panel_params, pc))
            overrides.update(zip((a.param for a in cfg.axes), ac))
            yield idx, overrides
            idx += 1


def _run_cell(args):
    base_dict, overrides, r_inf_base, cell_id, chash, seed = args
    row = {c: "" for c in CSV_COLUMNS}
    row.update(cell=cell_id, config_hash=chash, seed=seed, version=__version__)
    try:
        cfg = scenario_from_dict(base_dict)
        policy = replace(cfg.policy, **overrides)
        cfg = replace(cfg, policy=policy)
        setup = prepare(cfg)
        res = run_intervention(setup)
        report = compute_report(r_inf_base, res, policy.q * cfg.n_nodes,
                                cfg.gamma)
        row.update(
            scheme=policy.scheme, p=policy.p, q=policy.q,
            l_i=policy.l_i, l_h=policy.l_h, l_r=policy.l_r,
            r_inf_base=report.r_inf_baseline,
            r_inf_int=report.r_inf_intervention,
            rcfs=report.rcfs, ciat=report.ciat,
            aiat="" if report.aiat is None else report.aiat,
            classification=report.classification,
            n_maxima=report.n_maxima, n_inflections=report.n_inflections,
            status="ok",
        )
    except Exception as exc:  # per-cell failures stay in-row
        row.update(status="error", error=f"{type(exc).__name__}: {exc}")
    return cell_id, row


def run_sweep(cfg: SweepConfig, sweep_dict: dict = None) -> list:
    """All grid cells as CSV-ready row dicts, in deterministic order."""
    base = cfg.base
    # parallelism degree is not part of the configuration identity
    ident = ({k: v for k, v in sweep_dict.items() if k != "threads"}
             if sweep_dict is not None else {"base": scenario_to_dict(base)})
    chash = config_hash(ident)
    seed = base.network.seed if base.network is not None else ""

    setup = prepare(base)
    baseline = run_none(setup.model, setup.init_state, q=base.policy.q,
                        t_max=base.t_max, rtol=base.rtol, atol=base.atol)
    r_inf_base = baseline.r_inf

    base_dict = scenario_to_dict(base)
    jobs = [(base_dict, ov, r_inf_base, cid, chash, seed)
            for cid, ov in _cells(cfg)]
    if cfg.threads > 1:
        with get_context("spawn").Pool(cfg.threads) as pool:
            results = pool.map(_run_cell, jobs)
    else:
        results = [_run_cell(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    return [row for _, row in results]


def write_sweep_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow(row)
