"""Experiment configuration and runners.

A config is one JSON document. Powers are in dBm, rates in bit/s/Hz and
distances in meters. Every runner computes all its rows before anything is
written, and returns ``{filename: (header, rows)}``.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import analysis, model
from .errors import ConfigError
from .model import ChannelState, NetworkParams, PowerAllocation, QosTargets
from .montecarlo import Objective, Strategy, average_rates, estimate_joint_outage, grid_search_outage
from .numerics import Interval, bisect
from .outage_opt import solve_min_outage
from .rate_region import pareto_boundary
from .scenario import CellLayout, Geometry, RadioConfig, build_params, random_drop, reference_geometry
from .units import dbm_to_mw, mw_to_dbm


class Experiment(enum.Enum):
    RateRegion = "RateRegion"
    OutageSweep = "OutageSweep"
    MaxMinSweep = "MaxMinSweep"
    OutageOptSweep = "OutageOptSweep"
    LambdaSweep = "LambdaSweep"
    TrrCrossover = "TrrCrossover"


POWER_FIELDS = ("sigma2_B", "sigma2_C", "sigma2_D", "theta", "P_S", "P_C")
LINEAR_FIELDS = ("phi_SB", "phi_SC", "phi_CB", "phi_CD", "beta", "lam")


def sweep_values(spec, name: str) -> list[float]:
    """A list of numbers, or {"start", "stop", "num"} for an inclusive linspace.
    Must be non-empty and strictly increasing."""
    if isinstance(spec, dict):
        try:
            vals = np.linspace(float(spec["start"]), float(spec["stop"]), int(spec["num"])).tolist()
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"sweep {name!r}: need start/stop/num ({e})") from None
    elif isinstance(spec, (list, tuple)):
        vals = [float(v) for v in spec]
    elif isinstance(spec, (int, float)):
        vals = [float(spec)]
    else:
        raise ConfigError(f"sweep {name!r}: expected a list or a range object")
    if not vals:
        raise ConfigError(f"sweep {name!r} is empty")
    if any(not math.isfinite(v) for v in vals):
        raise ConfigError(f"sweep {name!r} has non-finite values")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError(f"sweep {name!r} must be strictly increasing")
    return vals


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: Experiment
    radio: RadioConfig = RadioConfig()
    geometry: Geometry = field(default_factory=reference_geometry)
    overrides: dict = field(default_factory=dict)
    targets: QosTargets = QosTargets(1.0, 1.0)
    channels: ChannelState = ChannelState(0.5, 0.5, 0.5, 0.5)
    sweep: dict = field(default_factory=dict)
    trials: int = 100_000
    seed: int = 0
    workers: int = 1
    output: str = "out"

    def params(self, **radio_changes) -> NetworkParams:
        radio = replace(self.radio, **radio_changes) if radio_changes else self.radio
        p = build_params(self.geometry, radio)
        return replace(p, **self.overrides) if self.overrides else p

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment.value,
            "radio": dataclasses.asdict(self.radio),
            "geometry": {"B": list(self.geometry.B), "C": list(self.geometry.C),
                         "S": list(self.geometry.S), "D": list(self.geometry.D),
                         "cell_radius": self.geometry.cell_radius,
                         "min_bs_distance": self.geometry.min_bs_distance,
                         "pathloss_exponent": self.geometry.pathloss_exponent},
            "overrides": dict(self.overrides),
            "targets": {"eta_B": self.targets.eta_B, "eta_D": self.targets.eta_D},
            "channels": dataclasses.asdict(self.channels),
            "sweep": self.sweep,
            "trials": self.trials, "seed": self.seed, "output": self.output,
        }


def _geometry(spec) -> Geometry:
    if spec is None or spec == "reference":
        return reference_geometry()
    if not isinstance(spec, dict):
        raise ConfigError("geometry must be 'reference' or an object")
    if "layout" in spec or "drop_seed" in spec:
        layout = CellLayout(**spec.get("layout", {}))
        return random_drop(layout, int(spec.get("drop_seed", 0)))
    pts = {k: tuple(float(x) for x in spec[k]) for k in ("B", "C", "S", "D")}
    extra = {k: float(spec[k]) for k in ("cell_radius", "min_bs_distance", "pathloss_exponent") if k in spec}
    return Geometry(**pts, **extra)


def _overrides(spec: dict) -> dict:
    out = {}
    for k, v in spec.items():
        if k.endswith("_dBm") and k[:-4] in POWER_FIELDS:
            out[k[:-4]] = float(dbm_to_mw(v))
        elif k in LINEAR_FIELDS or k in POWER_FIELDS:
            out[k] = float(v)
        else:
            raise ConfigError(f"unknown override {k!r}")
    return out


def parse_config(doc: dict, seed: int | None = None, trials: int | None = None,
                 out: str | None = None, workers: int | None = None) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    known = {"experiment", "radio", "geometry", "overrides", "targets", "channels",
             "sweep", "trials", "seed", "workers", "output"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        exp = Experiment(doc["experiment"])
    except (KeyError, ValueError):
        raise ConfigError(f"experiment must be one of {[e.value for e in Experiment]}") from None
    try:
        cfg = ExperimentConfig(
            experiment=exp,
            radio=RadioConfig(**doc.get("radio", {})),
            geometry=_geometry(doc.get("geometry")),
            overrides=_overrides(doc.get("overrides", {})),
            targets=QosTargets(**doc.get("targets", {"eta_B": 1.0, "eta_D": 1.0})),
            channels=ChannelState(**doc.get("channels", {"h_SB": 0.5, "h_SC": 0.5, "h_CB": 0.5, "h_CD": 0.5})),
            sweep=dict(doc.get("sweep", {})),
            trials=int(trials if trials is not None else doc.get("trials", 100_000)),
            seed=int(seed if seed is not None else doc.get("seed", 0)),
            workers=int(workers if workers is not None else doc.get("workers", 1)),
            output=str(out if out is not None else doc.get("output", "out")),
        )
        cfg.params()  # surfaces NetworkParams invariant violations at load
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from None
    if cfg.trials < 0:
        raise ConfigError("trials must be >= 0")
    return cfg


def _req(cfg: ExperimentConfig, key: str, default=None) -> list[float]:
    spec = cfg.sweep.get(key, default)
    if spec is None:
        raise ConfigError(f"{cfg.experiment.value} needs sweep.{key}")
    return sweep_values(spec, key)


def _budget_check(p: NetworkParams, pcs_mw, what="p_C") -> None:
    if max(pcs_mw) > p.P_C * (1 + 1e-12):
        raise ConfigError(f"{what} sweep exceeds the CU budget P_C = {mw_to_dbm(p.P_C):.3f} dBm")


# ------------------------------------------------------------ runners

def run_rate_region(cfg: ExperimentConfig):
    lams = _req(cfg, "lam", [0.0, 0.5])
    n = int(cfg.sweep.get("n_points", 20))
    geometric = bool(cfg.sweep.get("geometric", False))
    if n < 2:
        raise ConfigError("n_points must be >= 2")
    rows = []
    for lam in lams:
        p = cfg.params(lam=lam)
        for pt in pareto_boundary(p, cfg.channels, n, geometric=geometric):
            rows.append((lam, pt.R_B_target, pt.alpha, mw_to_dbm(pt.p_C), pt.R_D, pt.case))
    return {"rate_region.csv": (("lam", "R_B_target", "alpha", "p_C_dBm", "R_D", "case"), rows)}


def run_outage_sweep(cfg: ExperimentConfig):
    alphas = _req(cfg, "alpha", [0.6, 0.7, 0.8])
    pcs = _req(cfg, "p_C_dBm", {"start": -10, "stop": 30, "num": 20})
    p = cfg.params()
    _budget_check(p, [dbm_to_mw(x) for x in pcs])
    t = cfg.targets
    rows = []
    for a in alphas:
        for pc_dbm in pcs:
            alloc = PowerAllocation(a, float(dbm_to_mw(pc_dbm)))
            ex = analysis.outage_exact(p, alloc, t).p_out
            bd = analysis.outage_upper_bound(p, alloc, t)
            if cfg.trials > 0:
                mc = estimate_joint_outage(p, alloc, t, cfg.trials, cfg.seed, workers=cfg.workers)
                m, se = mc.mean, mc.std_err
            else:
                m = se = float("nan")
            rows.append((a, pc_dbm, ex, bd, m, se))
    header = ("alpha", "p_C_dBm", "p_out_exact", "p_out_bound", "p_out_mc", "p_out_mc_stderr")
    return {"outage_sweep.csv": (header, rows)}


def run_maxmin_sweep(cfg: ExperimentConfig):
    budgets = _req(cfg, "P_C_dBm", {"start": -10, "stop": 30, "num": 9})
    trials = int(cfg.sweep.get("rate_trials", min(cfg.trials, 2000)))
    if trials < 1:
        raise ConfigError("MaxMinSweep needs at least one trial")
    rows = []
    for pc_dbm in budgets:
        p = cfg.params(P_C_dBm=pc_dbm)
        for strat in (Strategy.JOA, Strategy.RFA):
            r = average_rates(p, strat, cfg.targets, trials, cfg.seed, workers=cfg.workers)
            rows.append((pc_dbm, strat.value, r.R_B, r.R_D, r.R_min, r.R_sum, r.p_out))
    header = ("P_C_dBm", "strategy", "R_B", "R_D", "R_min", "R_sum", "p_out")
    return {"maxmin_sweep.csv": (header, rows)}


def run_outage_opt(cfg: ExperimentConfig):
    p = cfg.params()
    t = cfg.targets
    n_grid = int(cfg.sweep.get("grid", 400))
    n_alpha = int(cfg.sweep.get("n_alpha", 50))
    pcs = _req(cfg, "p_C_dBm", [0.0, 10.0, 20.0, 23.0])
    _budget_check(p, [dbm_to_mw(x) for x in pcs])
    alphas = sweep_values(cfg.sweep.get("alpha", {
        "start": analysis.alpha_floor(t.xi_B) + 0.5 * (1 - analysis.alpha_floor(t.xi_B)) / n_alpha,
        "stop": 1 - 0.5 * (1 - analysis.alpha_floor(t.xi_B)) / n_alpha, "num": n_alpha}), "alpha")

    sol = solve_min_outage(p, t)
    curves = []
    for pc_dbm in pcs:
        for a in alphas:
            alloc = PowerAllocation(a, float(dbm_to_mw(pc_dbm)))
            curves.append((pc_dbm, a, analysis.outage_exact(p, alloc, t).p_out,
                           analysis.outage_upper_bound(p, alloc, t)))

    ex_opt = analysis.outage_exact(p, PowerAllocation(sol.alpha_opt, sol.p_C_opt), t).p_out
    gb = grid_search_outage(p, t, Objective.Bound, n_grid, n_grid)
    ge = grid_search_outage(p, t, Objective.Exact, n_grid, n_grid)
    summary = [(sol.alpha_opt, mw_to_dbm(sol.p_C_opt), sol.p_out_bound, ex_opt,
                sol.branch.value, sol.pc_case.value,
                gb[0], mw_to_dbm(gb[1]), gb[2], ge[0], mw_to_dbm(ge[1]), ge[2])]
    return {
        "outage_opt_curves.csv": (("p_C_dBm", "alpha", "p_out_exact", "p_out_bound"), curves),
        "outage_opt_solution.csv": (("alpha_opt", "p_C_opt_dBm", "bound_at_opt", "exact_at_opt",
                                     "alpha_branch", "pc_case", "grid_alpha_bound", "grid_p_C_dBm_bound",
                                     "grid_min_bound", "grid_alpha_exact", "grid_p_C_dBm_exact",
                                     "grid_min_exact"), summary),
    }


def fd_hd_rows(cfg: ExperimentConfig, lams, beta: float, alpha: float, pc_mw=None, trr_db=None):
    """One row per lam: FD/HD joint outage and the FD per-link split.

    Either the CU power is fixed (``pc_mw``) or it follows from a fixed TRR.
    """
    out = []
    for lam in lams:
        p = cfg.params(lam=lam, beta=beta)
        if trr_db is not None:
            if lam >= 1.0:
                raise ConfigError("TRR inversion is undefined at lam = 1")
            pc = model.pc_for_trr(10 ** (trr_db / 10), p.beta, lam)
            p = replace(p, P_C=pc)
        else:
            pc = pc_mw if pc_mw is not None else p.P_C
        alloc = PowerAllocation(alpha, pc)
        links = analysis.link_outages(p, alloc, cfg.targets)
        hd = analysis.hd_outage_exact(p, alloc, cfg.targets)
        out.append((p, lam, pc, links, hd))
    return out


def crossover(cfg: ExperimentConfig, beta: float, alpha: float, pc_mw: float | None = None,
              lam_hi: float = 0.999) -> tuple[float, float] | None:
    """lam (and TRR in dB) where FD and HD joint outage meet at fixed p_C;
    None without a sign change on [0, lam_hi]."""
    def diff(lam):
        (p, _, pc, links, hd), = fd_hd_rows(cfg, [lam], beta, alpha, pc_mw)
        return links.joint - hd
    if diff(0.0) * diff(lam_hi) > 0:
        return None
    lam = bisect(diff, Interval(0.0, lam_hi), tol=1e-12)
    p = cfg.params(lam=lam, beta=beta)
    return lam, model.trr_db(p, pc_mw if pc_mw is not None else p.P_C)


def run_lambda_sweep(cfg: ExperimentConfig):
    lams = _req(cfg, "lam", {"start": 0.0, "stop": 0.99, "num": 100})
    betas = _req(cfg, "beta", [1e-4, 1e-2])
    alpha = float(cfg.sweep.get("alpha", 0.95))
    pc = cfg.sweep.get("p_C_dBm")
    pc_mw = float(dbm_to_mw(pc)) if pc is not None else None
    rows, cross = [], []
    for beta in betas:
        for p, lam, pcv, links, hd in fd_hd_rows(cfg, lams, beta, alpha, pc_mw):
            rows.append((beta, lam, model.trr_db(p, pcv), links.joint, hd, links.uplink, links.d2d))
        c = crossover(cfg, beta, alpha, pc_mw, lam_hi=lams[-1])
        cross.append((beta,) + (c if c else (float("nan"), float("nan"))))
    return {
        "lambda_sweep.csv": (("beta", "lam", "trr_dB", "p_out_fd", "p_out_hd", "uplink_out_fd",
                              "d2d_out_fd"), rows),
        "lambda_crossover.csv": (("beta", "lam_cross", "trr_cross_dB"), cross),
    }


def run_trr_crossover(cfg: ExperimentConfig):
    lams = _req(cfg, "lam", {"start": 0.0, "stop": 0.95, "num": 20})
    if lams[-1] >= 1.0:
        raise ConfigError("TRR inversion is undefined at lam = 1; keep the lam sweep below 1")
    betas = _req(cfg, "beta", [1e-4, 1e-2])
    trrs = _req(cfg, "trr_dB", [130.0])
    alpha = float(cfg.sweep.get("alpha", 0.95))
    rows = []
    for trr in trrs:
        for beta in betas:
            for p, lam, pc, links, hd in fd_hd_rows(cfg, lams, beta, alpha, trr_db=trr):
                rows.append((trr, beta, lam, mw_to_dbm(pc), links.joint, hd, links.uplink, links.d2d))
    header = ("trr_dB", "beta", "lam", "p_C_dBm", "p_out_fd", "p_out_hd", "uplink_out_fd", "d2d_out_fd")
    return {"trr_crossover.csv": (header, rows)}


RUNNERS = {
    Experiment.RateRegion: run_rate_region,
    Experiment.OutageSweep: run_outage_sweep,
    Experiment.MaxMinSweep: run_maxmin_sweep,
    Experiment.OutageOptSweep: run_outage_opt,
    Experiment.LambdaSweep: run_lambda_sweep,
    Experiment.TrrCrossover: run_trr_crossover,
}


def run_experiment(cfg: ExperimentConfig):
    return RUNNERS[cfg.experiment](cfg)
