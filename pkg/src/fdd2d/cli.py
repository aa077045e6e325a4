"""Command line entry point.

    fdd2d run CONFIG.json [--out DIR] [--seed N] [--trials N] [--workers N]
    fdd2d point [--alpha A] [--pc-dbm P] [--lam L] [--beta B] [--eta R]

Exit status: 0 success, 1 configuration error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, analysis
from .errors import ConfigError
from .experiments import parse_config, run_experiment
from .model import PowerAllocation, QosTargets
from .presets import reference_params
from .units import dbm_to_mw

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def fmt(v) -> str:
    """Shortest round-trip decimal for floats (numpy scalars included)."""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def write_outputs(out_dir: Path, tables: dict, meta: dict) -> list[Path]:
    """Render everything first, then write; a failure leaves no partial CSV."""
    rendered = {name: render_csv(*t) for name, t in tables.items()}
    rendered["run_meta.json"] = json.dumps(meta, indent=2, sort_keys=True) + "\n"
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in rendered.items():
        tmp = out_dir / (name + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, out_dir / name)
        written.append(out_dir / name)
    return written


def cmd_run(args) -> int:
    try:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        cfg = parse_config(doc, seed=args.seed, trials=args.trials, out=args.out, workers=args.workers)
    except (OSError, json.JSONDecodeError, ConfigError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        tables = run_experiment(cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError) as e:
        print(f"runtime error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    meta = {"config": cfg.to_json(), "seed": cfg.seed, "trials": cfg.trials,
            "version": __version__, "files": sorted(tables)}
    try:
        paths = write_outputs(Path(cfg.output), tables, meta)
    except OSError as e:
        print(f"runtime error: cannot write output: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_point(args) -> int:
    try:
        p = reference_params(lam=args.lam, beta=args.beta, P_C_dBm=max(args.pc_dbm, 23.0))
        t = QosTargets(args.eta, args.eta)
        alloc = PowerAllocation(args.alpha, float(dbm_to_mw(args.pc_dbm)))
        res = {"p_out_exact": analysis.outage_exact(p, alloc, t).p_out,
               "p_out_bound": analysis.outage_upper_bound(p, alloc, t),
               "p_out_asymptotic": analysis.outage_asymptotic(p, t, alloc.p_C),
               "p_out_hd": analysis.hd_outage_exact(p, alloc, t)}
    except ValueError as e:
        print(f"runtime error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    print(json.dumps(res, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fdd2d", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run an experiment config and write CSV files")
    r.add_argument("config")
    r.add_argument("--out")
    r.add_argument("--seed", type=int)
    r.add_argument("--trials", type=int)
    r.add_argument("--workers", type=int)
    r.set_defaults(func=cmd_run)
    q = sub.add_parser("point", help="closed-form outage at one point of the reference geometry")
    q.add_argument("--alpha", type=float, default=0.7)
    q.add_argument("--pc-dbm", type=float, default=23.0)
    q.add_argument("--lam", type=float, default=0.1)
    q.add_argument("--beta", type=float, default=1.0)
    q.add_argument("--eta", type=float, default=1.0)
    q.set_defaults(func=cmd_point)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
