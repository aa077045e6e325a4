"""Run every shipped experiment config and write the CSV datasets.

    python scripts/reproduce_figures.py [--out out] [--trials N] [--workers N] [--only NAME ...]

Each config lands in OUT/<config name>/ next to its run_meta.json.
"""
import argparse
import sys
from pathlib import Path

from fdd2d import cli

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(ROOT / "out"))
    ap.add_argument("--trials", type=int, help="override the Monte Carlo trial count")
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--only", nargs="*", help="config names without .json")
    args = ap.parse_args(argv)

    configs = sorted((ROOT / "configs").glob("*.json"))
    if args.only:
        configs = [c for c in configs if c.stem in set(args.only)]
    status = 0
    for cfg in configs:
        cmd = ["run", str(cfg), "--out", str(Path(args.out) / cfg.stem), "--workers", str(args.workers)]
        if args.trials is not None:
            cmd += ["--trials", str(args.trials)]
        print(f"== {cfg.stem}", flush=True)
        rc = cli.main(cmd)
        if rc:
            print(f"{cfg.stem} exited with {rc}", file=sys.stderr)
            status = max(status, rc)
    return status


if __name__ == "__main__":
    sys.exit(main())
