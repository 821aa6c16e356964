#!/usr/bin/env python3
"""Run every verification suite and write one report file per suite.

Example:
    python3 scripts/run_verification.py --out-dir reports --box 3,3 --seed 0

The heavyweight suites accept the same box as the quick ones, so shrinking
the box is the way to get a fast smoke pass.  Exit code 0 means every
suite passed, 1 otherwise.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from affsl2.harness import SUITES, RunConfig, run_suites


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default="reports")
    parser.add_argument("--box", default="4,4")
    parser.add_argument("--mode-bound", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--suite",
        action="append",
        help="run only this suite (repeatable); default is all of them",
    )
    args = parser.parse_args()

    w, l = (int(part) for part in args.box.split(","))
    names = args.suite or list(SUITES)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    all_ok = True
    for name in names:
        config = RunConfig(
            suite=name, box=(w, l), mode_bound=args.mode_bound, seed=args.seed
        )
        started = time.perf_counter()
        report = run_suites(config)
        elapsed = time.perf_counter() - started
        path = out_dir / f"{name}.json"
        path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
        status = "ok" if report.ok else "FAIL"
        print(f"{name:<20} {status:>4}  {len(report.checks):3d} checks  {elapsed:7.1f}s  -> {path}")
        all_ok = all_ok and report.ok
    print("all suites pass" if all_ok else "some suite failed")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
