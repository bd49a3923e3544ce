#!/usr/bin/env python3
"""Sweep every growth regime once and collect the bound reports.

Writes one output directory per regime under --out (default ./regime_runs)
and prints a one-line verdict for each.  Exit status is the worst exit
status any run produced, so this doubles as a smoke test.
"""

import argparse
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from macrolab.cli import main as cli_main

RUNS = {
    "place_b2": ["--regime", "place", "--b", "2", "--n", "1",
                 "--s", "1:8", "--r-max", "2000"],
    "place_b10": ["--regime", "place", "--b", "10", "--n", "1",
                  "--s", "9:18", "--r-max", "4000"],
    "waring_squares": ["--regime", "waring", "--k", "2", "--n", "1",
                       "--s", "4:6", "--r-max", "20000"],
    "double_log_b2": ["--regime", "double-log", "--b", "2",
                      "--s", "1:5", "--r-max", "300"],
    "finite_fives": ["--regime", "finite", "--monoid", "abelian", "--n", "1",
                     "--word", "5", "--s", "1:40", "--r-max", "400"],
    "poly_free": ["--regime", "poly-free", "--c", "1", "--p", "1", "--n", "2",
                  "--s", "1:4", "--r-max", "60"],
    "prob_free": ["--regime", "prob-free", "--n", "2", "--trials", "1000",
                  "--mc-r", "64,128,256", "--seed", "11",
                  "--min-halving-rate", "0.99"],
}


def run(out_root: str) -> int:
    worst = 0
    for name, args in RUNS.items():
        out_dir = os.path.join(out_root, name)
        code = cli_main(["sim", *args, "--out", out_dir])
        worst = max(worst, code)
        with open(os.path.join(out_dir, "report.jsonl")) as fh:
            last = json.loads(fh.readlines()[-1])
        print(f"{name:16s} exit={code} status={last.get('status', '?')}")
    return worst


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="regime_runs")
    raise SystemExit(run(parser.parse_args().out))
