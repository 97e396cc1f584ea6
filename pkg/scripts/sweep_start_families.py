#!/usr/bin/env python3
"""Run the three-family start-state sweep and say where the rows landed.

Thin wrapper over `qwsearch sweep-fig4` with the full-size defaults used
for the resource-versus-success curves (interpolated, GHZ-angle, tilted).
"""
import argparse

from qwsearch.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--samples", type=int, default=11)
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    return cli_main(["sweep-fig4", "--n", str(args.n),
                     "--samples", str(args.samples),
                     "--out", args.out, "--seed", str(args.seed)])


if __name__ == "__main__":
    raise SystemExit(main())
