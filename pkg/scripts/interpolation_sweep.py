"""Sweep nu across [0, 1] for a preset and print the largest masked residual per point.

    python3 scripts/interpolation_sweep.py --preset bosonic --dim 16 --step 0.05
"""
import argparse

from qdeform.exotic import nu_sweep
from qdeform.cli.config import parse_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default="bosonic")
    ap.add_argument("--dim", type=int, default=16)
    ap.add_argument("--lam", type=int, default=4)
    ap.add_argument("--step", default="0.05")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    grid = parse_grid(f"0:1:{args.step}")
    points = nu_sweep(grid, args.preset, args.dim, lam=args.lam, workers=args.workers)
    print(f"{'nu':>6}  {'max masked':>11}  {'worst relation':<14}  verdict")
    for nu, rep in points:
        worst = max(rep.records, key=lambda r: r.masked_norm)
        verdict = "pass" if rep.overall_pass else "fail"
        measured = sum(r.passed is None for r in rep.records)
        print(f"{nu:6.3f}  {worst.masked_norm:11.3e}  {worst.label:<14}  {verdict} ({measured} measured)")


if __name__ == "__main__":
    main()
