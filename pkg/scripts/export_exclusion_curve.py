#!/usr/bin/env python3
"""Export the lambda-r_c exclusion boundary as CSV.

The curve is a pure power law in r_c (slope 2 in log-log), so the grid
density only matters for plotting convenience.
"""

import argparse
import sys

from cslrad.limits import (
    CountingExperiment,
    NoPositiveLimitError,
    exclusion_curve,
    write_exclusion_csv,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--z-c", type=int, default=576)
    parser.add_argument("--z-b", type=int, default=506)
    parser.add_argument("--a", type=float, default=2.0986)
    parser.add_argument("--r-c-min", type=float, default=1e-9)
    parser.add_argument("--r-c-max", type=float, default=1e-3)
    parser.add_argument("--n-points", type=int, default=200)
    parser.add_argument("--credibility", type=float, default=0.95)
    parser.add_argument("--output", default="exclusion_curve.csv")
    args = parser.parse_args()

    exp = CountingExperiment(z_c=args.z_c, z_b=args.z_b, a=args.a)
    try:
        curve = exclusion_curve(exp, args.r_c_min, args.r_c_max,
                                args.n_points, args.credibility)
    except NoPositiveLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    with open(args.output, "w", encoding="utf-8") as fh:
        write_exclusion_csv(curve, fh)
    lo = curve.points[0]
    hi = curve.points[-1]
    print(f"wrote {len(curve)} points to {args.output}")
    print(f"  r_c {lo[0]:.3e} m -> lambda_max {lo[1]:.6e} 1/s")
    print(f"  r_c {hi[0]:.3e} m -> lambda_max {hi[1]:.6e} 1/s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
