#!/usr/bin/env python3
"""Reproduce the reference collapse-rate upper limit end to end.

Runs the counting analysis with the certified inputs (576 observed
counts, 506 simulated background counts, signal constant 2.0986 s m^2)
and prints every intermediate quantity next to the published target.
"""

import argparse

from cslrad.limits import (
    DEFAULT_BACKGROUND_COUNTS,
    DEFAULT_OBSERVED_COUNTS,
    DEFAULT_SIGNAL_CONSTANT,
    CountingExperiment,
    upper_limit_lambda,
)

TARGET = 5.2e-13


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--z-c", type=int, default=DEFAULT_OBSERVED_COUNTS)
    parser.add_argument("--z-b", type=int, default=DEFAULT_BACKGROUND_COUNTS)
    parser.add_argument("--a", type=float, default=DEFAULT_SIGNAL_CONSTANT)
    parser.add_argument("--r-c", type=float, default=1e-7)
    parser.add_argument("--credibility", type=float, default=0.95)
    args = parser.parse_args()

    exp = CountingExperiment(z_c=args.z_c, z_b=args.z_b, a=args.a)
    limit = upper_limit_lambda(exp, args.r_c, args.credibility)

    print(f"observed counts        {exp.z_c}")
    print(f"background counts      {exp.z_b}")
    print(f"signal constant        {exp.a} s m^2")
    print(f"credibility            {limit.credibility}")
    print(f"count quantile         {limit.lambda_bar_c:.6f}")
    print(f"signal quota           {limit.signal_quota:.6f}")
    if not limit.has_limit:
        print("no positive limit: background exhausts the count budget")
        return 1
    print(f"lambda_max             {limit.lambda_max:.6e} 1/s "
          f"at r_c = {limit.r_c:.3e} m")
    if args.r_c == 1e-7 and args.z_c == DEFAULT_OBSERVED_COUNTS \
            and args.z_b == DEFAULT_BACKGROUND_COUNTS:
        print(f"reference target       {TARGET:.6e} 1/s "
              f"(deviation {abs(limit.lambda_max / TARGET - 1) * 100:.2f}%)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
