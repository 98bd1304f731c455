#!/usr/bin/env python3
"""Compare the compiled counting kernels against the pure-Python fallback.

Equivalent to `mixedsums bench`; kept as a standalone script so the
comparison can run without installing the console entry point.
"""

import argparse

from mixedsums.bench import format_table, run_benchmarks


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=int, default=200)
    ap.add_argument("--r", type=int, default=1009)
    ap.add_argument("--n4-size", type=int, default=1500)
    args = ap.parse_args()
    print(format_table(run_benchmarks(T=args.T, r=args.r, n4_size=args.n4_size)))


if __name__ == "__main__":
    main()
