"""Run the full verification suite and save the report.

Equivalent to ``dgwb verify`` with a progress line per instance; the JSON
report is written next to a plain-text summary.
"""
import argparse
import sys
import time
from pathlib import Path

from dgwb.suite import SuiteConfig, run_suite
from dgwb.zoo import Budgets


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=SuiteConfig.count)
    parser.add_argument("--cutoff", type=int, default=Budgets.cutoff)
    parser.add_argument("--precision", type=int, default=Budgets.precision)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", type=Path, default=Path("verify_report.json"))
    args = parser.parse_args()

    budgets = Budgets(cutoff=args.cutoff, precision=args.precision)
    config = SuiteConfig(seed=args.seed, count=args.count, budgets=budgets, jobs=args.jobs)
    start = time.perf_counter()
    result = run_suite(config, progress=lambda i: print(f"\rinstance {i + 1}/{args.count}", end="", file=sys.stderr))
    print(file=sys.stderr)
    elapsed = time.perf_counter() - start

    args.out.write_text(result.dumps())
    summary = result.describe()
    args.out.with_suffix(".txt").write_text(summary + "\n")
    print(summary)
    print(f"{len(result.reports)} reports in {elapsed:.1f}s -> {args.out}")
    return 1 if result.failed else 0


if __name__ == "__main__":
    sys.exit(main())
