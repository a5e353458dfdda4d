"""Rewrite the committed golden files under tests/golden.

Run only after an intentional change to instance generation or to a check;
the golden tests exist to catch unintentional ones.
"""
import argparse
import json
from pathlib import Path

from dgwb.suite import SuiteConfig, run_suite
from dgwb.zoo import generate_zoo

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
GOLDEN_CONFIG = SuiteConfig(seed=0, count=4)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=GOLDEN)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    (z,) = generate_zoo(0, 1)
    path = args.out / "instance_seed0.json"
    path.write_text(json.dumps(z.to_json(), sort_keys=True, indent=1) + "\n")
    print(f"wrote {path} ({z.digest})")

    result = run_suite(GOLDEN_CONFIG)
    path = args.out / "report_seed0.json"
    path.write_text(result.dumps())
    print(f"wrote {path}")
    print(result.describe())


if __name__ == "__main__":
    main()
