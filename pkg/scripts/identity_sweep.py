"""Run the randomized identity suites over several seeds.

    python scripts/identity_sweep.py [--seeds 5] [--trials 200]
"""

import argparse
import time

from quiverstab.identities import SUITES, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--trials", type=int, default=200)
    args = ap.parse_args()
    print(f"{'suite':<10} {'seed':>4} {'passed':>8} {'seconds':>8}")
    bad = 0
    for name in SUITES:
        for seed in range(args.seeds):
            t = time.perf_counter()
            res = run_suite(name, args.trials, seed)
            bad += not res.ok
            print(f"{name:<10} {seed:>4} {res.passed:>4}/{res.trials:<3} {time.perf_counter() - t:>8.2f}")
            for f in res.failures[:3]:
                print("   failure:", f)
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
