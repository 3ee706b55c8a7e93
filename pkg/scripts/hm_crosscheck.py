"""Compare exhaustive King verdicts with a search over bounded one-parameter subgroups.

Over a small prime field, a representation is unstable exactly when some
subrepresentation has positive pairing. A lambda with eigenweights in
[-b, b] and negative King weight certifies instability too. For small
dimensions b = 1 already reaches every two-step flag, so the two answers
should agree.

    python scripts/hm_crosscheck.py [--count 60] [--p 2] [--seed 3]
"""

import argparse
import random
from collections import Counter

from quiverstab.exact import Field
from quiverstab.randgen import random_dims, random_normalized_eta, random_quiver, random_representation
from quiverstab.stability import bounded_hm_witness, king_check
from quiverstab.verdict import Status


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--count", type=int, default=60)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--bound", type=int, default=1)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    f = Field(args.p)
    table = Counter()
    for _ in range(args.count):
        q = random_quiver(rng, max_vertices=2, max_arrows=2)
        dims = random_dims(rng, q, 2, max_total=3)
        rep = random_representation(rng, q, dims, f)
        eta = random_normalized_eta(rng, dims)
        verdict = king_check(rep, eta)
        lam = bounded_hm_witness(rep, eta, args.bound)
        table[(verdict.status is Status.UNSTABLE, lam is not None)] += 1
    print("king unstable | lambda found | count")
    for (u, w), n in sorted(table.items()):
        print(f"{str(u):>13} | {str(w):>12} | {n}")
    disagree = table[(True, False)] + table[(False, True)]
    print(f"disagreements: {disagree}")
    raise SystemExit(1 if table[(False, True)] else 0)


if __name__ == "__main__":
    main()
