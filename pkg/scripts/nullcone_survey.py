"""Nilpotent and generic representations on small cyclic quivers.

For each one, print whether the kernel chain exhausts, whether the
closed-walk test calls it nilpotent and whether every trace invariant
vanishes. Over Q the three columns should agree row by row.

    python scripts/nullcone_survey.py [--seed 7]
"""

import argparse

from quiverstab.invariants import hitchin_point
from quiverstab.randgen import nullcone_corpus
from quiverstab.stability import KernelChainResult, kernel_chain, nullcone_check


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--nilpotent", type=int, default=50)
    ap.add_argument("--generic", type=int, default=20)
    args = ap.parse_args()
    reps = nullcone_corpus(args.seed, args.nilpotent, args.generic)
    agree = 0
    print(f"{'#':>3} {'dims':<16} {'chain':>6} {'walks':>6} {'traces0':>8} {'mu':>4}")
    for i, rep in enumerate(reps):
        sigma = {v: 1 for v in rep.quiver.vertices}
        kc = kernel_chain(rep, sigma)
        exhausting = isinstance(kc, KernelChainResult)
        walks = nullcone_check(rep)
        zero = hitchin_point(rep).is_zero()
        agree += exhausting == walks == zero
        mu = kc.mu if exhausting else ""
        dims = ",".join(f"{v}={n}" for v, n in rep.dims.items())
        print(f"{i:>3} {dims:<16} {str(exhausting):>6} {str(walks):>6} {str(zero):>8} {mu:>4}")
    print(f"agreement: {agree}/{len(reps)}")
    raise SystemExit(0 if agree == len(reps) else 1)


if __name__ == "__main__":
    main()
