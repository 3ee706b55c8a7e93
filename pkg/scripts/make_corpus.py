"""Write the problem corpus used by the CLI runner and the acceptance suite.

    python scripts/make_corpus.py [--out corpus] [--seed 11]
"""

from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from quiverstab.exact import QQ, Field, Matrix
from quiverstab.io import build_problem_json, lambda_to_json
from quiverstab.flags import OneParamSubgroup
from quiverstab.quiver import Arrow, Quiver, Representation
from quiverstab.randgen import random_normalized_eta, random_representation

LINE = Quiver(("v1", "v2"), (Arrow("a", "v1", "v2"),))
KRONECKER = Quiver(("v1", "v2"), (Arrow("a", "v1", "v2", 2),))
LOOP = Quiver(("v",), (Arrow("a", "v", "v"),))
TWO_CYCLE = Quiver(("v1", "v2"), (Arrow("a", "v1", "v2"), Arrow("b", "v2", "v1")))

ETA = {"v1": -1, "v2": 1}
SIGMA = {"v1": 1, "v2": 1}


def _line(f: Field, value: int) -> Representation:
    return Representation(LINE, {"v1": 1, "v2": 1}, {"a": (Matrix.from_rows([[value]], f),)}, field=f)


def fixed_problems() -> dict[str, dict]:
    out = {}
    for p in (2, 3):
        f = Field(p)
        out[f"line_f{p}_stable"] = build_problem_json(_line(f, 1), SIGMA, ETA)
        out[f"line_f{p}_zero"] = build_problem_json(_line(f, 0), SIGMA, ETA)
        for name, pair in (("stable", ([[1]], [[0]])), ("zero", ([[0]], [[0]]))):
            rep = Representation(KRONECKER, {"v1": 1, "v2": 1}, {"a": tuple(Matrix.from_rows(m, f) for m in pair)}, field=f)
            out[f"kronecker_f{p}_{name}"] = build_problem_json(rep, SIGMA, ETA)
    e12 = Representation(LOOP, {"v": 2}, {"a": (Matrix.from_rows([[0, 1], [0, 0]]),)}, epsilon=0)
    lam = OneParamSubgroup.diagonal({"v": (-1, 1)})
    out["loop_e12"] = build_problem_json(e12, {"v": 1}, {"v": 0}, **{"lambda": lambda_to_json(lam)})
    diag = Representation(LOOP, {"v": 2}, {"a": (Matrix.diag([1, 2]),)}, epsilon=0)
    out["loop_diag12"] = build_problem_json(diag, {"v": 1}, {"v": 0})
    aug = Representation(LOOP, {"v": 1}, {"a": (Matrix.from_rows([[3]]),)}, epsilon=2)
    out["loop_augmented"] = build_problem_json(aug, {"v": 1}, {"v": 0})
    cyc = Representation(TWO_CYCLE, {"v1": 1, "v2": 1}, {"a": (Matrix.from_rows([[1]]),), "b": (Matrix.from_rows([[2]]),)}, epsilon=0)
    out["two_cycle"] = build_problem_json(cyc, SIGMA, {"v1": 0, "v2": 0})
    return out


def random_problems(seed: int, count: int) -> dict[str, dict]:
    rng = random.Random(seed)
    out = {}
    quivers = [LINE, KRONECKER, LOOP, TWO_CYCLE]
    for i in range(count):
        q = rng.choice(quivers)
        f = Field(rng.choice([2, 3]))
        dims = {v: rng.randint(1, 2) for v in q.vertices}
        rep = random_representation(rng, q, dims, f)
        sigma = {v: rng.randint(1, 2) for v in q.vertices}
        out[f"random_{i:02d}"] = build_problem_json(rep, sigma, random_normalized_eta(rng, dims))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="corpus")
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--random", type=int, default=8)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    problems = {**fixed_problems(), **random_problems(args.seed, args.random)}
    for name, obj in sorted(problems.items()):
        (out / f"{name}.json").write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    lam_dir = out / "lambdas"
    lam_dir.mkdir(exist_ok=True)
    (lam_dir / "e12.json").write_text(json.dumps(lambda_to_json(OneParamSubgroup.diagonal({"v": (-1, 1)})), indent=2) + "\n")
    print(f"wrote {len(problems)} problems to {out}")


if __name__ == "__main__":
    main()
