"""Randomized identity suites with deterministic seeds."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .flags import weight_formula_sheaf_sides, weight_formula_sides
from .randgen import random_parameters, random_vsplit_chain, random_weighti_instance, random_weightii_instance
from .sheaf import m_sigma_chi, reparameterize_eta, rk_sigma, slope_semistability_verdict

SUITES = ("weighti", "weightii", "reparam")


@dataclass
class SuiteResult:
    name: str
    trials: int
    passed: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def to_json(self) -> dict:
        return {"suite": self.name, "trials": self.trials, "passed": self.passed, "failures": self.failures[:5]}


def check_weighti(rng: random.Random) -> tuple[bool, dict]:
    flags, quotients, sigma = random_weighti_instance(rng)
    lhs, rhs = weight_formula_sides(flags, quotients, sigma)
    return lhs == rhs, {"lhs": str(lhs), "rhs": str(rhs)}


def check_weightii(rng: random.Random) -> tuple[bool, dict]:
    data, sigma = random_weightii_instance(rng, dim_x=rng.randint(1, 3))
    lhs, rhs = weight_formula_sheaf_sides(data, sigma)
    ok = lhs.numerator == rhs.numerator and lhs.denominator == rhs.denominator
    return ok, {"lhs": lhs.numerator.to_json(), "rhs": rhs.numerator.to_json()}


def check_reparam(rng: random.Random) -> tuple[bool, dict]:
    dim_x = rng.randint(1, 3)
    vs = [f"v{i}" for i in range(rng.randint(1, 3))]
    params = random_parameters(rng, vs, dim_x)
    while True:
        total, chain = random_vsplit_chain(rng, vs, rng.randint(0, 3), dim_x)
        if rk_sigma(total, params) > 0:
            break
    alphas = [Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in chain]
    d = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    moved = reparameterize_eta(params, d)
    ok = m_sigma_chi(total, chain, alphas, params) == m_sigma_chi(total, chain, alphas, moved)
    cands = [c for c in chain if rk_sigma(c, params) > 0]
    for mode in ("slope", "polynomial"):
        a = slope_semistability_verdict(total, cands, params, mode)
        b = slope_semistability_verdict(total, cands, moved, mode)
        ok = ok and a.status == b.status and a.witness == b.witness
    return ok, {"d": str(d)}


CHECKS = {"weighti": check_weighti, "weightii": check_weightii, "reparam": check_reparam}


def run_suite(name: str, trials: int, seed: int) -> SuiteResult:
    rng = random.Random(f"{name}:{seed}")
    res = SuiteResult(name, trials)
    for i in range(trials):
        ok, info = CHECKS[name](rng)
        if ok:
            res.passed += 1
        else:
            res.failures.append({"trial": i, **info})
    return res
