"""Acceptance criteria 1-12. Each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from quiverstab import cli
from quiverstab.exact import QQ, Field, Matrix
from quiverstab.flags import OneParamSubgroup, merge_flags, project_flags, weight_formula_sheaf_sides
from quiverstab.identities import run_suite
from quiverstab.invariants import generator_set, hitchin_point, veronese_coordinates
from quiverstab.quiver import Arrow, Quiver, Representation
from quiverstab.randgen import (
    nullcone_corpus,
    random_base_change,
    random_dims,
    random_invertible,
    random_lambda,
    random_normalized_eta,
    random_parameters,
    random_quiver,
    random_representation,
    random_vsplit_chain,
    random_vsplit_flag,
    random_weighted_flag,
    random_weightii_instance,
    random_nilpotent_representation,
)
from quiverstab.sheaf import m_sigma_chi, reparameterize_eta, rk_sigma, slope_semistability_verdict
from quiverstab.stability import (
    KernelChainResult,
    NotExhausting,
    hn_compute,
    king_check,
    kernel_chain,
    nullcone_check,
    verify_hn_point,
)
from quiverstab.weights import flag_characterization, hm_weight

from oracles import brute_hn, brute_king, sympy_weightii

SEED = 7
ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def test_weight_identity(report):
    res = run_suite("weighti", 200, SEED)
    report(1, res.passed == 200, f"weight identity {res.passed}/200")


def _to_field(K, p):
    l = K.gens[0]
    return sum((K(sympy.Rational(c.numerator, c.denominator)) * l**k for k, c in enumerate(p.coefficients)), K(0))


def test_sheaf_weight_identity(report):
    rng = random.Random(f"acceptance-weightii:{SEED}")
    passed = 0
    for _ in range(100):
        data, sigma = random_weightii_instance(rng, dim_x=rng.randint(1, 3))
        lhs, rhs = weight_formula_sheaf_sides(data, sigma)
        plain = {
            v: ((d.total[0], d.total[1].coefficients), [(r, p.coefficients) for r, p in d.steps], d.weights)
            for v, d in data.items()
        }
        K, s_lhs, s_rhs = sympy_weightii(plain, sigma)
        same_form = lhs.numerator == rhs.numerator and lhs.denominator == rhs.denominator
        agrees = _to_field(K, lhs.numerator) / _to_field(K, lhs.denominator) == s_lhs and s_lhs == s_rhs
        passed += same_form and agrees
    report(2, passed == 100, f"sheaf weight identity {passed}/100 (normal forms and sympy)")


def test_flag_equivalence(report):
    rng = random.Random(f"acceptance-flags:{SEED}")
    there = back = 0
    for _ in range(100):
        dims = {f"v{i}": rng.randint(1, 3) for i in range(rng.randint(1, 3))}
        f = random_vsplit_flag(rng, dims)
        there += merge_flags(project_flags(f)).same(f)
    for _ in range(100):
        flags = {f"v{i}": random_weighted_flag(rng, rng.randint(1, 3)) for i in range(rng.randint(1, 3))}
        out = project_flags(merge_flags(flags))
        back += all(out[v].same(flags[v]) for v in flags)
    report(3, there == back == 100, f"merge.project {there}/100, project.merge {back}/100")


def _mu_pairs(rng, n):
    """Half generic (rep, lambda), half nilpotent reps with lambda adapted to the kernel chain."""
    for i in range(n):
        q = random_quiver(rng, 3, 3, 2, cyclic=i % 4 == 0)
        dims = random_dims(rng, q, 3)
        if i % 2 == 0:
            rep = random_representation(rng, q, dims, QQ, epsilon=rng.choice([0, 1]))
            yield rep, random_lambda(rng, rep)
        else:
            try:
                rep = random_nilpotent_representation(rng, q, dims)
            except ValueError:
                rep = random_representation(rng, q, dims, QQ, epsilon=0)
            kc = kernel_chain(rep, {v: 1 for v in q.vertices})
            if isinstance(kc, KernelChainResult) and rng.random() < 0.7:
                g = kc.lam
                # perturb the weights within each level or keep them
                yield rep, OneParamSubgroup(g.basis, {v: tuple(w + rng.randint(-1, 1) * (i % 3 == 0) for w in ws) for v, ws in g.weights.items()})
            else:
                yield rep, random_lambda(rng, rep, diagonal=rng.random() < 0.5)


def test_mu_convention(report):
    rng = random.Random(f"acceptance-mu:{SEED}")
    agree = negative = 0
    for rep, lam in _mu_pairs(rng, 200):
        neg = hm_weight(rep, lam) < 0
        negative += neg
        agree += neg == flag_characterization(rep, lam)
    loop = Quiver(("v",), (Arrow("a", "v", "v"),))
    e12 = Representation(loop, {"v": 2}, {"a": (Matrix.from_rows([[0, 1], [0, 0]]),)}, epsilon=0)
    mu = hm_weight(e12, OneParamSubgroup.diagonal({"v": (-1, 1)}))
    report(4, agree == 200 and mu == -2, f"sign lock {agree}/200 ({negative} negative), mu(E12) = {mu}")


def test_reparameterization(report):
    rng = random.Random(f"acceptance-reparam:{SEED}")
    passed = 0
    for _ in range(100):
        dim_x = rng.randint(1, 3)
        vs = [f"v{i}" for i in range(rng.randint(1, 3))]
        params = random_parameters(rng, vs, dim_x)
        while True:
            total, chain = random_vsplit_chain(rng, vs, rng.randint(1, 3), dim_x)
            if rk_sigma(total, params) > 0:
                break
        alphas = [Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in chain]
        moved = reparameterize_eta(params, Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        ok = m_sigma_chi(total, chain, alphas, params) == m_sigma_chi(total, chain, alphas, moved)
        cands = [c for c in chain if rk_sigma(c, params) > 0]
        for mode in ("slope", "polynomial"):
            a = slope_semistability_verdict(total, cands, params, mode)
            b = slope_semistability_verdict(total, cands, moved, mode)
            ok = ok and a.status == b.status and a.witness == b.witness
        passed += ok
    report(5, passed == 100, f"reparameterization {passed}/100")


def test_king_criterion(report):
    kron = Quiver(("v1", "v2"), (Arrow("a", "v1", "v2", 2),))
    eta = {"v1": -1, "v2": 1}
    hand = total = 0
    for p in (2, 3):
        f = Field(p)
        for x in range(p):
            for y in range(p):
                rep = Representation(kron, {"v1": 1, "v2": 1}, {"a": (Matrix.from_rows([[x]], f), Matrix.from_rows([[y]], f))}, field=f)
                expected = "unstable" if x == y == 0 else "stable"
                hand += king_check(rep, eta).status.value == expected
                total += 1
    rng = random.Random(f"acceptance-king:{SEED}")
    brute = 0
    for _ in range(20):
        q = random_quiver(rng, 3, 3, 2)
        f = Field(rng.choice([2, 3]))
        dims = random_dims(rng, q, 2, 4)
        rep = random_representation(rng, q, dims, f)
        eta = random_normalized_eta(rng, dims)
        v = king_check(rep, eta)
        status, best, argmax = brute_king(rep, eta)
        ok = v.status.value == status
        if v.witness is not None:
            ok = ok and v.value == best and v.witness.dims() in argmax
        brute += ok
    report(6, hand == total and brute == 20, f"Kronecker hand classes {hand}/{total}, brute oracle {brute}/20")


@pytest.fixture(scope="module")
def nullcone_reps():
    return nullcone_corpus(SEED)


def test_kernel_chain(report, nullcone_reps):
    rng = random.Random(f"acceptance-kernel:{SEED}")
    exhausted = stuck = 0
    for i, rep in enumerate(nullcone_reps):
        sigma = {v: rng.randint(1, 3) for v in rep.quiver.vertices}
        kc = kernel_chain(rep, sigma)
        if i < 50:
            target = -sum(sigma[v] * rep.dims[v] for v in rep.quiver.vertices)
            exhausted += isinstance(kc, KernelChainResult) and hm_weight(rep, kc.lam) == target
        else:
            stuck += isinstance(kc, NotExhausting)
    report(7, exhausted == 50 and stuck == 20, f"exhausting with mu = -sum sigma r {exhausted}/50, NotExhausting {stuck}/20")


def test_nullcone_equivalence(report, nullcone_reps):
    agree = 0
    for rep in nullcone_reps:
        exhausts = isinstance(kernel_chain(rep, {v: 1 for v in rep.quiver.vertices}), KernelChainResult)
        vanish = hitchin_point(rep).is_zero()
        agree += exhausts == vanish == nullcone_check(rep)
    report(8, agree == 70, f"kernel chain exhausts <=> invariants vanish {agree}/70")


def test_hn_filtration(report):
    rng = random.Random(f"acceptance-hn:{SEED}")
    passed = 0
    for _ in range(50):
        q = random_quiver(rng, 3, 3, 2)
        f = Field(rng.choice([2, 3]))
        dims = random_dims(rng, q, 2, 4)
        rep = random_representation(rng, q, dims, f)
        eta = random_normalized_eta(rng, dims)
        sigma = {v: rng.randint(1, 3) for v in dims}
        hn = hn_compute(rep, sigma, eta)
        chains = brute_hn(rep, sigma, eta)
        passed += verify_hn_point(rep, hn.steps, sigma, eta) and chains == [[s.dims() for s in hn.steps]]
    report(9, passed == 50, f"HN verified and unique {passed}/50")


def test_hitchin_grading(report):
    rng = random.Random(f"acceptance-hitchin:{SEED}")
    conj = 0
    for _ in range(50):
        q = random_quiver(rng, 2, 3, 2, cyclic=True)
        rep = random_representation(rng, q, random_dims(rng, q, 2, 3), QQ)
        g = random_base_change(rng, rep)
        conj += hitchin_point(rep.base_change(g)).values == hitchin_point(rep).values
    scale = 0
    checked = 0
    for _ in range(10):
        q = random_quiver(rng, 2, 3, 2, cyclic=True)
        rep = random_representation(rng, q, random_dims(rng, q, 2, 3), QQ)
        h = hitchin_point(rep)
        for z in (2, 3):
            hz = hitchin_point(rep.scaled(z))
            ok = all(b == z**k * a for a, b, k in zip(h.values, hz.values, h.grading))
            d = rng.randint(1, 4)
            ok = ok and veronese_coordinates(hz, d) == [z**d * x for x in veronese_coordinates(h, d)]
            scale += ok
            checked += 1
    report(10, conj == 50 and scale == checked, f"conjugation {conj}/50, scaling z=2,3 {scale}/{checked}")


def test_cycle_bound(report):
    loop = Quiver(("v",), (Arrow("a", "v", "v"),))
    gens = generator_set(loop, {"v": 2})
    kinds = [(d.kind, d.degree) for d in gens]
    expected = [("t0", 1)] + [("cycle", k) for k in range(1, 6)]
    report(11, sorted(kinds) == sorted(expected), f"single loop r=2 generators {[d.label() for d in gens]}")


def test_cli_determinism(report, tmp_path, capsys):
    corpus = ROOT / "corpus"
    bodies = []
    for run in ("a", "b"):
        out = tmp_path / f"{run}.json"
        code = cli.main(["corpus", str(corpus), "--seed", str(SEED), "--reports", str(tmp_path / run), "--out", str(out)])
        assert code == 0
        per_file = {p.name: json.dumps(json.loads(p.read_text())["body"], sort_keys=True) for p in sorted((tmp_path / run).glob("*.json"))}
        bodies.append((json.dumps(json.loads(out.read_text())["body"], sort_keys=True), per_file))
    capsys.readouterr()
    same = bodies[0] == bodies[1] and len(bodies[0][1]) > 0
    report(12, same, f"corpus report bodies identical across two runs ({len(bodies[0][1])} reports)")
