import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quiverstab.exact import QQ, Field, Matrix, RationalPolynomial, same_span
from quiverstab.quiver import Arrow, Quiver, Representation, SubspaceTuple, is_subrepresentation
from quiverstab.randgen import (
    random_base_change,
    random_dims,
    random_nilpotent_representation,
    random_normalized_eta,
    random_quiver,
    random_representation,
)
from quiverstab.sheaf import SheafDatum, StabilityParameters
from quiverstab.stability import (
    BudgetExceeded,
    KernelChainResult,
    NormalizationError,
    NotExhausting,
    asymptotic_check,
    bounded_hm_witness,
    count_subspaces,
    enumerate_subrepresentations,
    enumerate_subspaces,
    hn_compute,
    kernel_chain,
    king_check,
    nullcone_check,
    verify_hn_point,
)
from quiverstab.verdict import Certificate, Status
from quiverstab.weights import hm_weight, king_weight

from oracles import BruteRep, all_subspaces, brute_hn, brute_king

seeds = st.integers(0, 10**6)
F2 = Field(2)
LINE = Quiver(("v1", "v2"), (Arrow("a", "v1", "v2"),))
LOOP = Quiver(("v",), (Arrow("a", "v", "v"),))
ETA = {"v1": -1, "v2": 1}
SIGMA = {"v1": 1, "v2": 1}


def line(value, f=F2):
    return Representation(LINE, {"v1": 1, "v2": 1}, {"a": (Matrix.from_rows([[value]], f),)}, field=f)


def loop(rows, eps=0):
    return Representation(LOOP, {"v": len(rows)}, {"a": (Matrix.from_rows(rows),)}, epsilon=eps)


def jordan(k):
    return loop([[1 if j == i + 1 else 0 for j in range(k)] for i in range(k)])


def random_fp_rep(rng, max_total=4):
    q = random_quiver(rng, 3, 3, 2)
    f = Field(rng.choice([2, 3]))
    dims = random_dims(rng, q, 2, max_total)
    return random_representation(rng, q, dims, f), random_normalized_eta(rng, dims)


@pytest.mark.parametrize("n,p", [(0, 2), (1, 2), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_subspace_counts_match_vector_sets(n, p):
    listed = list(enumerate_subspaces(n, Field(p)))
    assert len(listed) == count_subspaces(n, p) == len(all_subspaces(n, p))
    for i, a in enumerate(listed):
        assert not any(same_span(a, b) for b in listed[i + 1:])


def test_king_examples():
    v = king_check(line(1), ETA)
    assert v.status is Status.STABLE and v.certificate is Certificate.EXHAUSTIVE
    v = king_check(line(0), ETA)
    assert v.status is Status.UNSTABLE
    assert v.witness.dims() == {"v1": 1, "v2": 0} and v.value == 1
    assert is_subrepresentation(line(0), v.witness)
    assert king_check(line(0), {"v1": 0, "v2": 0}).semistable


def test_king_errors():
    with pytest.raises(NormalizationError):
        king_check(line(1), {"v1": 1, "v2": 1})
    with pytest.raises(BudgetExceeded):
        king_check(line(1), ETA, budget=3)
    with pytest.raises(ValueError):
        king_check(Representation(LINE, {"v1": 1, "v2": 1}, {}), ETA)


def test_king_candidate_mode():
    rep = Representation(LINE, {"v1": 1, "v2": 1}, {}, epsilon=1)
    cand = SubspaceTuple({"v1": Matrix.identity(1), "v2": Matrix.zeros(1, 0)})
    v = king_check(rep, ETA, candidates=[cand])
    assert v.status is Status.UNSTABLE and v.certificate is Certificate.CANDIDATE_RELATIVE
    assert king_check(rep, ETA, candidates=[]).certificate is Certificate.CANDIDATE_RELATIVE


def asym_params(eta):
    return StabilityParameters(SIGMA, eta, RationalPolynomial([1]), 1)


def totals(p1, p2):
    return {"v1": SheafDatum(1, RationalPolynomial(p1)), "v2": SheafDatum(1, RationalPolynomial(p2))}


def test_asymptotic_examples():
    stable = asymptotic_check(line(1), asym_params(ETA), totals([5, 1], [0, 1]))
    assert stable.status is Status.STABLE
    tie = {"v1": 0, "v2": 0}
    v = asymptotic_check(line(0), asym_params(tie), totals([3, 1], [1, 1]))
    assert v.status is Status.UNSTABLE and v.witness.dims() == {"v1": 1, "v2": 0}
    v = asymptotic_check(line(0), asym_params(tie), totals([2, 1], [2, 1]))
    assert v.status is Status.SEMISTABLE


def test_asymptotic_rank_mismatch():
    with pytest.raises(ValueError):
        asymptotic_check(line(1), asym_params(ETA), {"v1": SheafDatum(2, RationalPolynomial([0, 2])), "v2": SheafDatum(1, RationalPolynomial([0, 1]))})


def test_kernel_chain_examples():
    res = kernel_chain(loop([[0, 1], [0, 0]]), {"v": 1})
    assert isinstance(res, KernelChainResult)
    assert res.mu == -2 and hm_weight(loop([[0, 1], [0, 0]]), res.lam) == -2
    assert res.flag.length == 1 and same_span(res.flag.steps[0]["v"], Matrix.from_columns([[1, 0]], 2))
    stuck = kernel_chain(loop([[1, 0], [0, 1]]), {"v": 1})
    assert isinstance(stuck, NotExhausting) and stuck.chain == ()
    with pytest.raises(ValueError):
        kernel_chain(loop([[0, 1], [0, 0]], eps=1), {"v": 1})


@pytest.mark.parametrize("k", [2, 3, 4])
def test_kernel_chain_length_is_nilpotency_index(k):
    res = kernel_chain(jordan(k), {"v": 2})
    assert res.flag.length + 1 == k
    assert res.mu == -2 * k


def test_hn_examples():
    hn = hn_compute(line(0), SIGMA, ETA)
    assert [s.dims() for s in hn.steps] == [{"v1": 1, "v2": 0}, {"v1": 1, "v2": 1}]
    assert hn.slopes == (1, -1)
    assert verify_hn_point(line(0), hn.steps, SIGMA, ETA)
    single = hn_compute(line(1), SIGMA, ETA)
    assert len(single.steps) == 1 and single.steps[0].is_full(line(1))


def test_hn_direct_sum_of_equal_slopes():
    q = Quiver(("a1", "a2", "b1", "b2"), (Arrow("x", "a1", "a2"), Arrow("y", "b1", "b2")))
    one = Matrix.identity(1, F2)
    rep = Representation(q, {v: 1 for v in q.vertices}, {"x": (one,), "y": (one,)}, field=F2)
    eta = {"a1": -1, "a2": 1, "b1": -1, "b2": 1}
    sigma = {v: 1 for v in q.vertices}
    assert king_check(rep, eta).status is Status.SEMISTABLE
    assert len(hn_compute(rep, sigma, eta).steps) == 1


def test_verify_hn_point_rejects_wrong_filtration():
    rep = line(0)
    full = SubspaceTuple.full(rep)
    assert not verify_hn_point(rep, [full], SIGMA, ETA)
    with pytest.raises(ValueError):
        verify_hn_point(rep, [SubspaceTuple({"v1": Matrix.zeros(1, 0, F2), "v2": Matrix.identity(1, F2)})], SIGMA, ETA)


def test_nullcone_examples():
    assert nullcone_check(loop([[0, 1], [0, 0]]))
    assert not nullcone_check(loop([[0, 1], [0, 0]], eps=1))
    assert not nullcone_check(loop([[1, 0], [0, 2]]))


@given(seeds)
def test_subrepresentations_match_vector_sets(seed):
    rep, _ = random_fp_rep(random.Random(seed))
    ours = sorted(tuple(sorted(s.dims().items())) for s in enumerate_subrepresentations(rep))
    brute = BruteRep(rep)
    theirs = sorted(tuple(sorted(brute.dimvec(s).items())) for s in brute.subreps)
    assert ours == theirs


@given(seeds)
def test_king_matches_brute_force(seed):
    rep, eta = random_fp_rep(random.Random(seed))
    v = king_check(rep, eta)
    status, best, argmax = brute_king(rep, eta)
    assert v.status.value == status
    if v.witness is not None:
        assert v.value == best and v.witness.dims() in argmax


@given(seeds)
def test_king_invariant_under_base_change(seed):
    rng = random.Random(seed)
    rep, eta = random_fp_rep(rng)
    moved = rep.base_change(random_base_change(rng, rep))
    a, b = king_check(rep, eta), king_check(moved, eta)
    assert a.status == b.status and a.value == b.value


@given(seeds)
def test_hn_unique(seed):
    rng = random.Random(seed)
    rep, eta = random_fp_rep(rng)
    sigma = {v: rng.randint(1, 3) for v in rep.quiver.vertices}
    hn = hn_compute(rep, sigma, eta)
    assert verify_hn_point(rep, hn.steps, sigma, eta)
    assert brute_hn(rep, sigma, eta) == [[s.dims() for s in hn.steps]]
    assert all(a > b for a, b in zip(hn.slopes, hn.slopes[1:]))


@given(seeds)
def test_bounded_hm_cross_check(seed):
    rng = random.Random(seed)
    rep, eta = random_fp_rep(rng, max_total=3)
    lam = bounded_hm_witness(rep, eta)
    assert king_check(rep, eta).semistable == (lam is None)
    if lam is not None:
        assert king_weight(rep, lam, eta) < 0


@given(seeds)
def test_kernel_chain_on_nilpotent(seed):
    rng = random.Random(seed)
    q = random_quiver(rng, 2, 3, 2, cyclic=True)
    dims = random_dims(rng, q, 3)
    try:
        rep = random_nilpotent_representation(rng, q, dims)
    except ValueError:
        return
    sigma = {v: rng.randint(1, 3) for v in q.vertices}
    res = kernel_chain(rep, sigma)
    assert isinstance(res, KernelChainResult)
    target = -sum(sigma[v] * dims[v] for v in q.vertices)
    assert hm_weight(rep, res.lam) == res.mu == target
    assert nullcone_check(rep)


@given(seeds)
def test_nullcone_equals_exhaustion_over_q(seed):
    rng = random.Random(seed)
    q = random_quiver(rng, 2, 3, 2, cyclic=True)
    rep = random_representation(rng, q, random_dims(rng, q, 2), QQ, epsilon=0)
    exhausts = isinstance(kernel_chain(rep, {v: 1 for v in q.vertices}), KernelChainResult)
    assert exhausts == nullcone_check(rep)
