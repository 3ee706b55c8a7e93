"""Decision procedures on concrete representations.

Exhaustive procedures need a prime field, where every subspace tuple can be
listed. Over the rationals only candidate-relative verdicts are available.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

from .exact import Field, Matrix, RationalPolynomial, canonical_basis, contains, poly_lex_compare, preimage, trace
from .flags import OneParamSubgroup, VSplitFlag
from .quiver import Representation, SubspaceTuple, cycle_bound, is_subrepresentation
from .sheaf import SheafDatum, StabilityParameters, VSplitDatum, verify_hn
from .verdict import Certificate, StabilityVerdict, Status
from .weights import WeightedFiltrationAlpha, character_pairing, filtration_to_ops, hm_weight, king_weight

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


class NormalizationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# enumeration over F_p


def count_subspaces(n: int, p: int) -> int:
    """Number of subspaces of ``F_p^n`` (sum of Gaussian binomials)."""
    total = 0
    for k in range(n + 1):
        num = den = 1
        for i in range(k):
            num *= p ** (n - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


def enumerate_subspaces(n: int, field: Field, dim: int | None = None) -> Iterator[Matrix]:
    """Every subspace of ``F_p^n`` once, as a basis whose transpose is in RREF."""
    if field.p is None:
        raise ValueError("subspace enumeration needs a prime field")
    elems = field.elements()
    dims = range(n + 1) if dim is None else [dim]
    for k in dims:
        for pivots in itertools.combinations(range(n), k):
            free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
            for values in itertools.product(elems, repeat=len(free)):
                rows = [[field.zero] * n for _ in range(k)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = field.one
                for (i, c), x in zip(free, values):
                    rows[i][c] = x
                yield Matrix.from_columns(rows, n, field)


def subspace_key(sub: SubspaceTuple) -> str:
    """Deterministic serialization used to break ties between witnesses."""
    return json.dumps({v: canonical_basis(m).to_json() for v, m in sorted(sub.spaces.items())}, sort_keys=True)


def enumerate_subrepresentations(rep: Representation, budget: int = DEFAULT_BUDGET) -> Iterator[SubspaceTuple]:
    """All subrepresentations (including 0 and the whole), by backtracking over vertices."""
    f = rep.field
    if f.p is None:
        raise ValueError("exhaustive enumeration needs a prime field")
    q = rep.quiver
    n_tuples = 1
    for v in q.vertices:
        n_tuples *= count_subspaces(rep.dims[v], f.p)
    if n_tuples > budget:
        raise BudgetExceeded(f"{n_tuples} subspace tuples exceed the budget {budget}")
    order = list(q.vertices)
    options = {v: list(enumerate_subspaces(rep.dims[v], f)) for v in order}
    position = {v: i for i, v in enumerate(order)}
    # arrows checkable once both ends are assigned
    checks: dict[int, list] = {i: [] for i in range(len(order))}
    for a in q.arrows:
        checks[max(position[a.tail], position[a.head])].append(a)

    chosen: dict[str, Matrix] = {}

    def ok(i: int) -> bool:
        for a in checks[i]:
            src, dst = chosen[a.tail], chosen[a.head]
            if src.cols == 0:
                continue
            for m in rep.maps[a.name]:
                if not contains(dst, m @ src):
                    return False
        return True

    def rec(i: int):
        if i == len(order):
            yield SubspaceTuple(dict(chosen))
            return
        v = order[i]
        for s in options[v]:
            chosen[v] = s
            if ok(i):
                yield from rec(i + 1)
        chosen.pop(v, None)

    yield from rec(0)


def _nontrivial_proper(rep: Representation, subs: Sequence[SubspaceTuple]) -> list[SubspaceTuple]:
    return [s for s in subs if not s.is_zero() and not s.is_full(rep)]


def _check_normalized(rep: Representation, eta: Mapping[str, Fraction]) -> None:
    if sum(Fraction(eta[v]) * rep.dims[v] for v in rep.quiver.vertices) != 0:
        raise NormalizationError("eta must satisfy sum_v eta_v r_v = 0")


# ---------------------------------------------------------------------------
# King


def _classify(scored: list[tuple[object, str, SubspaceTuple]], zero, certificate: Certificate, details: dict) -> StabilityVerdict:
    """``scored`` holds (score, key, subobject); a positive score destabilizes."""
    if not scored:
        return StabilityVerdict(Status.STABLE, certificate, details=details)
    best = max(scored, key=lambda t: t[0])[0]
    witness = min((t for t in scored if t[0] == best), key=lambda t: t[1])[2]
    if best > zero:
        status = Status.UNSTABLE
    elif best == zero:
        status = Status.SEMISTABLE
    else:
        return StabilityVerdict(Status.STABLE, certificate, details=details)
    return StabilityVerdict(status, certificate, witness, best, details)


def king_check(
    rep: Representation,
    eta: Mapping[str, Fraction],
    candidates: Sequence[SubspaceTuple] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> StabilityVerdict:
    """King (semi)stability for the character ``F -> -sum eta_v dim F_v``.

    Without ``candidates`` all subrepresentations are enumerated (prime field
    only). With candidates the verdict is relative to them.
    """
    eta = {v: Fraction(e) for v, e in eta.items()}
    _check_normalized(rep, eta)
    if candidates is None:
        subs = _nontrivial_proper(rep, list(enumerate_subrepresentations(rep, budget)))
        cert = Certificate.EXHAUSTIVE
    else:
        for c in candidates:
            if not is_subrepresentation(rep, c):
                raise ValueError("candidate is not a subrepresentation")
        subs = _nontrivial_proper(rep, candidates)
        cert = Certificate.CANDIDATE_RELATIVE
    scored = [(character_pairing(eta, s), subspace_key(s), s) for s in subs]
    return _classify(scored, Fraction(0), cert, {"checked": len(subs)})


# ---------------------------------------------------------------------------
# asymptotic (pairing first, Hilbert polynomials on ties)

SheafOracle = Callable[[SubspaceTuple], VSplitDatum]


def proportional_oracle(rep: Representation, total: Mapping[str, SheafDatum]) -> SheafOracle:
    """Give ``F_v`` the fraction ``dim F_v / r_v`` of the data of the total."""

    def oracle(sub: SubspaceTuple) -> VSplitDatum:
        out = {}
        for v in rep.quiver.vertices:
            d, r = sub.dim(v), rep.dims[v]
            t = total[v]
            scale = Fraction(d, r) if r else Fraction(0)
            out[v] = SheafDatum(d, t.hilbert * scale, t.degree * scale)
        return VSplitDatum(out)

    return oracle


class _PolyRatio:
    """``p / r`` compared lexicographically from the top coefficient."""

    def __init__(self, p: RationalPolynomial, r: int):
        self.p, self.r = p, r

    def _cmp(self, other: _PolyRatio) -> int:
        return poly_lex_compare(self.p * other.r, other.p * self.r)


def _sigma_hilbert(d: Mapping[str, SheafDatum], sigma: Mapping[str, int]) -> _PolyRatio:
    p = RationalPolynomial()
    r = 0
    for v in sigma:
        p = p + sigma[v] * d[v].hilbert
        r += sigma[v] * d[v].rank
    if r == 0:
        raise ValueError("zero sigma-rank")
    return _PolyRatio(p, r)


def asymptotic_check(
    rep: Representation,
    params: StabilityParameters,
    total: Mapping[str, SheafDatum],
    oracle: SheafOracle | None = None,
    candidates: Sequence[SubspaceTuple] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> StabilityVerdict:
    """Two-stage test: the King pairing first, then on ties the comparison of
    ``sum sigma_v P(F_v) / sum sigma_v rk F_v`` with the same ratio for the total."""
    eta = params.eta
    _check_normalized(rep, eta)
    for v in rep.quiver.vertices:
        if total[v].rank != rep.dims[v]:
            raise ValueError(f"vertex {v}: sheaf rank differs from the fibre dimension")
    oracle = oracle or proportional_oracle(rep, total)
    if candidates is None:
        subs = _nontrivial_proper(rep, list(enumerate_subrepresentations(rep, budget)))
        cert = Certificate.EXHAUSTIVE
    else:
        for c in candidates:
            if not is_subrepresentation(rep, c):
                raise ValueError("candidate is not a subrepresentation")
        subs = _nontrivial_proper(rep, candidates)
        cert = Certificate.CANDIDATE_RELATIVE
    whole = _sigma_hilbert(total, params.sigma)
    scored = []
    for s in subs:
        data = oracle(s)
        for v in rep.quiver.vertices:
            if data[v].rank != s.dim(v):
                raise ValueError("oracle ranks must equal the subspace dimensions")
        pairing = character_pairing(eta, s)
        if pairing != 0:
            score = (1 if pairing > 0 else -1, pairing)
        else:
            score = (_sigma_hilbert(data, params.sigma)._cmp(whole), Fraction(0))
        scored.append((score, subspace_key(s), s))
    return _classify(scored, (0, Fraction(0)), cert, {"checked": len(subs)})


# ---------------------------------------------------------------------------
# kernel chain


@dataclass(frozen=True)
class NotExhausting:
    """The kernel chain stabilized before reaching every fibre."""

    chain: tuple[dict, ...]

    def to_json(self) -> dict:
        return {"exhausting": False, "chain": [{v: m.to_json() for v, m in s.items()} for s in self.chain]}


@dataclass(frozen=True)
class KernelChainResult:
    flag: VSplitFlag
    filtration: WeightedFiltrationAlpha
    lam: OneParamSubgroup
    mu: int

    def to_json(self) -> dict:
        return {"exhausting": True, "flag": self.flag.to_json(), "lambda": self.lam.to_json(), "mu": self.mu}


def kernel_chain(rep: Representation, sigma: Mapping[str, int]) -> KernelChainResult | NotExhausting:
    """Iterate ``Y_j^v = {x : f(x) in Y_{j-1}^{h} for every arrow copy out of v}``.

    ``Y_1`` is the common kernel. If the chain reaches every fibre, the
    induced one-parameter subgroup (unit coefficients) has weight
    ``-sum sigma_v r_v``, which is checked.
    """
    if rep.epsilon:
        raise ValueError("kernel chain requires epsilon = 0")
    q, f = rep.quiver, rep.field
    prev = {v: Matrix.zeros(rep.dims[v], 0, f) for v in q.vertices}
    chain: list[dict[str, Matrix]] = []
    while True:
        nxt = {}
        for v in q.vertices:
            space = Matrix.identity(rep.dims[v], f)
            for a in q.arrows:
                if a.tail != v:
                    continue
                for m in rep.maps[a.name]:
                    # restrict to the current space, then pull back
                    if space.cols:
                        space = space @ preimage(m @ space, prev[a.head])
            nxt[v] = canonical_basis(space)
        if all(nxt[v].cols == prev[v].cols for v in q.vertices):
            break
        chain.append(nxt)
        prev = nxt
    if not all(prev[v].cols == rep.dims[v] for v in q.vertices):
        return NotExhausting(tuple(chain))
    steps = chain[:-1]
    k = len(steps) + 1
    flag = VSplitFlag(rep.dims, tuple(steps), tuple(range(1, k + 1)), f)
    filt = WeightedFiltrationAlpha(rep.dims, tuple(steps), (Fraction(1),) * len(steps))
    lam, c = filtration_to_ops(filt, sigma, f)
    mu = hm_weight(rep, lam)
    expected = -c * sum(sigma[v] * rep.dims[v] for v in q.vertices)
    if mu != expected:
        raise AssertionError(f"kernel chain weight {mu} != {expected}")
    return KernelChainResult(flag, filt, lam, mu // c)


# ---------------------------------------------------------------------------
# Harder-Narasimhan over F_p


def point_slope(dims: Mapping[str, int], sigma: Mapping[str, int], eta: Mapping[str, Fraction]) -> Fraction:
    """``-sum eta_v d_v / sum sigma_v d_v``."""
    rk = sum(sigma[v] * dims[v] for v in sigma)
    if rk == 0:
        raise ValueError("zero sigma-dimension")
    return -sum((Fraction(eta[v]) * dims[v] for v in sigma), Fraction(0)) / rk


def point_parameters(sigma: Mapping[str, int], eta: Mapping[str, Fraction]) -> StabilityParameters:
    """Parameters whose sheaf slope on dimension data is :func:`point_slope`."""
    return StabilityParameters(sigma, eta, RationalPolynomial([1]), dim_x=1)


@dataclass(frozen=True)
class HNFiltration:
    """Steps ``F_1 < ... < F_s = whole`` and the slopes of ``F_i / F_{i-1}``."""

    steps: tuple[SubspaceTuple, ...]
    slopes: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "steps": [{v: m.to_json() for v, m in s.spaces.items()} for s in self.steps],
            "dims": [s.dims() for s in self.steps],
            "slopes": [str(x) for x in self.slopes],
        }


def _diff(a: Mapping[str, int], b: Mapping[str, int]) -> dict[str, int]:
    return {v: a[v] - b[v] for v in a}


def hn_compute(
    rep: Representation,
    sigma: Mapping[str, int],
    eta: Mapping[str, Fraction],
    budget: int = DEFAULT_BUDGET,
    subreps: Sequence[SubspaceTuple] | None = None,
) -> HNFiltration:
    """Greedy maximal destabilizing subobjects, computed on dimension data.

    A subrepresentation ``G > F`` corresponds to a subobject ``G/F`` of the
    quotient, with slope computed from dimension differences. Among them the
    one of maximal slope, then maximal sigma-dimension, is taken.
    """
    subs = list(subreps) if subreps is not None else list(enumerate_subrepresentations(rep, budget))
    current = SubspaceTuple.zero(rep)
    steps, slopes = [], []
    while not current.is_full(rep):
        cur = current.dims()
        best = None
        for g in subs:
            gd = g.dims()
            if gd == cur or not g.contains(current):
                continue
            d = _diff(gd, cur)
            key = (point_slope(d, sigma, eta), sum(sigma[v] * d[v] for v in sigma))
            if best is None or key > best[0]:
                best = (key, [g])
            elif key == best[0]:
                best[1].append(g)
        assert best is not None
        if len(best[1]) > 1:
            raise AssertionError("maximal destabilizing subobject is not unique")
        current = best[1][0]
        steps.append(current)
        slopes.append(best[0][0])
    return HNFiltration(tuple(steps), tuple(slopes))


def verify_hn_point(
    rep: Representation,
    steps: Sequence[SubspaceTuple],
    sigma: Mapping[str, int],
    eta: Mapping[str, Fraction],
    subreps: Sequence[SubspaceTuple] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Check a filtration ending in the whole representation via :func:`sheaf.verify_hn`.

    Subobjects of ``F_i / F_{i-1}`` are the subrepresentations strictly
    between the two steps.
    """
    subs = list(subreps) if subreps is not None else list(enumerate_subrepresentations(rep, budget))
    steps = list(steps)
    if not steps or not steps[-1].is_full(rep):
        raise ValueError("the last step must be the whole representation")
    chain = [SubspaceTuple.zero(rep)] + steps
    for lo, hi in zip(chain, chain[1:]):
        if not is_subrepresentation(rep, hi) or not hi.contains(lo):
            raise ValueError("steps must form an increasing chain of subrepresentations")
    params = point_parameters(sigma, eta)

    def oracle(i: int, _quotient):
        lo, hi = chain[i - 1], chain[i]
        ld, hd = lo.dims(), hi.dims()
        for g in subs:
            gd = g.dims()
            if gd in (ld, hd) or not g.contains(lo) or not hi.contains(g):
                continue
            yield VSplitDatum.from_dims(_diff(gd, ld))

    return verify_hn(VSplitDatum.from_dims(rep.dims), [VSplitDatum.from_dims(s.dims()) for s in steps[:-1]], params, oracle)


# ---------------------------------------------------------------------------
# nullcone


def nullcone_check(rep: Representation) -> bool:
    """``epsilon = 0`` and every closed walk of length ``<= (sum r)^2 + 1`` is traceless.

    Walks are grown one arrow at a time; products are deduplicated and zero
    products dropped, so the search stays small when the representation is
    nilpotent and stops at the first nonzero trace otherwise.
    """
    if rep.epsilon:
        return False
    q = rep.quiver
    bound = cycle_bound(rep.dims)
    f = rep.field
    # (start vertex, current vertex) -> set of products f_word mapping start -> current
    frontier: dict[tuple[str, str], set[Matrix]] = {(v, v): {Matrix.identity(rep.dims[v], f)} for v in q.vertices}
    for _ in range(bound):
        nxt: dict[tuple[str, str], set[Matrix]] = {}
        for (s, cur), mats in frontier.items():
            for a in q.arrows:
                if a.tail != cur:
                    continue
                for m in rep.maps[a.name]:
                    for p in mats:
                        prod = m @ p
                        if prod.is_zero():
                            continue
                        if a.head == s and trace(prod):
                            return False
                        nxt.setdefault((s, a.head), set()).add(prod)
        if not nxt:
            return True
        frontier = nxt
    return True


# ---------------------------------------------------------------------------
# bounded Hilbert-Mumford search, used to cross-check King


def bounded_hm_witness(rep: Representation, eta: Mapping[str, Fraction], bound: int = 2) -> OneParamSubgroup | None:
    """Some ``lambda`` with eigenweights in ``[-bound, bound]`` and negative King weight, or None."""
    f = rep.field
    verts = list(rep.quiver.vertices)
    choices = {v: list(_lambda_choices(rep.dims[v], f, bound)) for v in verts}
    for combo in itertools.product(*(choices[v] for v in verts)):
        lam = OneParamSubgroup({v: b for v, (b, _) in zip(verts, combo)}, {v: w for v, (_, w) in zip(verts, combo)})
        w = king_weight(rep, lam, eta)
        if w is not None and w < 0:
            return lam
    return None


def _lambda_choices(n: int, field: Field, bound: int) -> Iterator[tuple[Matrix, tuple[int, ...]]]:
    """One eigenbasis per weighted flag with weights in ``[-bound, bound]``."""
    for ws in itertools.combinations_with_replacement(range(-bound, bound + 1), n):
        distinct = sorted(set(ws))
        cuts = list(itertools.accumulate(ws.count(w) for w in distinct))[:-1]
        for chain in _chains(n, field, cuts):
            cols: list[list] = []
            for m in chain + [Matrix.identity(n, field)]:
                for c in m.columns():
                    if len(cols) < n and not contains(Matrix.from_columns(cols, n, field), Matrix.from_columns([c], n, field)):
                        cols.append(c)
            yield Matrix.from_columns(cols, n, field), ws


def _chains(n: int, field: Field, cuts: Sequence[int], below: Matrix | None = None) -> Iterator[list[Matrix]]:
    if not cuts:
        yield []
        return
    below = below if below is not None else Matrix.zeros(n, 0, field)
    for s in enumerate_subspaces(n, field, cuts[0]):
        if contains(s, below):
            for rest in _chains(n, field, cuts[1:], s):
                yield [s] + rest
