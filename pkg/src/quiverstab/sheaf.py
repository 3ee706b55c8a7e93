"""Slope and Hilbert-polynomial calculus on abstract V-split sheaf data.

A sheaf is replaced by its rank, Hilbert polynomial and degree. Twisted
invariants follow the usual recipe: with ``chi_v = eta_v * delta``,

* ``P_{sigma,chi} = sum_v (sigma_v P_v - chi_v rk_v)``
* ``rk_sigma = sum_v sigma_v rk_v``
* ``deg_{sigma,chi} = sum_v (sigma_v deg_v - chibar_v rk_v)``

where ``chibar_v`` is the coefficient of ``x^{dim X - 1}`` in ``chi_v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .exact import RationalPolynomial, poly_lex_compare
from .verdict import Certificate, StabilityVerdict, Status


@dataclass(frozen=True)
class SheafDatum:
    rank: int
    hilbert: RationalPolynomial = field(default_factory=RationalPolynomial)
    degree: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "degree", Fraction(self.degree))
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")

    def check(self, dim_x: int) -> None:
        if self.rank > 0:
            if self.hilbert.degree != dim_x:
                raise ValueError(f"Hilbert polynomial of a positive-rank sheaf must have degree {dim_x}")
            if self.hilbert.leading <= 0:
                raise ValueError("Hilbert polynomial must have positive leading coefficient")

    def __add__(self, other: SheafDatum) -> SheafDatum:
        return SheafDatum(self.rank + other.rank, self.hilbert + other.hilbert, self.degree + other.degree)

    def __sub__(self, other: SheafDatum) -> SheafDatum:
        if other.rank > self.rank:
            raise ValueError("quotient would have negative rank")
        return SheafDatum(self.rank - other.rank, self.hilbert - other.hilbert, self.degree - other.degree)

    def to_json(self) -> dict:
        d = Fraction(self.degree)
        return {"rank": self.rank, "hilbert": self.hilbert.to_json(), "degree": str(d)}

    @classmethod
    def from_json(cls, obj) -> SheafDatum:
        return cls(int(obj["rank"]), RationalPolynomial.from_json(obj.get("hilbert", [])), Fraction(obj.get("degree", 0)))


class VSplitDatum(dict):
    """Vertex -> SheafDatum; addition and subtraction act vertexwise."""

    def __add__(self, other: VSplitDatum) -> VSplitDatum:
        return VSplitDatum({v: self[v] + other[v] for v in self})

    def __sub__(self, other: VSplitDatum) -> VSplitDatum:
        return VSplitDatum({v: self[v] - other[v] for v in self})

    @classmethod
    def from_dims(cls, dims: Mapping[str, int]) -> VSplitDatum:
        """Point-level datum: rank = dimension, zero polynomial and degree."""
        return cls({v: SheafDatum(int(d)) for v, d in dims.items()})

    def to_json(self) -> dict:
        return {v: d.to_json() for v, d in self.items()}

    @classmethod
    def from_json(cls, obj) -> VSplitDatum:
        return cls({v: SheafDatum.from_json(d) for v, d in obj.items()})


@dataclass(frozen=True)
class StabilityParameters:
    sigma: Mapping[str, int]
    eta: Mapping[str, Fraction]
    delta: RationalPolynomial
    dim_x: int = 1
    allow_top_degree: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sigma", {v: int(s) for v, s in self.sigma.items()})
        object.__setattr__(self, "eta", {v: Fraction(e) for v, e in self.eta.items()})
        if set(self.sigma) != set(self.eta):
            raise ValueError("sigma and eta must cover the same vertices")
        if any(s < 1 for s in self.sigma.values()):
            raise ValueError("sigma entries must be positive integers")
        if self.dim_x < 1:
            raise ValueError("dim X must be positive")
        if self.delta.is_zero() or self.delta.leading <= 0:
            raise ValueError("delta must have positive leading coefficient")
        top = self.dim_x if self.allow_top_degree else self.dim_x - 1
        if self.delta.degree > top:
            raise ValueError(f"delta has degree {self.delta.degree} > {top}")

    @property
    def vertices(self) -> list[str]:
        return list(self.sigma)

    def chi(self, v: str) -> RationalPolynomial:
        return self.eta[v] * self.delta

    def chibar(self, v: str) -> Fraction:
        return self.chi(v).coeff(self.dim_x - 1)

    def eta_pairing(self, dims: Mapping[str, int]) -> Fraction:
        return sum((self.eta[v] * dims[v] for v in self.sigma), Fraction(0))

    def check_normalized(self, dims: Mapping[str, int]) -> None:
        if self.eta_pairing(dims) != 0:
            raise ValueError("eta violates sum_v eta_v r_v = 0")

    def to_json(self) -> dict:
        return {
            "sigma": dict(self.sigma),
            "eta": {v: str(e) for v, e in self.eta.items()},
            "delta": self.delta.to_json(),
            "dimX": self.dim_x,
        }


def p_sigma_chi(d: Mapping[str, SheafDatum], params: StabilityParameters) -> RationalPolynomial:
    out = RationalPolynomial()
    for v in params.sigma:
        out = out + params.sigma[v] * d[v].hilbert - params.chi(v) * d[v].rank
    return out


def rk_sigma(d: Mapping[str, SheafDatum], params: StabilityParameters) -> int:
    return sum(params.sigma[v] * d[v].rank for v in params.sigma)


def deg_mu_sigma_chi(d: Mapping[str, SheafDatum], params: StabilityParameters) -> tuple[Fraction, Fraction | None]:
    """``(deg_{sigma,chi}, mu_{sigma,chi})``; the slope is None when rk_sigma = 0."""
    deg = sum((params.sigma[v] * d[v].degree - params.chibar(v) * d[v].rank for v in params.sigma), Fraction(0))
    rk = rk_sigma(d, params)
    return deg, (deg / rk if rk else None)


def m_sigma_chi(
    total: Mapping[str, SheafDatum],
    filtration: Sequence[Mapping[str, SheafDatum]],
    alphas: Sequence[Fraction],
    params: StabilityParameters,
) -> RationalPolynomial:
    if len(alphas) != len(filtration):
        raise ValueError("one alpha per filtration step required")
    p_tot = p_sigma_chi(total, params)
    r_tot = rk_sigma(total, params)
    out = RationalPolynomial()
    for a, step in zip(alphas, filtration):
        for v in params.sigma:
            if step[v].rank > total[v].rank:
                raise ValueError("filtration step is not dominated by the total")
        out = out + Fraction(a) * (p_tot * rk_sigma(step, params) - p_sigma_chi(step, params) * r_tot)
    return out


def reparameterize_eta(params: StabilityParameters, d) -> StabilityParameters:
    """Parameters with ``eta'_v = eta_v - d * sigma_v``."""
    d = Fraction(d)
    return replace(params, eta={v: params.eta[v] - d * params.sigma[v] for v in params.sigma})


def normalizing_shift(params: StabilityParameters, dims: Mapping[str, int]) -> Fraction:
    """The ``d`` for which :func:`reparameterize_eta` gives ``sum eta'_v r_v = 0``."""
    return params.eta_pairing(dims) / sum(params.sigma[v] * dims[v] for v in params.sigma)


def _compare(sub, total, params: StabilityParameters, mode: str) -> int:
    """Sign of (invariant of sub) - (invariant of total)."""
    rs, rt = rk_sigma(sub, params), rk_sigma(total, params)
    if rs == 0:
        raise ValueError("candidate has zero sigma-rank")
    if rt == 0:
        raise ValueError("total has zero sigma-rank")
    if mode == "slope":
        ms = deg_mu_sigma_chi(sub, params)[1]
        mt = deg_mu_sigma_chi(total, params)[1]
        return (ms > mt) - (ms < mt)
    if mode == "polynomial":
        return poly_lex_compare(p_sigma_chi(sub, params) * rt, p_sigma_chi(total, params) * rs)
    raise ValueError(f"unknown mode {mode!r}")


def _sort_key(sub, params, mode):
    if mode == "slope":
        return deg_mu_sigma_chi(sub, params)[1]
    p = p_sigma_chi(sub, params)
    r = rk_sigma(sub, params)
    return _LexKey(p, r)


class _LexKey:
    def __init__(self, p: RationalPolynomial, r: int):
        self.p, self.r = p, r

    def __lt__(self, other: _LexKey) -> bool:
        return poly_lex_compare(self.p * other.r, other.p * self.r) < 0


def slope_semistability_verdict(
    total: Mapping[str, SheafDatum],
    candidates: Sequence[Mapping[str, SheafDatum]],
    params: StabilityParameters,
    mode: str = "slope",
) -> StabilityVerdict:
    """Compare each candidate subobject with the total; relative to the candidates only.

    The witness is the index of the worst offender (largest slope or
    normalized polynomial, first one on ties).
    """
    worst, worst_cmp = None, -1
    for i, c in enumerate(candidates):
        cmp = _compare(c, total, params, mode)
        if worst is None or _sort_key(candidates[worst], params, mode) < _sort_key(c, params, mode):
            worst, worst_cmp = i, cmp
    if worst is None or worst_cmp < 0:
        status = Status.STABLE
    elif worst_cmp == 0:
        status = Status.SEMISTABLE
    else:
        status = Status.UNSTABLE
    witness = worst if status is not Status.STABLE else None
    return StabilityVerdict(status, Certificate.CANDIDATE_RELATIVE, witness, details={"mode": mode, "candidates": len(candidates)})


SubobjectOracle = Callable[[int, VSplitDatum], Iterable[Mapping[str, SheafDatum]]]


def verify_hn(
    total: Mapping[str, SheafDatum],
    filtration: Sequence[Mapping[str, SheafDatum]],
    params: StabilityParameters,
    subobject_oracle: SubobjectOracle,
    mode: str = "slope",
) -> bool:
    """Check a candidate Harder-Narasimhan filtration ``F_1 < ... < F_s < total``.

    Quotients are formed by subtraction; their slopes must strictly decrease
    and each quotient must be semistable against the subobjects the oracle
    supplies for it (called with the 1-based quotient index and its datum).
    """
    chain = [VSplitDatum({v: SheafDatum(0) for v in params.sigma})] + [VSplitDatum(f) for f in filtration] + [VSplitDatum(total)]
    ranks = [rk_sigma(c, params) for c in chain]
    if any(a >= b for a, b in zip(ranks, ranks[1:])):
        raise ValueError("filtration must be strictly increasing in sigma-rank")
    quotients = [hi - lo for lo, hi in zip(chain, chain[1:])]
    for a, b in zip(quotients, quotients[1:]):
        if _compare(a, b, params, mode) <= 0:
            return False
    for i, q in enumerate(quotients, start=1):
        subs = list(subobject_oracle(i, q))
        if not slope_semistability_verdict(q, subs, params, mode).semistable:
            return False
    return True
