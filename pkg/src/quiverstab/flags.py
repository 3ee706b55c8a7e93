"""Weighted flags, V-split flags, one-parameter subgroups and the weight formulas."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .exact import (
    QQ,
    Field,
    Matrix,
    RationalPolynomial,
    block_diag,
    contains,
    hstack,
    mat_rank,
    same_span,
)


@dataclass(frozen=True, eq=False)
class WeightedFlag:
    """``0 < W_1 < ... < W_s < W`` in a space of dimension ``dim`` with weights
    ``gamma_1 < ... < gamma_{s+1}``."""

    dim: int
    steps: tuple[Matrix, ...]
    weights: tuple[int, ...]
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != len(self.steps) + 1:
            raise ValueError("need exactly one more weight than steps")
        if any(a >= b for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("weights must be strictly increasing")
        prev_rank = 0
        prev = None
        for m in self.steps:
            if m.rows != self.dim:
                raise ValueError("step does not live in the ambient space")
            r = mat_rank(m)
            if r != m.cols:
                raise ValueError("step basis is not linearly independent")
            if r <= prev_rank or r >= self.dim or (prev is not None and not contains(m, prev)):
                raise ValueError("steps must be strictly increasing proper nonzero subspaces")
            prev, prev_rank = m, r
        if self.dim == 0 and self.steps:
            raise ValueError("the zero space has no proper nonzero subspaces")

    @property
    def length(self) -> int:
        return len(self.steps)

    def space(self, i: int) -> Matrix:
        """``W_i`` with ``W_0 = 0`` and ``W_{s+1} = W``."""
        if i <= 0:
            return Matrix.zeros(self.dim, 0, self.field)
        if i > len(self.steps):
            return Matrix.identity(self.dim, self.field)
        return self.steps[i - 1]

    def dim_of(self, i: int) -> int:
        return self.space(i).cols

    def same(self, other: WeightedFlag) -> bool:
        return (
            self.dim == other.dim
            and self.weights == other.weights
            and all(same_span(a, b) for a, b in zip(self.steps, other.steps))
        )

    def to_json(self) -> dict:
        return {"dim": self.dim, "steps": [m.to_json() for m in self.steps], "weights": list(self.weights)}


@dataclass(frozen=True, eq=False)
class VSplitFlag:
    """Filtration of a V-split space by V-split subspaces with shared weights.

    ``steps[j]`` maps every vertex to a basis matrix of ``W_{j+1}^v``.
    """

    dims: Mapping[str, int]
    steps: tuple[Mapping[str, Matrix], ...]
    weights: tuple[int, ...]
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(dict(s) for s in self.steps))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "dims", dict(self.dims))
        if len(self.weights) != len(self.steps) + 1:
            raise ValueError("need exactly one more weight than steps")
        if any(a >= b for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("weights must be strictly increasing")
        chain = [self.space(j) for j in range(len(self.steps) + 2)]
        for lo, hi in zip(chain, chain[1:]):
            grows = False
            for v, d in self.dims.items():
                if hi[v].rows != d:
                    raise ValueError(f"vertex {v}: step does not live in the fiber")
                if mat_rank(hi[v]) != hi[v].cols:
                    raise ValueError(f"vertex {v}: dependent basis")
                if not contains(hi[v], lo[v]):
                    raise ValueError(f"vertex {v}: chain is not increasing")
                grows = grows or hi[v].cols > lo[v].cols
            if not grows:
                raise ValueError("consecutive V-split steps must differ")

    @property
    def vertices(self) -> list[str]:
        return list(self.dims)

    @property
    def length(self) -> int:
        return len(self.steps)

    def space(self, j: int) -> dict[str, Matrix]:
        """``W_j`` with ``W_0 = 0`` and ``W_{s+1}`` the whole space."""
        if j <= 0:
            return {v: Matrix.zeros(d, 0, self.field) for v, d in self.dims.items()}
        if j > len(self.steps):
            return {v: Matrix.identity(d, self.field) for v, d in self.dims.items()}
        return self.steps[j - 1]

    def same(self, other: VSplitFlag) -> bool:
        if self.dims != other.dims or self.weights != other.weights:
            return False
        return all(same_span(a[v], b[v]) for a, b in zip(self.steps, other.steps) for v in self.dims)

    def to_json(self) -> dict:
        return {
            "dims": dict(self.dims),
            "steps": [{v: m.to_json() for v, m in s.items()} for s in self.steps],
            "weights": list(self.weights),
        }


@dataclass(frozen=True, eq=False)
class OneParamSubgroup:
    """Diagonalizable ``lambda``: per vertex an eigenbasis (columns) and integer weights."""

    basis: Mapping[str, Matrix]
    weights: Mapping[str, tuple[int, ...]]

    def __post_init__(self):
        object.__setattr__(self, "basis", dict(self.basis))
        object.__setattr__(self, "weights", {v: tuple(int(w) for w in ws) for v, ws in self.weights.items()})
        if set(self.basis) != set(self.weights):
            raise ValueError("basis and weights must cover the same vertices")
        for v, b in self.basis.items():
            if b.rows != b.cols or mat_rank(b) != b.rows:
                raise ValueError(f"vertex {v}: basis is not invertible")
            if len(self.weights[v]) != b.cols:
                raise ValueError(f"vertex {v}: one weight per basis vector required")

    @classmethod
    def diagonal(cls, weights: Mapping[str, Sequence[int]], field: Field = QQ) -> OneParamSubgroup:
        return cls({v: Matrix.identity(len(ws), field) for v, ws in weights.items()}, weights)

    def eigenspace_upto(self, v: str, w: int) -> Matrix:
        """Sum of eigenspaces at ``v`` with weight ``<= w``."""
        b = self.basis[v]
        cols = [b.column(i) for i, x in enumerate(self.weights[v]) if x <= w]
        return Matrix.from_columns(cols, b.rows, b.field)

    def to_json(self) -> dict:
        return {v: {"basis": self.basis[v].to_json(), "weights": list(self.weights[v])} for v in self.basis}


def _iota(weights: Sequence[int], gamma: int) -> int:
    """``max{i : weights[i-1] <= gamma}``, or 0 when no weight qualifies."""
    return max((i + 1 for i, w in enumerate(weights) if w <= gamma), default=0)


def merge_flags(per_vertex: Mapping[str, WeightedFlag]) -> VSplitFlag:
    """Combine one weighted flag per vertex into a weighted V-split flag.

    The merged weights are the distinct weights of all vertices; the
    component of step ``j`` at ``v`` is the largest step of the ``v``-flag
    whose weight does not exceed ``gamma_j``. Zero-dimensional fibres
    contribute no weights.
    """
    if not per_vertex:
        raise ValueError("at least one vertex required")
    fields = {f.field for f in per_vertex.values()}
    if len(fields) != 1:
        raise ValueError("flags over different fields")
    field = fields.pop()
    gammas = sorted({w for f in per_vertex.values() if f.dim > 0 for w in f.weights})
    if not gammas:
        raise ValueError("all fibres are zero-dimensional")
    steps = []
    for g in gammas[:-1]:
        steps.append({v: f.space(_iota(f.weights, g)) for v, f in per_vertex.items()})
    return VSplitFlag({v: f.dim for v, f in per_vertex.items()}, tuple(steps), tuple(gammas), field)


def project_flags(f: VSplitFlag) -> dict[str, WeightedFlag]:
    """Inverse of :func:`merge_flags`: read off the flag at each vertex."""
    out = {}
    for v, d in f.dims.items():
        if d == 0:
            out[v] = WeightedFlag(0, (), (f.weights[-1],), f.field)
            continue
        steps: list[Matrix] = []
        weights: list[int] = []
        prev = 0
        for j in range(1, f.length + 2):
            m = f.space(j)[v]
            if m.cols > prev:
                steps.append(m)
                weights.append(f.weights[j - 1])
                prev = m.cols
        out[v] = WeightedFlag(d, tuple(steps[:-1]), tuple(weights), f.field)
    return out


def ops_to_flag(lam: OneParamSubgroup) -> VSplitFlag:
    """Weighted flag of ascending eigenspace sums of ``lam``."""
    per_vertex = {}
    for v, b in lam.basis.items():
        ws = sorted(set(lam.weights[v]))
        steps = tuple(lam.eigenspace_upto(v, w) for w in ws[:-1])
        per_vertex[v] = WeightedFlag(b.rows, steps, tuple(ws) if ws else (0,), b.field)
    return merge_flags(per_vertex)


def flag_to_ops(f: VSplitFlag) -> OneParamSubgroup:
    """A one-parameter subgroup whose eigenflag is ``f`` (adapted basis)."""
    basis, weights = {}, {}
    for v, d in f.dims.items():
        cols: list[list] = []
        ws: list[int] = []
        for j in range(1, f.length + 2):
            m = f.space(j)[v]
            for c in m.columns():
                if len(cols) == d:
                    break
                trial = Matrix.from_columns(cols + [c], d, f.field)
                if mat_rank(trial) > len(cols):
                    cols.append(c)
                    ws.append(f.weights[j - 1])
        basis[v] = Matrix.from_columns(cols, d, f.field)
        weights[v] = tuple(ws)
    return OneParamSubgroup(basis, weights)


def total_flag(f: VSplitFlag, sigma: Mapping[str, int]) -> WeightedFlag:
    """The flag ``M_j = sum_v (W_j^v)^{sigma_v}`` in ``M = sum_v W_v^{sigma_v}``."""
    for v in f.dims:
        if sigma[v] < 1:
            raise ValueError("sigma entries must be positive")
    n = sum(sigma[v] * d for v, d in f.dims.items())
    steps = []
    for j in range(1, f.length + 1):
        w = f.space(j)
        steps.append(block_diag([w[v] for v in f.dims for _ in range(sigma[v])], f.field))
    return WeightedFlag(n, tuple(steps), f.weights, f.field)


def _check_quotient(k: Matrix, dim: int) -> None:
    if k.cols != dim:
        raise ValueError(f"quotient map has domain {k.cols}, fibre has dimension {dim}")
    if mat_rank(k) != k.rows:
        raise ValueError("quotient map must be surjective")


def weight_formula_sides(
    flags: Mapping[str, WeightedFlag],
    quotients: Mapping[str, Matrix],
    sigma: Mapping[str, int],
) -> tuple[Fraction, Fraction]:
    """Both sides of the weight identity for flags under quotient maps.

    The left side is evaluated on the total flag in ``M`` with the block
    quotient ``k = sum k_v^{sigma_v}``; the right side vertex by vertex.
    """
    vs = list(flags)
    for v in vs:
        _check_quotient(quotients[v], flags[v].dim)
    merged = merge_flags(flags)
    mflag = total_flag(merged, sigma)
    k = block_diag([quotients[v] for v in vs for _ in range(sigma[v])], merged.field)
    r = mflag.dim
    t = k.rows
    g = merged.weights
    lhs = Fraction(0)
    for j in range(1, merged.length + 1):
        mj = mflag.space(j)
        kmj = mat_rank(k @ mj) if mj.cols else 0
        lhs += Fraction(g[j] - g[j - 1], r) * (r * kmj - t * mj.cols)

    rhs = Fraction(0)
    for v in vs:
        fv, kv = flags[v], quotients[v]
        rv, tv = fv.dim, kv.rows
        if rv == 0:
            continue
        inner = Fraction(0)
        for j in range(1, fv.length + 1):
            wj = fv.space(j)
            inner += Fraction(fv.weights[j] - fv.weights[j - 1], rv) * (rv * mat_rank(kv @ wj) - tv * wj.cols)
        rhs += sigma[v] * inner
        spread = sum(fv.weights[j - 1] * (fv.dim_of(j) - fv.dim_of(j - 1)) for j in range(1, fv.length + 2))
        rhs -= sigma[v] * (Fraction(tv, rv) - Fraction(t, r)) * spread
    return lhs, rhs


# ---------------------------------------------------------------------------
# sheaf-level weight formula


class RationalFunction(NamedTuple):
    numerator: RationalPolynomial
    denominator: RationalPolynomial


@dataclass(frozen=True)
class SheafFiltration:
    """Weighted filtration of one sheaf given by (rank, Hilbert polynomial) data.

    ``steps`` are the proper nonzero pieces ``E_1 < ... < E_s``; ``total`` is ``E``.
    """

    total: tuple[int, RationalPolynomial]
    steps: tuple[tuple[int, RationalPolynomial], ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "weights", tuple(self.weights))
        if len(self.weights) != len(self.steps) + 1:
            raise ValueError("need exactly one more weight than steps")
        if any(a >= b for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("weights must be strictly increasing")
        ranks = [r for r, _ in self.steps] + [self.total[0]]
        if any(a > b for a, b in zip(ranks, ranks[1:])) or (ranks and ranks[0] < 0):
            raise ValueError("ranks must be nondecreasing along the filtration")

    def piece(self, i: int) -> tuple[int, RationalPolynomial]:
        if i <= 0:
            return 0, RationalPolynomial()
        if i > len(self.steps):
            return self.total
        return self.steps[i - 1]


def weight_formula_sheaf_sides(
    data: Mapping[str, SheafFiltration], sigma: Mapping[str, int]
) -> tuple[RationalFunction, RationalFunction]:
    """Both sides of the sheaf weight identity as rational functions in ``l``.

    Both sides share the denominator ``P(E^total) * prod_v P(E_v)``, so the
    identity holds iff the numerators coincide.
    """
    vs = list(data)
    for v in vs:
        if sigma[v] < 1:
            raise ValueError("sigma entries must be positive")
        if data[v].total[1].is_zero():
            raise ValueError(f"vertex {v}: zero Hilbert polynomial")
    rk_tot = sum(sigma[v] * data[v].total[0] for v in vs)
    p_tot = RationalPolynomial()
    for v in vs:
        p_tot = p_tot + sigma[v] * data[v].total[1]
    if p_tot.is_zero():
        raise ValueError("zero total Hilbert polynomial")

    def prod(ps):
        out = RationalPolynomial([1])
        for p in ps:
            out = out * p
        return out

    den = p_tot * prod(data[v].total[1] for v in vs)
    others = {v: prod(data[w].total[1] for w in vs if w != v) for v in vs}

    gammas = sorted({w for v in vs for w in data[v].weights})
    lhs = RationalPolynomial()
    for j in range(1, len(gammas)):
        rk_j = 0
        p_j = RationalPolynomial()
        for v in vs:
            r, p = data[v].piece(_iota(data[v].weights, gammas[j - 1]))
            rk_j += sigma[v] * r
            p_j = p_j + sigma[v] * p
        lhs = lhs + (gammas[j] - gammas[j - 1]) * (p_tot * rk_j - p_j * rk_tot)
    lhs = lhs * prod(data[v].total[1] for v in vs)

    rhs = RationalPolynomial()
    for v in vs:
        fv = data[v]
        rk_v, p_v = fv.total
        inner = RationalPolynomial()
        for j in range(1, len(fv.steps) + 1):
            r, p = fv.piece(j)
            inner = inner + (fv.weights[j] - fv.weights[j - 1]) * (p_v * r - p * rk_v)
        rhs = rhs + sigma[v] * inner * p_tot * others[v]
        spread = RationalPolynomial()
        for j in range(1, len(fv.steps) + 2):
            spread = spread + fv.weights[j - 1] * (fv.piece(j)[1] - fv.piece(j - 1)[1])
        rhs = rhs - sigma[v] * (rk_v * p_tot - rk_tot * p_v) * spread * others[v]
    return RationalFunction(lhs, den), RationalFunction(rhs, den)
