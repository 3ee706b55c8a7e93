"""Seeded random instances for the identity suites, tests and scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import QQ, Field, Matrix, RationalPolynomial, mat_rank
from .flags import OneParamSubgroup, SheafFiltration, WeightedFlag
from .quiver import Arrow, Quiver, Representation
from .sheaf import SheafDatum, StabilityParameters, VSplitDatum


@dataclass(frozen=True)
class InstanceConfig:
    max_vertices: int = 3
    max_dim: int = 4
    max_sigma: int = 3
    max_weight: int = 4
    entry_range: int = 2


def random_scalar(rng: random.Random, field: Field, k: int = 2):
    if field.p is not None:
        return field(rng.randrange(field.p))
    return field(rng.randint(-k, k))


def random_matrix(rng: random.Random, rows: int, cols: int, field: Field = QQ, k: int = 2, density: float = 1.0) -> Matrix:
    z = field.zero
    return Matrix.from_rows(
        [[random_scalar(rng, field, k) if rng.random() < density else z for _ in range(cols)] for _ in range(rows)],
        field,
        cols=cols,
    )


def random_full_rank(rng: random.Random, rows: int, cols: int, field: Field = QQ, k: int = 2) -> Matrix:
    """Random matrix of rank ``min(rows, cols)``."""
    while True:
        m = random_matrix(rng, rows, cols, field, k)
        if mat_rank(m) == min(rows, cols):
            return m


def random_invertible(rng: random.Random, n: int, field: Field = QQ, k: int = 2) -> Matrix:
    return random_full_rank(rng, n, n, field, k)


def random_weights(rng: random.Random, count: int, spread: int) -> tuple[int, ...]:
    return tuple(sorted(rng.sample(range(-spread, spread + 1), count)))


def random_weighted_flag(rng: random.Random, n: int, field: Field = QQ, max_weight: int = 4) -> WeightedFlag:
    if n == 0:
        return WeightedFlag(0, (), (rng.randint(-max_weight, max_weight),), field)
    s = rng.randint(0, n - 1)
    cuts = sorted(rng.sample(range(1, n), s))
    basis = random_invertible(rng, n, field)
    cols = basis.columns()
    steps = tuple(Matrix.from_columns(cols[:c], n, field) for c in cuts)
    return WeightedFlag(n, steps, random_weights(rng, s + 1, max_weight), field)


def random_weighti_instance(rng: random.Random, cfg: InstanceConfig = InstanceConfig()):
    """Flags, surjective quotient maps and sigma for the point-level weight identity."""
    nv = rng.randint(1, cfg.max_vertices)
    vs = [f"v{i}" for i in range(nv)]
    flags, quotients, sigma = {}, {}, {}
    for v in vs:
        n = rng.randint(1, cfg.max_dim)
        flags[v] = random_weighted_flag(rng, n, QQ, cfg.max_weight)
        t = rng.randint(0, n)
        quotients[v] = random_full_rank(rng, t, n) if t else Matrix.zeros(0, n)
        sigma[v] = rng.randint(1, cfg.max_sigma)
    return flags, quotients, sigma


def random_polynomial(rng: random.Random, degree: int, leading_positive: bool = True, k: int = 5) -> RationalPolynomial:
    coeffs = [Fraction(rng.randint(-k, k), rng.randint(1, 3)) for _ in range(degree)]
    lead = Fraction(rng.randint(1, k), rng.randint(1, 3))
    coeffs.append(lead if leading_positive else -lead)
    return RationalPolynomial(coeffs)


def random_weightii_instance(rng: random.Random, cfg: InstanceConfig = InstanceConfig(), dim_x: int = 2):
    """Per-vertex weighted filtrations given by (rank, Hilbert polynomial) data."""
    nv = rng.randint(1, cfg.max_vertices)
    data, sigma = {}, {}
    for i in range(nv):
        v = f"v{i}"
        rank = rng.randint(1, cfg.max_dim)
        total = (rank, random_polynomial(rng, dim_x))
        s = rng.randint(0, 3)
        ranks = sorted(rng.randint(0, rank) for _ in range(s))
        steps = tuple((r, random_polynomial(rng, dim_x, k=3)) for r in ranks)
        data[v] = SheafFiltration(total, steps, random_weights(rng, s + 1, cfg.max_weight))
        sigma[v] = rng.randint(1, cfg.max_sigma)
    return data, sigma


def random_sheaf_datum(rng: random.Random, rank: int, dim_x: int) -> SheafDatum:
    if rank == 0:
        return SheafDatum(0, RationalPolynomial([rng.randint(0, 3)]), Fraction(0))
    return SheafDatum(rank, random_polynomial(rng, dim_x) * rank, Fraction(rng.randint(-6, 6), rng.randint(1, 2)))


def random_parameters(rng: random.Random, vertices, dim_x: int = 2, max_sigma: int = 3) -> StabilityParameters:
    sigma = {v: rng.randint(1, max_sigma) for v in vertices}
    eta = {v: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for v in vertices}
    delta = random_polynomial(rng, rng.randint(0, dim_x - 1), k=3)
    return StabilityParameters(sigma, eta, delta, dim_x)


def random_vsplit_chain(rng: random.Random, vertices, length: int, dim_x: int, max_rank: int = 4) -> tuple[VSplitDatum, list[VSplitDatum]]:
    """A total datum and an increasing chain of sub-data built as cumulative sums."""
    pieces = []
    for _ in range(length + 1):
        pieces.append(VSplitDatum({v: random_sheaf_datum(rng, rng.randint(0, max_rank), dim_x) for v in vertices}))
    chain = []
    acc = pieces[0]
    for p in pieces[1:]:
        chain.append(acc)
        acc = acc + p
    return acc, chain


# ---------------------------------------------------------------------------
# quivers and representations


def random_quiver(rng: random.Random, max_vertices: int = 3, max_arrows: int = 3, max_multiplicity: int = 2, cyclic: bool = False) -> Quiver:
    nv = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(nv)]
    arrows = []
    for i in range(rng.randint(1, max_arrows)):
        if cyclic and i == 0:
            t = rng.choice(vs)
            arrows.append(Arrow("a0", t, t, 1))
            continue
        arrows.append(Arrow(f"a{i}", rng.choice(vs), rng.choice(vs), rng.randint(1, max_multiplicity)))
    return Quiver(tuple(vs), tuple(arrows))


def random_dims(rng: random.Random, q: Quiver, max_dim: int = 2, max_total: int | None = None) -> dict[str, int]:
    while True:
        dims = {v: rng.randint(1, max_dim) for v in q.vertices}
        if max_total is None or sum(dims.values()) <= max_total:
            return dims


def random_representation(rng: random.Random, q: Quiver, dims, field: Field = QQ, epsilon=None, density: float = 0.7) -> Representation:
    while True:
        maps = {a.name: tuple(random_matrix(rng, dims[a.head], dims[a.tail], field, density=density) for _ in range(a.multiplicity)) for a in q.arrows}
        eps = random_scalar(rng, field) if epsilon is None else field(epsilon)
        try:
            return Representation(q, dims, maps, eps, field)
        except ValueError:
            continue


def random_nilpotent_representation(rng: random.Random, q: Quiver, dims, field: Field = QQ) -> Representation:
    """``epsilon = 0`` and every arrow strictly lowers a random level function.

    Basis vectors get levels; an arrow component from level ``i`` to level
    ``j`` may be nonzero only when ``j < i``. A random base change hides the
    structure.
    """
    total = sum(dims.values())
    for _ in range(200):
        levels = {v: [rng.randint(1, max(2, total)) for _ in range(dims[v])] for v in q.vertices}
        maps = {}
        for a in q.arrows:
            ms = []
            for _ in range(a.multiplicity):
                rows = [
                    [random_scalar(rng, field) if levels[a.head][i] < levels[a.tail][j] else field.zero for j in range(dims[a.tail])]
                    for i in range(dims[a.head])
                ]
                ms.append(Matrix.from_rows(rows, field, cols=dims[a.tail]))
            maps[a.name] = tuple(ms)
        if all(m.is_zero() for ms in maps.values() for m in ms):
            continue
        rep = Representation(q, dims, maps, 0, field)
        g = {v: random_invertible(rng, dims[v], field) for v in q.vertices}
        return rep.base_change(g)
    raise ValueError("no nonzero nilpotent representation found for these dimensions")


def random_base_change(rng: random.Random, rep: Representation) -> dict[str, Matrix]:
    return {v: random_invertible(rng, rep.dims[v], rep.field) for v in rep.quiver.vertices}


def random_lambda(rng: random.Random, rep: Representation, spread: int = 3, diagonal: bool = False) -> OneParamSubgroup:
    basis, weights = {}, {}
    for v in rep.quiver.vertices:
        n = rep.dims[v]
        basis[v] = Matrix.identity(n, rep.field) if diagonal else random_invertible(rng, n, rep.field)
        weights[v] = tuple(rng.randint(-spread, spread) for _ in range(n))
    return OneParamSubgroup(basis, weights)


def random_normalized_eta(rng: random.Random, dims) -> dict[str, Fraction]:
    """Random eta with ``sum eta_v r_v = 0`` (the last vertex with nonzero dim absorbs the sum)."""
    vs = list(dims)
    eta = {v: Fraction(rng.randint(-3, 3)) for v in vs}
    anchor = [v for v in vs if dims[v]][-1]
    rest = sum(eta[v] * dims[v] for v in vs if v != anchor)
    eta[anchor] = -rest / dims[anchor]
    return eta


def random_vsplit_flag(rng: random.Random, dims, field: Field = QQ, max_weight: int = 4):
    """Random V-split flag: nested per-vertex chains that grow jointly at every step."""
    from .flags import VSplitFlag

    bases = {v: random_invertible(rng, n, field) for v, n in dims.items()}
    total = sum(dims.values())
    s = rng.randint(0, max(0, total - 1))
    # cumulative dimensions per vertex, nondecreasing, jointly strictly increasing
    cuts = sorted(rng.sample(range(1, total), s)) if total > 1 else []
    order = [v for v, n in dims.items() for _ in range(n)]
    rng.shuffle(order)
    steps = []
    for c in cuts:
        counts = {v: order[:c].count(v) for v in dims}
        steps.append({v: Matrix.from_columns(bases[v].columns()[: counts[v]], dims[v], field) for v in dims})
    return VSplitFlag(dict(dims), tuple(steps), random_weights(rng, s + 1, max_weight), field)


NULLCONE_QUIVERS = (
    Quiver(("v",), (Arrow("a", "v", "v"),)),
    Quiver(("v",), (Arrow("a", "v", "v", 2),)),
    Quiver(("v1", "v2"), (Arrow("a", "v1", "v2"), Arrow("b", "v2", "v1"))),
    Quiver(("v1", "v2"), (Arrow("a", "v1", "v2"), Arrow("b", "v2", "v1"), Arrow("c", "v1", "v1"))),
)


def nullcone_corpus(seed: int, nilpotent: int = 50, generic: int = 20, max_total: int = 3):
    """Representations over Q with ``epsilon = 0`` on small cyclic quivers.

    The first ``nilpotent`` are built to lie in the nullcone. The remaining
    ones are random and kept only if some cycle trace is nonzero, as decided
    by :func:`hitchin_point`.
    """
    from .invariants import hitchin_point

    rng = random.Random(seed)
    reps = []
    while len(reps) < nilpotent:
        q = rng.choice(NULLCONE_QUIVERS)
        dims = random_dims(rng, q, 2, max_total)
        if sum(dims.values()) < 2:
            continue
        reps.append(random_nilpotent_representation(rng, q, dims))
    while len(reps) < nilpotent + generic:
        q = rng.choice(NULLCONE_QUIVERS)
        dims = random_dims(rng, q, 2, max_total)
        rep = random_representation(rng, q, dims, QQ, epsilon=0)
        if not hitchin_point(rep).is_zero():
            reps.append(rep)
    return reps
