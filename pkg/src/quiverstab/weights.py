"""Hilbert-Mumford weights of augmented quiver representations.

Convention: ``lambda`` acts on ``f_a`` by conjugation, so the component of
``f_a`` from the tail eigenspace of weight ``g_t`` to the head eigenspace of
weight ``g_h`` has weight ``g_h - g_t``; ``epsilon`` has weight 0. The weight
``mu(lambda, [f])`` is the maximum weight over nonzero components. Then
``mu < 0`` exactly when ``f(U_j) <= U_{j-1}`` along the ascending eigenflag
and ``epsilon = 0`` (see :func:`flag_characterization`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from .exact import QQ, Field, Matrix, contains, mat_det, mat_inverse, mat_rank
from .flags import OneParamSubgroup, ops_to_flag
from .quiver import Representation, SubspaceTuple


@dataclass(frozen=True, eq=False)
class WeightedFiltrationAlpha:
    """Chain ``0 < F_1 < ... < F_s < full`` of V-split subspaces with ``alpha_i > 0``."""

    dims: Mapping[str, int]
    steps: tuple[Mapping[str, Matrix], ...]
    alphas: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(dict(s) for s in self.steps))
        object.__setattr__(self, "alphas", tuple(Fraction(a) for a in self.alphas))
        object.__setattr__(self, "dims", dict(self.dims))
        if len(self.alphas) != len(self.steps):
            raise ValueError("one alpha per step required")
        if any(a <= 0 for a in self.alphas):
            raise ValueError("alpha coefficients must be positive")
        prev = {v: Matrix.zeros(d, 0) for v, d in self.dims.items()}
        prev_total = 0
        for s in self.steps:
            total = 0
            for v, d in self.dims.items():
                if s[v].rows != d or mat_rank(s[v]) != s[v].cols:
                    raise ValueError(f"vertex {v}: bad basis")
                if prev[v].cols and not contains(s[v], prev[v]):
                    raise ValueError("filtration is not increasing")
                total += s[v].cols
            if total <= prev_total or total >= sum(self.dims.values()):
                raise ValueError("steps must be strictly increasing, proper and nonzero")
            prev, prev_total = s, total

    def total_ranks(self, sigma: Mapping[str, int]) -> list[int]:
        return [sum(sigma[v] * s[v].cols for v in self.dims) for s in self.steps]


def gamma_prime(filtration: WeightedFiltrationAlpha, sigma: Mapping[str, int]) -> tuple[Fraction, ...]:
    """``sum_i alpha_i (R_i - R [R_i times], R_i [R - R_i times])``."""
    R = sum(sigma[v] * d for v, d in filtration.dims.items())
    out = [Fraction(0)] * R
    for a, Ri in zip(filtration.alphas, filtration.total_ranks(sigma)):
        for k in range(R):
            out[k] += a * (Ri - R if k < Ri else Ri)
    return tuple(out)


def level_weights(filtration: WeightedFiltrationAlpha, sigma: Mapping[str, int]) -> list[Fraction]:
    """Value of ``gamma'`` on each graded piece ``F_k / F_{k-1}``, ``k = 1..s+1``."""
    R = sum(sigma[v] * d for v, d in filtration.dims.items())
    Rs = filtration.total_ranks(sigma)
    out = []
    for k in range(1, len(Rs) + 2):
        out.append(sum(a * (Ri - R if k <= i else Ri) for i, (a, Ri) in enumerate(zip(filtration.alphas, Rs), start=1)))
    return out


def filtration_to_ops(filtration: WeightedFiltrationAlpha, sigma: Mapping[str, int], field: Field = QQ) -> tuple[OneParamSubgroup, int]:
    """One-parameter subgroup inducing the filtration with weights ``gamma'``.

    Rational weights are cleared by a positive integer ``c``; returns
    ``(lambda, c)`` where ``lambda`` has weights ``c * gamma'``.
    """
    levels = level_weights(filtration, sigma)
    c = lcm(*(w.denominator for w in levels)) if levels else 1
    basis, weights = {}, {}
    for v, d in filtration.dims.items():
        cols: list[list] = []
        ws: list[int] = []
        chain = [s[v] for s in filtration.steps] + [Matrix.identity(d, field)]
        for level, m in zip(levels, chain):
            for col in m.columns():
                if len(cols) < d and mat_rank(Matrix.from_columns(cols + [col], d, field)) > len(cols):
                    cols.append(col)
                    ws.append(int(level * c))
        basis[v] = Matrix.from_columns(cols, d, field)
        weights[v] = tuple(ws)
    return OneParamSubgroup(basis, weights), c


def _block_weights(rep: Representation, lam: OneParamSubgroup):
    """Yield the weight of every nonzero arrow component in the eigenbasis of lam."""
    q = rep.quiver
    for v in q.vertices:
        if v not in lam.basis or lam.basis[v].rows != rep.dims[v]:
            raise ValueError(f"lambda does not match the fibre at {v}")
    inv = {v: mat_inverse(lam.basis[v]) for v in q.vertices}
    for a in q.arrows:
        wt, wh = lam.weights[a.tail], lam.weights[a.head]
        for m in rep.maps[a.name]:
            adapted = inv[a.head] @ m @ lam.basis[a.tail]
            for i in range(adapted.rows):
                for j in range(adapted.cols):
                    if adapted[i, j]:
                        yield wh[i] - wt[j]


def hm_weight(rep: Representation, lam: OneParamSubgroup) -> int:
    weights = list(_block_weights(rep, lam))
    if rep.epsilon:
        weights.append(0)
    if not weights:
        raise ValueError("weight undefined: epsilon = 0 and all arrow maps vanish")
    return max(weights)


def flag_characterization(rep: Representation, lam: OneParamSubgroup) -> bool:
    """True iff ``epsilon = 0`` and every arrow copy maps ``U_j`` into ``U_{j-1}``."""
    if rep.epsilon:
        return False
    flag = ops_to_flag(lam)
    for j in range(1, flag.length + 2):
        uj, below = flag.space(j), flag.space(j - 1)
        for a in rep.quiver.arrows:
            if uj[a.tail].cols == 0:
                continue
            for m in rep.maps[a.name]:
                if not contains(below[a.head], m @ uj[a.tail]):
                    return False
    return True


def character_pairing(eta: Mapping[str, Fraction], sub) -> Fraction:
    """``-sum_v eta_v dim(sub_v)``; ``sub`` is a SubspaceTuple or a dimension map."""
    dims = sub.dims() if isinstance(sub, SubspaceTuple) else sub
    return -sum((Fraction(eta[v]) * dims[v] for v in dims), Fraction(0))


def king_weight(rep: Representation, lam: OneParamSubgroup, eta: Mapping[str, Fraction]) -> Fraction | None:
    """Weight of ``lam`` for King's affine criterion, or None if inadmissible.

    ``lam`` is admissible when no arrow component has positive weight, i.e.
    every ``U_j`` of its eigenflag is a subrepresentation. The returned value
    is ``-sum_j (gamma_{j+1} - gamma_j) * pairing(U_j)``; a negative value
    certifies instability.
    """
    if any(w > 0 for w in _block_weights(rep, lam)):
        return None
    flag = ops_to_flag(lam)
    g = flag.weights
    total = Fraction(0)
    for j in range(1, flag.length + 1):
        dims = {v: m.cols for v, m in flag.space(j).items()}
        total += (g[j] - g[j - 1]) * character_pairing(eta, dims)
    return -total


# ---------------------------------------------------------------------------
# tensor embedding End(M)^b + C  ->  (M^{(x)s} (x) det^{-1})^{b+1}

MAX_TENSOR_DIM = 3


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _antisym(indices: Sequence[int]):
    """Terms ``(sign, index tuple)`` of the unnormalized antisymmetrization."""
    n = len(indices)
    for perm in itertools.permutations(range(n)):
        yield _perm_sign(perm), tuple(indices[p] for p in perm)


@dataclass(frozen=True, eq=False)
class DecoratedTensor:
    """Element of ``(M^{(x)s} (x) det^{twist})^{slots}`` as sparse coordinates.

    ``coords`` maps ``(slot, i_1, ..., i_s)`` to a nonzero scalar.
    """

    s: int
    slots: int
    coords: Mapping[tuple[int, ...], object]
    field: Field = QQ
    twist: int = -1

    def __eq__(self, other):
        if not isinstance(other, DecoratedTensor):
            return NotImplemented
        return (self.s, self.slots, self.twist, self.field) == (other.s, other.slots, other.twist, other.field) and dict(self.coords) == dict(other.coords)


def total_space_layout(rep: Representation, sigma: Mapping[str, int]) -> list[tuple[str, int]]:
    """Block order of ``M``: ``(vertex, copy)`` pairs in vertex order."""
    return [(v, c) for v in rep.quiver.vertices for c in range(sigma[v])]


def end_blocks(rep: Representation, sigma: Mapping[str, int]) -> list[Matrix]:
    """One endomorphism of ``M`` per arrow copy, ``f_a`` in every (tail copy, head copy) block."""
    layout = total_space_layout(rep, sigma)
    offsets, pos = {}, 0
    for v, c in layout:
        offsets[(v, c)] = pos
        pos += rep.dims[v]
    s = pos
    out = []
    for a in rep.quiver.arrows:
        for m in rep.maps[a.name]:
            rows = [[rep.field.zero] * s for _ in range(s)]
            for ct in range(sigma[a.tail]):
                for ch in range(sigma[a.head]):
                    r0, c0 = offsets[(a.head, ch)], offsets[(a.tail, ct)]
                    for i in range(m.rows):
                        for j in range(m.cols):
                            if m[i, j]:
                                rows[r0 + i][c0 + j] = rows[r0 + i][c0 + j] + m[i, j]
            out.append(Matrix.from_rows(rows, rep.field, cols=s))
    return out


def embed_end_to_tensor(rep: Representation, sigma: Mapping[str, int]) -> DecoratedTensor:
    """Embed the arrow endomorphisms and ``epsilon`` into decorated tensors.

    ``e_j^dual`` is sent to ``(-1)^j e_{c_1} ^ ... ^ e_{c_{s-1}} (x) det^{-1}``
    (``c`` the complement of ``j``, 0-based), i.e. the sign of the permutation
    ``(j, c_1, ..., c_{s-1})``; wedges are expanded as signed sums of tensors.
    ``epsilon`` goes to ``epsilon * e_1 ^ ... ^ e_s (x) det^{-1}`` in the last slot.
    Each arrow copy gets its own slot.
    """
    s = sum(sigma[v] * rep.dims[v] for v in rep.quiver.vertices)
    if s > MAX_TENSOR_DIM:
        raise ValueError(f"dim M = {s} exceeds the cross-check bound {MAX_TENSOR_DIM}")
    blocks = end_blocks(rep, sigma)
    coords: dict[tuple[int, ...], object] = {}

    def add(key, val):
        new = coords.get(key, rep.field.zero) + val
        if new:
            coords[key] = new
        else:
            coords.pop(key, None)

    for slot, e in enumerate(blocks):
        for i in range(s):
            for j in range(s):
                if not e[i, j]:
                    continue
                comp = [c for c in range(s) if c != j]
                for sgn, idx in _antisym(comp):
                    add((slot, i) + idx, e[i, j] * ((-1) ** j * sgn))
    if rep.epsilon:
        for sgn, idx in _antisym(list(range(s))):
            add((len(blocks),) + idx, rep.epsilon * sgn)
    return DecoratedTensor(s, len(blocks) + 1, coords, rep.field)


def tensor_act(t: DecoratedTensor, g: Matrix) -> DecoratedTensor:
    """``g^{(x)s} (x) det(g)^{twist}`` applied slotwise."""
    if g.shape != (t.s, t.s):
        raise ValueError("group element does not act on M")
    scale = mat_det(g) ** t.twist
    coords: dict[tuple[int, ...], object] = {}
    for key, val in t.coords.items():
        slot, idx = key[0], key[1:]
        for out in itertools.product(range(t.s), repeat=t.s):
            c = val
            for o, i in zip(out, idx):
                c = c * g[o, i]
                if not c:
                    break
            if c:
                k2 = (slot,) + out
                coords[k2] = coords.get(k2, t.field.zero) + c * scale
    return DecoratedTensor(t.s, t.slots, {k: v for k, v in coords.items() if v}, t.field, t.twist)


def tensor_hm_weight(t: DecoratedTensor, weights: Sequence[int]) -> tuple[int, int]:
    """Weight of a decorated tensor under the diagonal ``lambda`` with ``weights``.

    Returns ``(tuple_weight, twist_shift)``: ``tuple_weight`` is minus the
    minimum over nonzero coordinates of the dual weights ``-sum_k w_{i_k}``,
    and ``twist_shift = twist * sum(weights)`` is the determinant twist. The
    weight of the tensor is their sum.
    """
    if len(weights) != t.s:
        raise ValueError("one weight per basis vector of M")
    if not t.coords:
        raise ValueError("weight of the zero tensor is undefined")
    tuple_weight = -min(-sum(weights[i] for i in key[1:]) for key in t.coords)
    return tuple_weight, t.twist * sum(weights)


def hm_weight_via_tensor(rep: Representation, lam: OneParamSubgroup, sigma: Mapping[str, int]) -> int:
    """Independent route to :func:`hm_weight` through the tensor embedding."""
    adapted = rep.base_change({v: mat_inverse(lam.basis[v]) for v in rep.quiver.vertices})
    t = embed_end_to_tensor(adapted, sigma)
    ws = [w for v, _ in total_space_layout(rep, sigma) for w in lam.weights[v]]
    tw, shift = tensor_hm_weight(t, ws)
    return tw + shift
