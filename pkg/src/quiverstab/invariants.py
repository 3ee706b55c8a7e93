"""Cycle-trace invariants and point-level evaluation of the Hitchin map.

Generators are ``t0`` (the augmentation, degree 1) and one trace per
oriented cycle of length at most ``(sum r)^2 + 1`` (degree = length).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Mapping, Sequence

from .exact import Matrix, Scalar, scalar_to_json, trace
from .quiver import OrientedCycle, Quiver, Representation, cycle_bound, enumerate_cycles

MAX_MONOMIALS = 10_000
MAX_DEFAULT_DEGREE = 6


@dataclass(frozen=True)
class InvariantDescriptor:
    cycle: OrientedCycle | None = None  # None means t0

    @property
    def kind(self) -> str:
        return "t0" if self.cycle is None else "cycle"

    @property
    def degree(self) -> int:
        return 1 if self.cycle is None else len(self.cycle)

    def sort_key(self):
        return (self.degree, () if self.cycle is None else self.cycle.arrows)

    def label(self) -> str:
        return "t0" if self.cycle is None else f"tr({self.cycle.label()})"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "degree": self.degree}
        if self.cycle is not None:
            out["cycle"] = self.cycle.to_json()
        return out


T0 = InvariantDescriptor()


def trace_invariant(rep: Representation, d: InvariantDescriptor) -> Scalar:
    if d.cycle is None:
        return rep.epsilon
    d.cycle.validate(rep.quiver)
    m = rep.map(d.cycle.arrows[0])
    for copy in d.cycle.arrows[1:]:
        m = m @ rep.map(copy)
    return trace(m)


def generator_set(q: Quiver, dims: Mapping[str, int]) -> list[InvariantDescriptor]:
    """``t0`` and every cycle class up to the length bound, by (degree, cycle)."""
    cycles = enumerate_cycles(q, cycle_bound(dims)) if q.arrows else []
    return sorted([T0] + [InvariantDescriptor(c) for c in cycles], key=InvariantDescriptor.sort_key)


@dataclass(frozen=True)
class HitchinPoint:
    entries: tuple[tuple[InvariantDescriptor, Scalar], ...]
    in_nullcone: bool

    @property
    def values(self) -> list[Scalar]:
        return [x for _, x in self.entries]

    @property
    def grading(self) -> list[int]:
        return [d.degree for d, _ in self.entries]

    def is_zero(self) -> bool:
        return not any(self.values)

    def to_json(self) -> dict:
        return {
            "entries": [{"invariant": d.to_json(), "label": d.label(), "value": scalar_to_json(x)} for d, x in self.entries],
            "grading": self.grading,
            "in_nullcone": self.in_nullcone,
        }


def hitchin_point(rep: Representation) -> HitchinPoint:
    """Evaluate every generator. Products along cycles share prefixes."""
    gens = generator_set(rep.quiver, rep.dims)
    cache: dict[tuple, Matrix] = {}

    def product(word: tuple) -> Matrix:
        if len(word) == 1:
            return rep.map(word[0])
        m = cache.get(word)
        if m is None:
            m = product(word[:-1]) @ rep.map(word[-1])
            cache[word] = m
        return m

    entries = []
    for d in gens:
        if d.cycle is None:
            entries.append((d, rep.epsilon))
        else:
            entries.append((d, trace(product(d.cycle.arrows))))
    values = [x for _, x in entries]
    return HitchinPoint(tuple(entries), not any(values))


def default_veronese_degree(h: HitchinPoint) -> int:
    top = max(h.grading, default=1)
    return lcm(*range(1, min(top, MAX_DEFAULT_DEGREE) + 1))


def weighted_monomials(degrees: Sequence[int], d: int, limit: int = MAX_MONOMIALS) -> list[tuple[int, ...]]:
    """Non-decreasing index tuples whose degrees sum to ``d``, in lexicographic order."""
    out: list[tuple[int, ...]] = []

    def rec(start: int, remaining: int, acc: list[int]):
        if remaining == 0:
            out.append(tuple(acc))
            if len(out) > limit:
                raise ValueError(f"more than {limit} monomials of degree {d}")
            return
        for i in range(start, len(degrees)):
            if degrees[i] <= remaining:
                acc.append(i)
                rec(i, remaining - degrees[i], acc)
                acc.pop()

    rec(0, d, [])
    return out


def veronese_coordinates(h: HitchinPoint, d: int, limit: int = MAX_MONOMIALS) -> list[Scalar]:
    """Values of every monomial in the generators of weighted degree exactly ``d``."""
    if d < 1:
        raise ValueError("degree must be positive")
    values = h.values
    out = []
    for mono in weighted_monomials(h.grading, d, limit):
        x = values[mono[0]]
        for i in mono[1:]:
            x = x * values[i]
        out.append(x)
    return out
