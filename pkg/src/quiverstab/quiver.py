"""Quivers, augmented representations, subspace tuples and oriented cycles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .exact import QQ, Field, Matrix, contains, mat_inverse, mat_rank

ArrowCopy = tuple[str, int]  # (arrow name, copy index starting at 0)


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: str
    head: str
    multiplicity: int = 1


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex names must be unique")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.tail not in vs or a.head not in vs:
                raise ValueError(f"arrow {a.name} references an unknown vertex")
            if a.multiplicity < 1:
                raise ValueError(f"arrow {a.name} has multiplicity < 1")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def arrow_copies(self) -> list[ArrowCopy]:
        return sorted((a.name, k) for a in self.arrows for k in range(a.multiplicity))

    def out_copies(self, v: str) -> list[ArrowCopy]:
        return [(a.name, k) for a in self.arrows if a.tail == v for k in range(a.multiplicity)]

    def doubled(self, b: int) -> Quiver:
        """Every arrow replaced by ``b`` copies of itself."""
        return Quiver(self.vertices, tuple(Arrow(a.name, a.tail, a.head, b) for a in self.arrows))


DimensionVector = Mapping[str, int]


@dataclass(frozen=True, eq=False)
class Representation:
    """Augmented representation ``(f_a copies; epsilon)`` of a quiver at a point."""

    quiver: Quiver
    dims: Mapping[str, int]
    maps: Mapping[str, tuple[Matrix, ...]]
    epsilon: object = None
    field: Field = QQ

    def __post_init__(self):
        q = self.quiver
        dims = {v: int(self.dims[v]) for v in q.vertices}
        if any(d < 0 for d in dims.values()):
            raise ValueError("dimensions must be nonnegative")
        maps = {}
        for a in q.arrows:
            ms = tuple(self.maps.get(a.name, ()))
            if not ms:
                ms = tuple(Matrix.zeros(dims[a.head], dims[a.tail], self.field) for _ in range(a.multiplicity))
            if len(ms) != a.multiplicity:
                raise ValueError(f"arrow {a.name}: expected {a.multiplicity} matrices, got {len(ms)}")
            for m in ms:
                if m.shape != (dims[a.head], dims[a.tail]):
                    raise ValueError(f"arrow {a.name}: shape {m.shape} != {(dims[a.head], dims[a.tail])}")
                if m.field != self.field:
                    raise ValueError(f"arrow {a.name}: matrix over {m.field}, representation over {self.field}")
            maps[a.name] = ms
        unknown = set(self.maps) - set(maps)
        if unknown:
            raise ValueError(f"maps given for unknown arrows {sorted(unknown)}")
        eps = self.field(1 if self.epsilon is None else self.epsilon)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "epsilon", eps)
        if not eps and all(m.is_zero() for ms in maps.values() for m in ms):
            raise ValueError("either epsilon != 0 or some arrow map must be nonzero")

    def map(self, copy: ArrowCopy) -> Matrix:
        name, k = copy
        return self.maps[name][k]

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def base_change(self, g: Mapping[str, Matrix]) -> Representation:
        """The representation ``g . f`` with ``f_a -> g_h f_a g_t^{-1}``."""
        inv = {v: mat_inverse(g[v]) for v in self.quiver.vertices}
        maps = {}
        for a in self.quiver.arrows:
            maps[a.name] = tuple(g[a.head] @ m @ inv[a.tail] for m in self.maps[a.name])
        return Representation(self.quiver, self.dims, maps, self.epsilon, self.field)

    def scaled(self, z) -> Representation:
        z = self.field(z)
        maps = {name: tuple(m.scale(z) for m in ms) for name, ms in self.maps.items()}
        return Representation(self.quiver, self.dims, maps, z * self.epsilon, self.field)


@dataclass(frozen=True, eq=False)
class SubspaceTuple:
    """One subspace per vertex, each given by a matrix of basis columns."""

    spaces: Mapping[str, Matrix]

    def dim(self, v: str) -> int:
        return self.spaces[v].cols

    def dims(self) -> dict[str, int]:
        return {v: m.cols for v, m in self.spaces.items()}

    def __getitem__(self, v: str) -> Matrix:
        return self.spaces[v]

    def is_zero(self) -> bool:
        return all(m.cols == 0 for m in self.spaces.values())

    @classmethod
    def zero(cls, rep: Representation) -> SubspaceTuple:
        return cls({v: Matrix.zeros(rep.dims[v], 0, rep.field) for v in rep.quiver.vertices})

    @classmethod
    def full(cls, rep: Representation) -> SubspaceTuple:
        return cls({v: Matrix.identity(rep.dims[v], rep.field) for v in rep.quiver.vertices})

    def is_full(self, rep: Representation) -> bool:
        return all(self.spaces[v].cols == rep.dims[v] for v in rep.quiver.vertices)

    def contains(self, other: SubspaceTuple) -> bool:
        return all(contains(self.spaces[v], other.spaces[v]) for v in self.spaces)

    def same(self, other: SubspaceTuple) -> bool:
        return self.dims() == other.dims() and self.contains(other)


def check_subspace_tuple(rep: Representation, sub: SubspaceTuple) -> None:
    for v in rep.quiver.vertices:
        m = sub.spaces.get(v)
        if m is None:
            raise ValueError(f"subspace tuple is missing vertex {v}")
        if m.rows != rep.dims[v]:
            raise ValueError(f"vertex {v}: subspace lives in dimension {m.rows}, fiber has {rep.dims[v]}")
        if m.field != rep.field:
            raise ValueError(f"vertex {v}: field mismatch")
        if mat_rank(m) != m.cols:
            raise ValueError(f"vertex {v}: basis columns are linearly dependent")


def is_subrepresentation(rep: Representation, sub: SubspaceTuple) -> bool:
    check_subspace_tuple(rep, sub)
    for a in rep.quiver.arrows:
        src, dst = sub[a.tail], sub[a.head]
        if src.cols == 0:
            continue
        for m in rep.maps[a.name]:
            if not contains(dst, m @ src):
                return False
    return True


@dataclass(frozen=True)
class OrientedCycle:
    """Arrow copies ``(a_1, ..., a_l)`` with ``h(a_i) = t(a_{i-1})`` and ``h(a_1) = t(a_l)``.

    ``a_l`` is applied first, so the endomorphism is ``f_{a_1} ... f_{a_l}``.
    """

    arrows: tuple[ArrowCopy, ...]

    def __len__(self):
        return len(self.arrows)

    def base(self, q: Quiver) -> str:
        return q.arrow(self.arrows[0][0]).head

    def validate(self, q: Quiver) -> None:
        if not self.arrows:
            raise ValueError("empty cycle")
        arrows = [q.arrow(name) for name, _ in self.arrows]
        for (name, k), a in zip(self.arrows, arrows):
            if not 0 <= k < a.multiplicity:
                raise ValueError(f"copy {k} of arrow {name} does not exist")
        for i in range(1, len(arrows)):
            if arrows[i].head != arrows[i - 1].tail:
                raise ValueError("cycle is not composable")
        if arrows[0].head != arrows[-1].tail:
            raise ValueError("cycle does not close up")

    def rotations(self) -> list[OrientedCycle]:
        n = len(self.arrows)
        return [OrientedCycle(self.arrows[i:] + self.arrows[:i]) for i in range(n)]

    def canonical(self) -> OrientedCycle:
        return min(self.rotations(), key=lambda c: c.arrows)

    def label(self) -> str:
        return ".".join(f"{name}[{k}]" for name, k in self.arrows)

    def to_json(self) -> list:
        return [[name, k] for name, k in self.arrows]


def cycle_bound(dims: Mapping[str, int]) -> int:
    n = sum(dims.values())
    return n * n + 1


def _closed_walks(q: Quiver, max_len: int):
    """Yield every composable closed word of length <= max_len (all rotations)."""
    out: dict[str, list[tuple[ArrowCopy, str]]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        for k in range(a.multiplicity):
            out[a.tail].append(((a.name, k), a.head))

    def extend(word: list[ArrowCopy], start: str, cur: str):
        # word holds a_l, a_{l-1}, ... in application order
        for copy, head in out[cur]:
            word.append(copy)
            if head == start:
                yield tuple(reversed(word))
            if len(word) < max_len:
                yield from extend(word, start, head)
            word.pop()

    for v in q.vertices:
        yield from extend([], v, v)


def enumerate_cycles(q: Quiver, max_len: int) -> list[OrientedCycle]:
    """All oriented cycles of length <= max_len, one per rotation class.

    Each class is represented by its lexicographically least rotation; the
    result is sorted by (length, arrow sequence).
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    seen = set()
    for word in _closed_walks(q, max_len):
        c = OrientedCycle(word).canonical()
        seen.add(c.arrows)
    return [OrientedCycle(w) for w in sorted(seen, key=lambda w: (len(w), w))]


def compose_along_cycle(rep: Representation, c: OrientedCycle) -> Matrix:
    c.validate(rep.quiver)
    out = rep.map(c.arrows[0])
    for copy in c.arrows[1:]:
        out = out @ rep.map(copy)
    if out.rows != out.cols:
        raise ValueError("cycle composition is not square")
    return out
