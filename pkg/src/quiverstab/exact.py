"""Exact scalars, dense matrices and univariate rational polynomials.

Two kinds of fields are supported: the rationals (scalars are
:class:`fractions.Fraction`) and prime fields ``F_p`` with ``p <= 97``
(scalars are :class:`Mod`). No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

MAX_PRIME = 97


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Mod:
    """Residue class modulo a small prime, always stored in ``0..p-1``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, other) -> int:
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError("denominator vanishes mod p")
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def inverse(self) -> Mod:
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero")
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Mod(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"


Scalar = Union[Fraction, Mod]


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field ``F_p``."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and (not _is_prime(self.p) or self.p > MAX_PRIME):
            raise ValueError(f"p must be a prime <= {MAX_PRIME}, got {self.p}")

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    def __call__(self, x) -> Scalar:
        if self.p is None:
            if isinstance(x, Mod):
                raise ValueError("cannot coerce a residue into the rationals")
            return Fraction(x)
        if isinstance(x, Mod):
            if x.p != self.p:
                raise ValueError(f"mixed moduli {x.p} and {self.p}")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return Mod(0, self.p) + x
        return Mod(int(x), self.p)

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def elements(self) -> list[Scalar]:
        if self.p is None:
            raise ValueError("the rationals are not enumerable")
        return [Mod(i, self.p) for i in range(self.p)]

    def __str__(self):
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = Field()


def field_of(x) -> Field:
    return Field(x.p) if isinstance(x, Mod) else QQ


def scalar_to_json(x: Scalar):
    if isinstance(x, Mod):
        return {"p": x.p, "v": x.v}
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def scalar_from_json(obj, field: Field | None = None) -> Scalar:
    if isinstance(obj, dict):
        x = Mod(int(obj["v"]), int(obj["p"]))
        if int(obj["v"]) != x.v:
            raise ValueError(f"residue {obj['v']} not in canonical range mod {obj['p']}")
        return field(x) if field is not None else x
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise ValueError(f"not a scalar: {obj!r}")
    return (field or QQ)(obj)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True, eq=False)
class Matrix:
    """Dense row-major matrix over a single field."""

    rows: int
    cols: int
    entries: tuple
    field: Field = QQ

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ, cols: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(field(x) for r in rows for x in r), field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, field: Field = QQ) -> Matrix:
        columns = [list(c) for c in columns]
        if any(len(c) != nrows for c in columns):
            raise ValueError("column length does not match row count")
        return cls(nrows, len(columns), tuple(field(columns[j][i]) for i in range(nrows) for j in range(len(columns))), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> Matrix:
        return cls(rows, cols, (field.zero,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> Matrix:
        z, o = field.zero, field.one
        return cls(n, n, tuple(o if i == j else z for i in range(n) for j in range(n)), field)

    @classmethod
    def diag(cls, values: Sequence, field: Field = QQ) -> Matrix:
        n = len(values)
        z = field.zero
        return cls(n, n, tuple(field(values[i]) if i == j else z for i in range(n) for j in range(n)), field)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _check_field(self, other: Matrix):
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __add__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return Matrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)), self.field)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch in subtraction")
        return Matrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)), self.field)

    def __neg__(self) -> Matrix:
        return Matrix(self.rows, self.cols, tuple(-a for a in self.entries), self.field)

    def scale(self, c) -> Matrix:
        c = self.field(c)
        return Matrix(self.rows, self.cols, tuple(c * a for a in self.entries), self.field)

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch in product: {self.shape} @ {other.shape}")
        n, m, k = self.rows, other.cols, self.cols
        z = self.field.zero
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            for j in range(m):
                s = z
                for t in range(k):
                    if arow[t]:
                        s = s + arow[t] * b[t * m + j]
                out.append(s)
        return Matrix(n, m, tuple(out), self.field)

    def T(self) -> Matrix:
        return Matrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)), self.field)

    def __repr__(self):
        body = "; ".join(" ".join(str(scalar_to_json(x)) if not isinstance(x, Mod) else str(x.v) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix[{self.rows}x{self.cols} {self.field}]({body})"

    def to_json(self) -> list:
        return [[scalar_to_json(x) for x in self.row(i)] for i in range(self.rows)]


def hstack(blocks: Sequence[Matrix], rows: int | None = None, field: Field | None = None) -> Matrix:
    """Concatenate matrices side by side; ``rows``/``field`` needed when empty."""
    if not blocks:
        return Matrix.zeros(rows or 0, 0, field or QQ)
    r = blocks[0].rows
    f = blocks[0].field
    for b in blocks:
        if b.rows != r:
            raise ValueError("row mismatch in hstack")
        if b.field != f:
            raise ValueError("field mismatch in hstack")
    cols = [c for b in blocks for c in b.columns()]
    return Matrix.from_columns(cols, r, f)


def vstack(blocks: Sequence[Matrix], cols: int | None = None, field: Field | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(0, cols or 0, field or QQ)
    c = blocks[0].cols
    f = blocks[0].field
    rows = []
    for b in blocks:
        if b.cols != c:
            raise ValueError("column mismatch in vstack")
        if b.field != f:
            raise ValueError("field mismatch in vstack")
        rows.extend(b.to_rows())
    return Matrix.from_rows(rows, f, cols=c)


def block_diag(blocks: Sequence[Matrix], field: Field = QQ) -> Matrix:
    if blocks:
        field = blocks[0].field
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    z = field.zero
    out = [[z] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b[i, j]
        r0 += b.rows
        c0 += b.cols
    return Matrix.from_rows(out, field, cols=m)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = m.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c] if m.field.p is None else rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return Matrix.from_rows(rows, m.field, cols=m.cols), pivots


def mat_rank(m: Matrix) -> int:
    return len(rref(m)[1])


def mat_kernel(m: Matrix) -> Matrix:
    """Matrix whose columns form a basis of ``{x : m x = 0}``."""
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    f = m.field
    basis = []
    for fc in free:
        v = [f.zero] * m.cols
        v[fc] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i, fc]
        basis.append(v)
    return Matrix.from_columns(basis, m.cols, f)


def column_space(m: Matrix) -> Matrix:
    """Basis (as columns) of the image; the pivot columns of ``m``."""
    _, pivots = rref(m)
    return Matrix.from_columns([m.column(j) for j in pivots], m.rows, m.field)


def canonical_basis(m: Matrix) -> Matrix:
    """Basis of the column space in a canonical form (transposed RREF)."""
    red, pivots = rref(m.T())
    return Matrix.from_columns([red.row(i) for i in range(len(pivots))], m.rows, m.field)


def mat_inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = hstack([m, Matrix.identity(n, m.field)]) if n else m
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return Matrix.from_rows([red.row(i)[n:] for i in range(n)], m.field, cols=n)


def mat_det(m: Matrix):
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    rows = m.to_rows()
    n = m.rows
    det = m.field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return m.field.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def trace(m: Matrix):
    if m.rows != m.cols:
        raise ValueError("trace of a non-square matrix")
    s = m.field.zero
    for i in range(m.rows):
        s = s + m[i, i]
    return s


def contains(big: Matrix, small: Matrix) -> bool:
    """Whether span(columns of small) is inside span(columns of big)."""
    if small.cols == 0:
        return True
    return mat_rank(hstack([big, small])) == mat_rank(big)


def same_span(a: Matrix, b: Matrix) -> bool:
    return mat_rank(a) == mat_rank(b) and contains(a, b)


def span_sum(a: Matrix, b: Matrix) -> Matrix:
    return column_space(hstack([a, b]))


def preimage(m: Matrix, target: Matrix) -> Matrix:
    """Basis of ``{x : m x in span(target)}``."""
    # x is in the preimage iff (Q m) x = 0 for any Q whose kernel is span(target)
    if target.cols == 0:
        return mat_kernel(m)
    annihilator = mat_kernel(target.T()).T()
    return mat_kernel(annihilator @ m)


# ---------------------------------------------------------------------------
# polynomials


class RationalPolynomial:
    """Univariate polynomial over Q, dense ascending, no trailing zeros."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable = ()):
        cs = [Fraction(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coefficients: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> RationalPolynomial:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> RationalPolynomial:
        if isinstance(other, RationalPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coefficients), len(other.coefficients))
        return RationalPolynomial(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coefficients)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            cs = str(c)
            if mono and c == 1:
                cs = ""
            elif mono and c == -1:
                cs = "-"
            terms.append(f"{cs}{'*' if cs not in ('', '-') and mono else ''}{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> list:
        return [scalar_to_json(c) for c in self.coefficients]

    @classmethod
    def from_json(cls, obj) -> RationalPolynomial:
        return cls(Fraction(c) for c in obj)


def poly_lex_compare(p: RationalPolynomial, q: RationalPolynomial) -> int:
    """-1, 0, 1 comparing coefficient vectors from the top degree down."""
    n = max(len(p.coefficients), len(q.coefficients))
    for k in range(n - 1, -1, -1):
        a, b = p.coeff(k), q.coeff(k)
        if a != b:
            return -1 if a < b else 1
    return 0
