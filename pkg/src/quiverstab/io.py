"""JSON problem files and report serialization.

Matrices are lists of rows. A subspace is given by a matrix whose columns
span it. Scalars are integers or strings ``"a/b"``; over ``F_p`` integers are
reduced mod ``p``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import QQ, Field, Matrix, RationalPolynomial, scalar_to_json
from .flags import OneParamSubgroup
from .quiver import Arrow, Quiver, Representation, SubspaceTuple, check_subspace_tuple
from .sheaf import SheafDatum, StabilityParameters, VSplitDatum

VERSION = "0.1.0"


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _get(obj: dict, key: str, path: str, kind=None, default=...):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        if default is ...:
            raise SchemaError(f"{path}.{key}".lstrip("."), "missing")
        return default
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"{path}.{key}".lstrip("."), f"expected {getattr(kind, '__name__', kind)}")
    return val


def _scalar(x, f: Field, path: str):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(path, f"not a scalar: {x!r}")
    try:
        return f(Fraction(x))
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(path, str(e)) from None


def _rational(x, path: str) -> Fraction:
    return _scalar(x, QQ, path)


def parse_matrix(rows, f: Field, path: str, shape: tuple[int, int] | None = None) -> Matrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise SchemaError(path, "expected a list of rows")
    ncols = shape[1] if shape else (len(rows[0]) if rows else 0)
    if shape and len(rows) != shape[0]:
        raise SchemaError(path, f"expected {shape[0]} rows, got {len(rows)}")
    for i, r in enumerate(rows):
        if len(r) != ncols:
            raise SchemaError(f"{path}[{i}]", f"expected {ncols} entries, got {len(r)}")
    vals = [[_scalar(x, f, f"{path}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    return Matrix.from_rows(vals, f, cols=ncols)


def parse_field(obj, path="field") -> Field:
    kind = _get(obj, "kind", path, str)
    if kind == "rational":
        return QQ
    if kind == "prime":
        p = _get(obj, "p", path, int)
        try:
            return Field(p)
        except ValueError as e:
            raise SchemaError(f"{path}.p", str(e)) from None
    raise SchemaError(f"{path}.kind", f"unknown field kind {kind!r}")


def field_to_json(f: Field) -> dict:
    return {"kind": "rational"} if f.p is None else {"kind": "prime", "p": f.p}


def parse_quiver(obj, path="quiver") -> Quiver:
    verts = _get(obj, "vertices", path, list)
    arrows = []
    for i, a in enumerate(_get(obj, "arrows", path, list, [])):
        p = f"{path}.arrows[{i}]"
        arrows.append(Arrow(_get(a, "name", p, str), _get(a, "tail", p, str), _get(a, "head", p, str), _get(a, "multiplicity", p, int, 1)))
    try:
        return Quiver(tuple(verts), tuple(arrows))
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def quiver_to_json(q: Quiver) -> dict:
    return {
        "vertices": list(q.vertices),
        "arrows": [{"name": a.name, "tail": a.tail, "head": a.head, "multiplicity": a.multiplicity} for a in q.arrows],
    }


def parse_representation(obj, q: Quiver, f: Field, path="representation") -> Representation:
    dims_obj = _get(obj, "dims", path, dict)
    dims = {}
    for v in q.vertices:
        d = _get(dims_obj, v, f"{path}.dims", int)
        if d < 0:
            raise SchemaError(f"{path}.dims.{v}", "negative dimension")
        dims[v] = d
    maps_obj = _get(obj, "maps", path, dict, {})
    maps = {}
    for name, mats in maps_obj.items():
        p = f"{path}.maps.{name}"
        try:
            a = q.arrow(name)
        except KeyError:
            raise SchemaError(p, "unknown arrow") from None
        if not isinstance(mats, list) or len(mats) != a.multiplicity:
            raise SchemaError(p, f"expected a list of {a.multiplicity} matrices")
        maps[name] = tuple(parse_matrix(m, f, f"{p}[{k}]", (dims[a.head], dims[a.tail])) for k, m in enumerate(mats))
    eps = _scalar(_get(obj, "epsilon", path, default=1), f, f"{path}.epsilon")
    try:
        return Representation(q, dims, maps, eps, f)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def representation_to_json(rep: Representation) -> dict:
    eps = rep.epsilon
    return {
        "dims": dict(rep.dims),
        "maps": {name: [matrix_json(m) for m in ms] for name, ms in rep.maps.items()},
        "epsilon": eps.v if rep.field.p else scalar_to_json(eps),
    }


def matrix_json(m: Matrix) -> list:
    """Rows with plain residues over ``F_p``."""
    if m.field.p is None:
        return m.to_json()
    return [[x.v for x in m.row(i)] for i in range(m.rows)]


def parse_subspace_tuple(obj, rep: Representation, path: str) -> SubspaceTuple:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object mapping vertices to bases")
    spaces = {}
    for v in rep.quiver.vertices:
        rows = _get(obj, v, path)
        m = parse_matrix(rows, rep.field, f"{path}.{v}")
        if rows == [] and rep.dims[v] == 0:
            m = Matrix.zeros(0, 0, rep.field)
        if m.rows != rep.dims[v]:
            raise SchemaError(f"{path}.{v}", f"basis vectors must have length {rep.dims[v]}")
        spaces[v] = m
    sub = SubspaceTuple(spaces)
    try:
        check_subspace_tuple(rep, sub)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None
    return sub


def subspace_tuple_to_json(sub: SubspaceTuple) -> dict:
    return {v: matrix_json(m) for v, m in sub.spaces.items()}


def parse_polynomial(obj, path: str) -> RationalPolynomial:
    if not isinstance(obj, list):
        raise SchemaError(path, "expected a list of coefficients (ascending)")
    return RationalPolynomial([_rational(c, f"{path}[{i}]") for i, c in enumerate(obj)])


def parse_parameters(obj, q: Quiver, path="parameters", allow_top_degree: bool = False) -> StabilityParameters:
    sig_obj = _get(obj, "sigma", path, dict)
    eta_obj = _get(obj, "eta", path, dict)
    sigma, eta = {}, {}
    for v in q.vertices:
        s = _get(sig_obj, v, f"{path}.sigma", int)
        if s < 1:
            raise SchemaError(f"{path}.sigma.{v}", "must be a positive integer")
        sigma[v] = s
        eta[v] = _rational(_get(eta_obj, v, f"{path}.eta"), f"{path}.eta.{v}")
    delta = parse_polynomial(_get(obj, "delta", path, list, [1]), f"{path}.delta")
    dim_x = _get(obj, "dimX", path, int, 1)
    try:
        return StabilityParameters(sigma, eta, delta, dim_x, allow_top_degree)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def parse_lambda(obj, rep: Representation, path="lambda") -> OneParamSubgroup:
    basis, weights = {}, {}
    for v in rep.quiver.vertices:
        entry = _get(obj, v, path, dict)
        n = rep.dims[v]
        basis[v] = parse_matrix(_get(entry, "basis", f"{path}.{v}", list), rep.field, f"{path}.{v}.basis", (n, n))
        ws = _get(entry, "weights", f"{path}.{v}", list)
        if len(ws) != n or any(isinstance(w, bool) or not isinstance(w, int) for w in ws):
            raise SchemaError(f"{path}.{v}.weights", f"expected {n} integers")
        weights[v] = tuple(ws)
    try:
        return OneParamSubgroup(basis, weights)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def lambda_to_json(lam: OneParamSubgroup) -> dict:
    return {v: {"basis": matrix_json(lam.basis[v]), "weights": list(lam.weights[v])} for v in lam.basis}


def parse_sheaf(obj, q: Quiver, path: str) -> VSplitDatum:
    out = {}
    for v in q.vertices:
        e = _get(obj, v, path, dict)
        p = f"{path}.{v}"
        rank = _get(e, "rank", p, int)
        if rank < 0:
            raise SchemaError(f"{p}.rank", "negative rank")
        out[v] = SheafDatum(rank, parse_polynomial(_get(e, "hilbert", p, list, []), f"{p}.hilbert"), _rational(_get(e, "degree", p, default=0), f"{p}.degree"))
    return VSplitDatum(out)


@dataclass
class Candidate:
    spaces: SubspaceTuple | None = None
    sheaf: VSplitDatum | None = None


@dataclass
class Problem:
    quiver: Quiver
    field: Field
    rep: Representation | None
    params: StabilityParameters | None
    candidates: list[Candidate] = field(default_factory=list)
    has_candidates: bool = False
    sheaf: VSplitDatum | None = None
    lam: OneParamSubgroup | None = None
    raw: dict = field(default_factory=dict)

    def digest(self) -> str:
        return digest(self.raw)


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def parse_problem(obj, allow_top_degree: bool = False) -> Problem:
    if not isinstance(obj, dict):
        raise SchemaError("", "problem must be a JSON object")
    q = parse_quiver(_get(obj, "quiver", ""))
    f = parse_field(_get(obj, "field", "", dict, {"kind": "rational"}))
    rep = parse_representation(obj["representation"], q, f) if "representation" in obj else None
    params = parse_parameters(obj["parameters"], q, allow_top_degree=allow_top_degree) if "parameters" in obj else None
    sheaf = parse_sheaf(obj["sheaf"], q, "sheaf") if "sheaf" in obj else None
    if sheaf is not None and params is not None:
        for v, d in sheaf.items():
            try:
                d.check(params.dim_x)
            except ValueError as e:
                raise SchemaError(f"sheaf.{v}", str(e)) from None
    cands = []
    for i, c in enumerate(_get(obj, "candidates", "", list, [])):
        p = f"candidates[{i}]"
        spaces = parse_subspace_tuple(c["spaces"], rep, f"{p}.spaces") if rep is not None and "spaces" in c else None
        sh = parse_sheaf(c["sheaf"], q, f"{p}.sheaf") if "sheaf" in c else None
        if spaces is None and sh is None:
            raise SchemaError(p, "candidate needs 'spaces' or 'sheaf'")
        cands.append(Candidate(spaces, sh))
    lam = parse_lambda(obj["lambda"], rep) if "lambda" in obj and rep is not None else None
    return Problem(q, f, rep, params, cands, "candidates" in obj, sheaf, lam, obj)


def load_problem(path: str, allow_top_degree: bool = False) -> Problem:
    with open(path) as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno} column {e.colno}", e.msg) from None
    return parse_problem(obj, allow_top_degree)


def build_problem_json(
    rep: Representation,
    sigma: dict | None = None,
    eta: dict | None = None,
    delta: list | None = None,
    dim_x: int = 1,
    **extra,
) -> dict:
    """Problem file contents for a representation, used to write corpora."""
    out = {
        "quiver": quiver_to_json(rep.quiver),
        "field": field_to_json(rep.field),
        "representation": representation_to_json(rep),
    }
    if sigma is not None:
        out["parameters"] = {
            "sigma": dict(sigma),
            "eta": {v: str(Fraction(e)) for v, e in eta.items()},
            "delta": [str(Fraction(c)) for c in (delta or [1])],
            "dimX": dim_x,
        }
    out.update(extra)
    return out
