import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quiverstab.exact import QQ, Matrix, RationalPolynomial, mat_rank, same_span
from quiverstab.flags import (
    OneParamSubgroup,
    SheafFiltration,
    VSplitFlag,
    WeightedFlag,
    flag_to_ops,
    merge_flags,
    ops_to_flag,
    project_flags,
    total_flag,
    weight_formula_sheaf_sides,
    weight_formula_sides,
)
from quiverstab.randgen import (
    random_invertible,
    random_vsplit_flag,
    random_weighted_flag,
    random_weighti_instance,
    random_weightii_instance,
)

seeds = st.integers(0, 10**6)
E1 = Matrix.from_columns([[1, 0]], 2)


def trivial(n, w=0):
    return WeightedFlag(n, (), (w,))


def test_weighted_flag_validation():
    with pytest.raises(ValueError):
        WeightedFlag(2, (E1,), (1, 1))
    with pytest.raises(ValueError):
        WeightedFlag(2, (Matrix.identity(2),), (0, 1))
    with pytest.raises(ValueError):
        WeightedFlag(2, (E1,), (0,))


def test_merge_single_vertex_unchanged():
    f = WeightedFlag(2, (E1,), (-1, 3))
    merged = merge_flags({"v": f})
    assert merged.weights == (-1, 3)
    assert project_flags(merged)["v"].same(f)


def test_merge_two_vertex_example():
    flags = {"v1": trivial(1, 0), "v2": trivial(1, 2)}
    merged = merge_flags(flags)
    assert merged.weights == (0, 2)
    assert merged.length == 1
    step = merged.steps[0]
    assert step["v1"].cols == 1 and step["v2"].cols == 0
    back = project_flags(merged)
    assert all(back[v].same(flags[v]) for v in flags)


def test_merge_identical_weights_pairs_steps():
    f = WeightedFlag(2, (E1,), (0, 5))
    merged = merge_flags({"a": f, "b": f})
    assert merged.weights == (0, 5)
    assert same_span(merged.steps[0]["a"], E1) and same_span(merged.steps[0]["b"], E1)


def test_project_trivial_flag():
    f = VSplitFlag({"v1": 2, "v2": 1}, (), (4,))
    out = project_flags(f)
    assert all(out[v].weights == (4,) and out[v].length == 0 for v in out)


def test_vsplit_flag_requires_growth():
    step = {"v1": Matrix.identity(1), "v2": Matrix.zeros(1, 0)}
    with pytest.raises(ValueError):
        VSplitFlag({"v1": 1, "v2": 1}, (step, step), (0, 1, 2))


def test_ops_to_flag_examples():
    zero = ops_to_flag(OneParamSubgroup.diagonal({"v": (0, 0)}))
    assert zero.length == 0 and zero.weights == (0,)
    f = ops_to_flag(OneParamSubgroup.diagonal({"v": (-1, 1)}))
    assert f.weights == (-1, 1) and same_span(f.steps[0]["v"], E1)
    swapped = OneParamSubgroup({"v": Matrix.from_rows([[0, 1], [1, 0]])}, {"v": (1, -1)})
    assert ops_to_flag(swapped).same(f)


def test_total_flag_examples():
    f = WeightedFlag(2, (E1,), (0, 1))
    assert total_flag(merge_flags({"v": f}), {"v": 1}).same(f)
    two = merge_flags({"v1": trivial(1, 0), "v2": trivial(1, 2)})
    m = total_flag(two, {"v1": 2, "v2": 1})
    assert m.dim == 3 and m.dim_of(1) == 2 and m.weights == (0, 2)


def test_weight_formula_trivial():
    flags = {"v": trivial(3)}
    assert weight_formula_sides(flags, {"v": Matrix.identity(3)}, {"v": 2}) == (0, 0)


def test_weight_formula_example():
    flags = {"v1": trivial(1, 0), "v2": trivial(1, 2)}
    ks = {"v1": Matrix.identity(1), "v2": Matrix.zeros(0, 1)}
    assert weight_formula_sides(flags, ks, {"v1": 1, "v2": 1}) == (1, 1)


def test_weight_formula_rejects_bad_quotient():
    with pytest.raises(ValueError):
        weight_formula_sides({"v": trivial(2)}, {"v": Matrix.identity(3)}, {"v": 1})


def test_sheaf_sides_examples():
    p = RationalPolynomial([1, 2])
    none = {"v": SheafFiltration((2, p), (), (0,)), "w": SheafFiltration((1, p), (), (0,))}
    lhs, rhs = weight_formula_sheaf_sides(none, {"v": 1, "w": 2})
    assert lhs.numerator.is_zero() and rhs.numerator.is_zero()
    one = {"v": SheafFiltration((2, p), ((1, RationalPolynomial([0, 1])),), (0, 3))}
    lhs, rhs = weight_formula_sheaf_sides(one, {"v": 1})
    assert lhs == rhs
    with pytest.raises(ValueError):
        weight_formula_sheaf_sides({"v": SheafFiltration((0, RationalPolynomial()), (), (0,))}, {"v": 1})


@given(seeds)
def test_project_merge_roundtrip(seed):
    rng = random.Random(seed)
    dims = {f"v{i}": rng.randint(1, 3) for i in range(rng.randint(1, 3))}
    f = random_vsplit_flag(rng, dims)
    assert merge_flags(project_flags(f)).same(f)


@given(seeds)
def test_merge_project_roundtrip(seed):
    rng = random.Random(seed)
    flags = {f"v{i}": random_weighted_flag(rng, rng.randint(1, 4)) for i in range(rng.randint(1, 3))}
    out = project_flags(merge_flags(flags))
    assert all(out[v].same(flags[v]) for v in flags)


@given(seeds)
def test_flag_ops_roundtrip(seed):
    rng = random.Random(seed)
    f = random_vsplit_flag(rng, {"a": rng.randint(1, 3), "b": rng.randint(1, 3)})
    assert ops_to_flag(flag_to_ops(f)).same(f)


@given(seeds)
def test_total_flag_dimensions(seed):
    rng = random.Random(seed)
    dims = {f"v{i}": rng.randint(1, 3) for i in range(rng.randint(1, 3))}
    f = random_vsplit_flag(rng, dims)
    sigma = {v: rng.randint(1, 3) for v in dims}
    m = total_flag(f, sigma)
    for j in range(1, f.length + 1):
        assert m.dim_of(j) == sum(sigma[v] * f.space(j)[v].cols for v in dims)


@given(seeds)
def test_weight_identity(seed):
    flags, quotients, sigma = random_weighti_instance(random.Random(seed))
    lhs, rhs = weight_formula_sides(flags, quotients, sigma)
    assert lhs == rhs


@given(seeds)
def test_sheaf_weight_identity(seed):
    rng = random.Random(seed)
    data, sigma = random_weightii_instance(rng, dim_x=rng.randint(1, 3))
    lhs, rhs = weight_formula_sheaf_sides(data, sigma)
    assert lhs == rhs
