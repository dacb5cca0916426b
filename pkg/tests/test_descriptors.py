import json

import numpy as np
import pytest

from hourglass.descriptors import (
    DescriptorSchemaError,
    DescriptorSyntaxError,
    descriptor_digest,
    expr_equal,
    jsonable,
    parse_descriptor,
    parse_descriptor_obj,
    serialize_expr,
    write_descriptor,
)
from hourglass.generate import gen_instance
from hourglass.linalg import DimensionMismatchError
from hourglass.sets import (
    ExplicitSet,
    IdentityElem,
    IruSet,
    Leaf,
    Product,
    Scale,
    Sum,
    ZeroElem,
    expr_expand,
)


def test_identity_descriptor():
    expr = parse_descriptor_obj({"type": "identity", "n": 2})
    assert isinstance(expr, IdentityElem)
    assert expr.n == 2


def test_explicit_pair_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps({
        "schema_version": 1,
        "type": "explicit",
        "matrices": [[[0, 2], [0, 0]], [[0, 0], [2, 0]]],
    }))
    expr = parse_descriptor(path)
    assert isinstance(expr, Leaf)
    assert isinstance(expr.base, ExplicitSet)
    assert expr.base.size == 2


def test_nested_sum_of_products_roundtrip(tmp_path):
    expr = Sum((
        Product((
            Leaf(IruSet([[[1.0, 0.5]], [[0.25, 2.0], [1.0, 1.0]]])),
            IdentityElem(2),
        )),
        Scale(0.75, ZeroElem(2, 2)),
    ))
    path = tmp_path / "expr.json"
    write_descriptor(expr, path)
    back = parse_descriptor(path)
    assert expr_equal(expr, back)


def test_matrix_convenience_form():
    expr = parse_descriptor_obj({"type": "matrix", "entries": [[1, 2], [3, 4]]})
    out = expr_expand(expr)
    assert out.size == 1
    np.testing.assert_array_equal(out.matrices[0], [[1.0, 2.0], [3.0, 4.0]])


def test_numbers_as_decimal_strings():
    expr = parse_descriptor_obj({
        "type": "matrix",
        "entries": [["1.5", "0.25"], ["2", "0.125"]],
    })
    np.testing.assert_array_equal(
        expr_expand(expr).matrices[0], [[1.5, 0.25], [2.0, 0.125]]
    )


def test_float_roundtrip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    entries = rng.uniform(0.1, 2.0, size=(3, 3))
    expr = Leaf(ExplicitSet(entries[None]))
    path = tmp_path / "m.json"
    write_descriptor(expr, path)
    back = parse_descriptor(path)
    np.testing.assert_array_equal(back.base.matrices, expr.base.matrices)


def test_generated_descriptors_roundtrip(tmp_path):
    for seed, kind in enumerate(("iru", "chain", "expr", "iru", "expr")):
        descriptor = gen_instance(
            kind, seed=seed, lo=0.1, hi=2.0, n_rows=2, depth=2
        )
        path = tmp_path / f"{kind}{seed}.json"
        write_descriptor(descriptor, path)
        expr = parse_descriptor(path)
        again = serialize_expr(expr)
        assert again == descriptor


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(DescriptorSyntaxError):
        parse_descriptor(path)


def test_schema_violations():
    with pytest.raises(DescriptorSchemaError):
        parse_descriptor_obj({"type": "nonsense"})
    with pytest.raises(DescriptorSchemaError):
        parse_descriptor_obj({"type": "matrix"})  # missing entries
    with pytest.raises(DescriptorSchemaError):
        parse_descriptor_obj({"type": "matrix", "entries": [[True]]})
    with pytest.raises(DescriptorSchemaError):
        parse_descriptor_obj({"type": "sum", "children": []})
    with pytest.raises(DescriptorSchemaError):
        parse_descriptor_obj(
            {"schema_version": 99, "type": "identity", "n": 2}
        )


def test_dimension_error_carries_json_path():
    bad = {
        "type": "sum",
        "children": [
            {"type": "zero", "n": 2, "m": 2},
            {"type": "zero", "n": 3, "m": 3},
        ],
    }
    with pytest.raises(DimensionMismatchError) as err:
        parse_descriptor_obj(bad)
    assert "$" in str(err.value)


def test_chain_order_violation_rejected():
    with pytest.raises(Exception):
        parse_descriptor_obj({
            "type": "chain",
            "matrices": [[[2.0]], [[1.0]]],
        })


def test_digest_tracks_content(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    write_descriptor({"type": "identity", "n": 2, "schema_version": 1}, p1)
    write_descriptor({"type": "identity", "n": 2, "schema_version": 1}, p2)
    assert descriptor_digest(p1) == descriptor_digest(p2)
    write_descriptor({"type": "identity", "n": 3, "schema_version": 1}, p2)
    assert descriptor_digest(p1) != descriptor_digest(p2)


def test_jsonable_handles_numpy():
    out = jsonable({
        "arr": np.arange(3.0),
        "num": np.float64(1.5),
        "nested": (np.int64(2), [np.bool_(True)]),
    })
    assert out == {"arr": [0.0, 1.0, 2.0], "num": 1.5, "nested": [2, [True]]}
    assert json.dumps(out)
