"""JSON descriptors for matrix-set expressions.

A descriptor is a JSON object with a ``type`` tag and a payload:

    {"type": "matrix",   "entries":  [[...], ...]}
    {"type": "explicit", "matrices": [[[...], ...], ...]}
    {"type": "iru",      "row_sets": [[[...], ...], ...]}
    {"type": "chain",    "matrices": [[[...], ...], ...]}
    {"type": "sum",      "children": [...]}
    {"type": "product",  "children": [...]}
    {"type": "scale",    "factor": t, "child": {...}}
    {"type": "zero",     "n": N, "m": M}
    {"type": "identity", "n": N}

The root object additionally carries ``schema_version``.  Numbers may be
JSON numbers or decimal strings; serialization uses Python's shortest
round-trip float text, so parse(serialize(e)) reproduces e exactly.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .linalg import DimensionMismatchError
from .sets import (
    ExplicitSet,
    IdentityElem,
    IruSet,
    Leaf,
    OrderedChain,
    Product,
    RowSet,
    Scale,
    SetExpr,
    Sum,
    ZeroElem,
)

SCHEMA_VERSION = 1


class DescriptorSyntaxError(ValueError):
    """The file is not valid JSON."""


class DescriptorSchemaError(ValueError):
    """The JSON does not match the descriptor schema."""


def _fail(path: str, message: str):
    raise DescriptorSchemaError(f"{path}: {message}")


def _number(value, path: str) -> float:
    if isinstance(value, bool):
        _fail(path, "expected a number, got a boolean")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        try:
            out = float(value)
        except ValueError:
            _fail(path, f"expected a decimal number, got {value!r}")
    else:
        _fail(path, f"expected a number, got {type(value).__name__}")
    if not np.isfinite(out):
        _fail(path, f"number must be finite, got {out}")
    return out


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {value!r}")
    return value


def _numeric_array(value, path: str, depth: int) -> np.ndarray:
    def walk(node, p, d):
        if d == 0:
            return _number(node, p)
        if not isinstance(node, list) or not node:
            _fail(p, "expected a nonempty array")
        return [walk(item, f"{p}[{i}]", d - 1) for i, item in enumerate(node)]

    data = walk(value, path, depth)
    try:
        return np.asarray(data, dtype=float)
    except ValueError:
        _fail(path, "ragged array: inner lists must have equal lengths")


def _get(obj: dict, key: str, path: str):
    if key not in obj:
        _fail(path, f"missing required key {key!r}")
    return obj[key]


_NODE_TYPES = (
    "matrix", "explicit", "iru", "chain", "sum", "product",
    "scale", "zero", "identity",
)


def _parse_node(obj, path: str) -> SetExpr:
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    kind = _get(obj, "type", path)
    if kind not in _NODE_TYPES:
        _fail(f"{path}.type", f"unknown type {kind!r}; one of {_NODE_TYPES}")
    try:
        if kind == "matrix":
            entries = _numeric_array(_get(obj, "entries", path), f"{path}.entries", 2)
            return Leaf(ExplicitSet(entries[None], dedup=False))
        if kind == "explicit":
            mats = _numeric_array(_get(obj, "matrices", path), f"{path}.matrices", 3)
            return Leaf(ExplicitSet(mats))
        if kind == "iru":
            raw = _get(obj, "row_sets", path)
            if not isinstance(raw, list) or not raw:
                _fail(f"{path}.row_sets", "expected a nonempty array of row sets")
            row_sets = [
                RowSet(_numeric_array(rs, f"{path}.row_sets[{i}]", 2))
                for i, rs in enumerate(raw)
            ]
            return Leaf(IruSet(row_sets))
        if kind == "chain":
            mats = _numeric_array(_get(obj, "matrices", path), f"{path}.matrices", 3)
            return Leaf(OrderedChain(mats))
        if kind in ("sum", "product"):
            raw = _get(obj, "children", path)
            if not isinstance(raw, list) or len(raw) < 2:
                _fail(f"{path}.children", "expected an array of >= 2 children")
            children = tuple(
                _parse_node(c, f"{path}.children[{i}]") for i, c in enumerate(raw)
            )
            return Sum(children) if kind == "sum" else Product(children)
        if kind == "scale":
            factor = _number(_get(obj, "factor", path), f"{path}.factor")
            child = _parse_node(_get(obj, "child", path), f"{path}.child")
            return Scale(factor, child)
        if kind == "zero":
            return ZeroElem(
                _integer(_get(obj, "n", path), f"{path}.n"),
                _integer(_get(obj, "m", path), f"{path}.m"),
            )
        return IdentityElem(_integer(_get(obj, "n", path), f"{path}.n"))
    except DimensionMismatchError as exc:
        raise DimensionMismatchError(f"{path}: {exc}") from exc


def parse_descriptor_obj(obj, path: str = "$") -> SetExpr:
    """Parse an already-decoded descriptor object into an expression tree."""
    if isinstance(obj, dict) and "schema_version" in obj:
        version = obj["schema_version"]
        if version != SCHEMA_VERSION:
            _fail(f"{path}.schema_version",
                  f"unsupported version {version!r}, expected {SCHEMA_VERSION}")
    return _parse_node(obj, path)


def parse_descriptor(path) -> SetExpr:
    """Load and parse a descriptor file.

    Raises DescriptorSyntaxError for malformed JSON, DescriptorSchemaError
    for schema violations, and DimensionMismatchError (tagged with the JSON
    path) for admissibility failures.
    """
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorSyntaxError(f"{path}: {exc}") from exc
    return parse_descriptor_obj(obj)


def _serialize_node(e: SetExpr) -> dict:
    if isinstance(e, Leaf):
        base = e.base
        if isinstance(base, IruSet):
            return {
                "type": "iru",
                "row_sets": [rs.rows.tolist() for rs in base.row_sets],
            }
        if isinstance(base, OrderedChain):
            return {"type": "chain", "matrices": base.matrices.tolist()}
        return {"type": "explicit", "matrices": base.matrices.tolist()}
    if isinstance(e, Sum):
        return {"type": "sum", "children": [_serialize_node(c) for c in e.children]}
    if isinstance(e, Product):
        return {
            "type": "product",
            "children": [_serialize_node(c) for c in e.children],
        }
    if isinstance(e, Scale):
        return {"type": "scale", "factor": e.factor,
                "child": _serialize_node(e.child)}
    if isinstance(e, ZeroElem):
        return {"type": "zero", "n": e.n_rows, "m": e.n_cols}
    if isinstance(e, IdentityElem):
        return {"type": "identity", "n": e.n}
    raise TypeError(f"cannot serialize {type(e).__name__}")


def serialize_expr(e: SetExpr) -> dict:
    out = _serialize_node(e)
    out["schema_version"] = SCHEMA_VERSION
    return out


def descriptor_text(obj: dict) -> str:
    """Canonical descriptor text: sorted keys, fixed layout, one per file."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_descriptor(e, path) -> str:
    """Write an expression (or a raw descriptor dict) to ``path``.

    The file appears atomically: the text lands in a sibling temp file that
    is renamed over the target.
    """
    obj = e if isinstance(e, dict) else serialize_expr(e)
    text = descriptor_text(obj)
    target = Path(path)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, target)
    return text


def descriptor_digest(path) -> str:
    """Content hash of a descriptor file (sha256 hex)."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def jsonable(obj):
    """Recursively convert reports (dataclasses, numpy data) to JSON types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def expr_equal(a: SetExpr, b: SetExpr) -> bool:
    """Structural equality of two expression trees (exact entries)."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Leaf):
        if type(a.base) is not type(b.base):
            return False
        if isinstance(a.base, IruSet):
            return len(a.base.row_sets) == len(b.base.row_sets) and all(
                ra.rows.shape == rb.rows.shape and np.array_equal(ra.rows, rb.rows)
                for ra, rb in zip(a.base.row_sets, b.base.row_sets)
            )
        return (
            a.base.matrices.shape == b.base.matrices.shape
            and np.array_equal(a.base.matrices, b.base.matrices)
        )
    if isinstance(a, (Sum, Product)):
        return len(a.children) == len(b.children) and all(
            expr_equal(ca, cb) for ca, cb in zip(a.children, b.children)
        )
    if isinstance(a, Scale):
        return a.factor == b.factor and expr_equal(a.child, b.child)
    if isinstance(a, ZeroElem):
        return (a.n_rows, a.n_cols) == (b.n_rows, b.n_cols)
    if isinstance(a, IdentityElem):
        return a.n == b.n
    return False
