"""JSON file formats for algebras and relations.

Algebra::

    {"name": "z2", "size": 2, "zero": 0,
     "operations": [{"name": "sub", "arity": 2, "table": [0, 1, 1, 0]}]}

Tables are flat, row-major, last argument fastest.  Relation::

    {"arity": 2, "tuples": [[0, 0], [1, 1], [1, 0]]}
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path
from typing import Any, Optional

from .algebra import AlgebraError, FiniteAlgebra, Operation, Relation
from . import corpus


class FormatError(AlgebraError):
    pass


def _read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: expected an integer, got {value!r}")
    return value


def algebra_from_dict(doc: Any, default_name: str = "algebra") -> FiniteAlgebra:
    if not isinstance(doc, dict):
        raise FormatError("algebra document must be a JSON object")
    for key in ("size", "zero"):
        if key not in doc:
            raise FormatError(f"missing field {key!r}")
    size = _int(doc["size"], "size")
    if size < 1:
        raise FormatError("size: must be positive")
    zero = _int(doc["zero"], "zero")
    if not 0 <= zero < size:
        raise FormatError(f"zero out of range: {zero} not in 0..{size - 1}")
    ops = []
    raw_ops = doc.get("operations", [])
    if not isinstance(raw_ops, list):
        raise FormatError("operations: expected a list")
    for i, op in enumerate(raw_ops):
        where = f"operations[{i}]"
        if not isinstance(op, dict):
            raise FormatError(f"{where}: expected an object")
        for key in ("name", "arity", "table"):
            if key not in op:
                raise FormatError(f"{where}: missing field {key!r}")
        name = op["name"]
        if not isinstance(name, str) or not name or any(c in name for c in "(), "):
            raise FormatError(f"{where}.name: bad operation name {name!r}")
        arity = _int(op["arity"], f"{where}.arity")
        if arity < 0:
            raise FormatError(f"{where}.arity: must be non-negative")
        table = op["table"]
        if not isinstance(table, list):
            raise FormatError(f"{where}.table: expected a list")
        expected = size**arity
        if len(table) != expected:
            raise FormatError(f"{where}.table: expected {expected} entries, got {len(table)}")
        for j, v in enumerate(table):
            v = _int(v, f"{where}.table[{j}]")
            if not 0 <= v < size:
                raise FormatError(f"{where}.table[{j}]: entry {v} out of range 0..{size - 1}")
        ops.append(Operation(name, arity, tuple(table)))
    name = doc.get("name", default_name)
    if not isinstance(name, str):
        raise FormatError("name: expected a string")
    return FiniteAlgebra(name, size, zero, tuple(ops))


def algebra_to_dict(alg: FiniteAlgebra) -> dict:
    return {
        "name": alg.name,
        "size": alg.size,
        "zero": alg.zero,
        "operations": [{"name": op.name, "arity": op.arity, "table": list(op.table)} for op in alg.operations],
    }


def parse_algebra_file(path) -> FiniteAlgebra:
    doc = _read_json(path)
    try:
        return algebra_from_dict(doc, default_name=Path(path).stem)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def relation_from_dict(doc: Any, size: Optional[int] = None) -> Relation:
    if not isinstance(doc, dict):
        raise FormatError("relation document must be a JSON object")
    if "arity" not in doc or "tuples" not in doc:
        raise FormatError("relation needs fields 'arity' and 'tuples'")
    arity = _int(doc["arity"], "arity")
    if arity < 1:
        raise FormatError("arity: must be positive")
    raw = doc["tuples"]
    if not isinstance(raw, list):
        raise FormatError("tuples: expected a list")
    tuples = []
    for i, t in enumerate(raw):
        if not isinstance(t, list) or len(t) != arity:
            raise FormatError(f"tuples[{i}]: expected a list of {arity} entries (ragged tuple)")
        for j, v in enumerate(t):
            v = _int(v, f"tuples[{i}][{j}]")
            if v < 0 or (size is not None and v >= size):
                hi = "" if size is None else f" 0..{size - 1}"
                raise FormatError(f"tuples[{i}][{j}]: entry {v} out of range{hi}")
        tuples.append(tuple(t))
    unique = set(tuples)
    if len(unique) != len(tuples):
        warnings.warn(f"relation lists {len(tuples) - len(unique)} duplicate tuple(s); they were removed", stacklevel=2)
    return Relation(arity, frozenset(unique))


def relation_to_dict(R: Relation) -> dict:
    return {"arity": R.arity, "tuples": [list(t) for t in sorted(R.tuples)]}


def parse_relation_file(path, size: Optional[int] = None) -> Relation:
    doc = _read_json(path)
    try:
        return relation_from_dict(doc, size)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def load_algebra(ref: str) -> FiniteAlgebra:
    """A path to an algebra file, or the name of a bundled algebra."""
    if Path(ref).exists():
        return parse_algebra_file(ref)
    if ref in corpus.CORPUS:
        return corpus.load(ref)
    raise FormatError(f"{ref}: no such file or bundled algebra")
