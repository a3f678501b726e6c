"""On-disk and machine-readable formats.

Rationals are written as ``"p/q"`` strings, or as bare integers when the
denominator is 1. Floats go through ``json``, which emits the shortest
round-tripping decimal.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Union

import numpy as np

from .bijection import Partition
from .embedding import Embedding
from .exact import SquaredDistanceMatrix, as_rational, format_rational


class FormatError(ValueError):
    pass


def encode_rational(q: Fraction) -> Union[int, str]:
    return q.numerator if q.denominator == 1 else format_rational(q)


def decode_rational(raw: Any, where: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise FormatError(f"{where}: expected an integer or \"p/q\" string, got {raw!r}")
    try:
        return as_rational(raw)
    except (ValueError, TypeError) as exc:
        raise FormatError(f"{where}: {exc}") from exc


def encode_matrix(rows) -> list[list[Union[int, str]]]:
    return [[encode_rational(Fraction(x)) for x in r] for r in rows]


def decode_matrix(raw: Any, n: int, name: str) -> list[list[Fraction]]:
    if not isinstance(raw, list) or len(raw) != n:
        raise FormatError(f"{name}: expected {n} rows")
    out = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != n:
            raise FormatError(f"{name}: row {i} must have {n} entries")
        out.append([decode_rational(x, f"{name} row {i}, column {j}") for j, x in enumerate(row)])
    return out


# matrix files --------------------------------------------------------------

def matrix_to_json(a: SquaredDistanceMatrix) -> dict:
    return {"n": a.n, "sq_dists": encode_matrix(a.entries)}


def matrix_from_json(obj: Any) -> SquaredDistanceMatrix:
    if not isinstance(obj, dict) or "n" not in obj or "sq_dists" not in obj:
        raise FormatError("matrix file needs fields 'n' and 'sq_dists'")
    n = obj["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FormatError(f"n must be a positive integer, got {n!r}")
    rows = decode_matrix(obj["sq_dists"], n, "sq_dists")
    try:
        return SquaredDistanceMatrix(rows)
    except ValueError as exc:
        raise FormatError(f"sq_dists: {exc}") from exc


def dumps_matrix(a: SquaredDistanceMatrix) -> str:
    return json.dumps(matrix_to_json(a), indent=2) + "\n"


def loads_matrix(text: str) -> SquaredDistanceMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return matrix_from_json(obj)


# embedding files -----------------------------------------------------------

def embedding_to_json(e: Embedding) -> dict:
    return {
        "ambient_dim": e.ambient_dim,
        "points": [[float(x) for x in p] for p in e.points],
        "gram": encode_matrix(e.gram),
        "partition": list(e.partition.parts) if e.partition is not None else None,
        "lambda_sq": encode_rational(e.lambda_sq) if e.lambda_sq is not None else None,
        "block_of": list(e.block_of),
    }


def embedding_from_json(obj: Any) -> Embedding:
    for key in ("ambient_dim", "points", "gram", "partition", "lambda_sq"):
        if not isinstance(obj, dict) or key not in obj:
            raise FormatError(f"embedding file needs field {key!r}")
    points = obj["points"]
    n = len(points)
    gram = decode_matrix(obj["gram"], n, "gram")
    part = obj["partition"]
    partition = Partition.of(part) if part is not None else None
    lam = decode_rational(obj["lambda_sq"], "lambda_sq") if obj["lambda_sq"] is not None else None
    if "block_of" in obj:
        block_of = tuple(obj["block_of"])
    elif partition is not None:
        block_of = tuple(b for b, k in enumerate(partition.parts) for _ in range(k))
    else:
        block_of = tuple(range(n))
    arr = np.array(points, dtype=float).reshape(n, obj["ambient_dim"])
    return Embedding(obj["ambient_dim"], arr, tuple(tuple(r) for r in gram), block_of, partition, lam)


def dumps_embedding(e: Embedding) -> str:
    return json.dumps(embedding_to_json(e), indent=2) + "\n"


def loads_embedding(text: str) -> Embedding:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return embedding_from_json(obj)


# schemas for --json output -------------------------------------------------

_RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+/\d+$"}]}
_RMATRIX = {"type": "array", "items": {"type": "array", "items": _RATIONAL}}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["n", "sq_dists"],
    "properties": {"n": {"type": "integer", "minimum": 1}, "sq_dists": _RMATRIX},
}

EMBEDDING_SCHEMA = {
    "type": "object",
    "required": ["ambient_dim", "points", "gram", "partition", "lambda_sq"],
    "properties": {
        "ambient_dim": {"type": "integer", "minimum": 0},
        "points": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "gram": _RMATRIX,
        "partition": {"type": ["array", "null"], "items": {"type": "integer", "minimum": 1}},
        "lambda_sq": {"oneOf": [_RATIONAL, {"type": "null"}]},
        "block_of": {"type": "array", "items": {"type": "integer"}},
    },
}

_CELL = {
    "type": "object",
    "required": ["dimension", "diameter", "count", "complete", "nodes", "seconds"],
    "properties": {
        "dimension": {"type": "integer"},
        "diameter": {"type": "integer"},
        "count": {"type": "integer", "minimum": 0},
        "complete": {"type": "boolean"},
        "nodes": {"type": "integer"},
        "seconds": {"type": "number"},
        "stats": {"type": "object"},
        "representatives": {"type": "array", "items": MATRIX_SCHEMA},
    },
}

SCHEMAS = {
    "census": {"type": "object", "required": ["mode", "cells"],
               "properties": {"mode": {"enum": ["exact", "upto"]}, "cells": {"type": "array", "items": _CELL}}},
    "partitions": {"type": "object", "required": ["n", "count"],
                   "properties": {"n": {"type": "integer"}, "count": {"type": "integer"},
                                  "partitions": {"type": "array",
                                                 "items": {"type": "array", "items": {"type": "integer"}}}}},
    "check": {"type": "object", "required": ["dim", "realizable", "nondegenerate", "min_dim", "witness", "gram_oracle"],
              "properties": {"dim": {"type": "integer"}, "realizable": {"type": "boolean"},
                             "nondegenerate": {"type": "boolean"},
                             "min_dim": {"type": ["integer", "null"]},
                             "witness": {"type": ["array", "null"], "items": {"type": "integer"}},
                             "gram_oracle": {"type": "boolean"}}},
    "embed": EMBEDDING_SCHEMA,
    "lemma": {"type": "object", "required": ["rows", "all_hold"],
              "properties": {"all_hold": {"type": "boolean"},
                             "rows": {"type": "array", "items": {
                                 "type": "object",
                                 "required": ["partition", "lambda_sq", "det_a", "det_abar", "expr1", "expr2", "holds"],
                                 "properties": {"partition": {"type": "array", "items": {"type": "integer"}},
                                                "lambda_sq": _RATIONAL, "det_a": _RATIONAL, "det_abar": _RATIONAL,
                                                "expr1": _RATIONAL, "expr2": _RATIONAL,
                                                "holds": {"type": "boolean"}}}}}},
    "sigma": {"type": "object",
              "properties": {"d": {"type": "integer"}, "value": {"type": "number"},
                             "inner_radicand": _RATIONAL, "outer_rational": _RATIONAL,
                             "outer_sqrt_coeff": _RATIONAL,
                             "scan": {"type": "array", "items": {
                                 "type": "object",
                                 "required": ["lambda_sq", "realizable_count", "partition_count",
                                              "bijection_holds", "above_threshold"],
                                 "properties": {"lambda_sq": _RATIONAL,
                                                "realizable_count": {"type": "integer"},
                                                "partition_count": {"type": "integer"},
                                                "bijection_holds": {"type": "boolean"},
                                                "above_threshold": {"type": "boolean"},
                                                "witnesses": {"type": "array"}}}}}},
}
