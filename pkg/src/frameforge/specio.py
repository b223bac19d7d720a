"""JSON sequence files (schema version 1).

A number is either a bare JSON number (real) or a ``[re, im]`` pair. Example::

    {"v": 1, "field": "real", "kind": "structured", "base": "onb",
     "edits": [{"op": "replace", "index": 2, "vector": [1]}]}
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .errors import InvalidInput
from .seqmodel import (Drop, EditedBasis, FiniteSequence, Insert, Replace, RuleSequence, RuleTerm,
                       VectorSequence, make_finite, make_rule, make_structured)

__all__ = ["SCHEMA", "validate", "parse", "serialize", "load", "dump", "encode_number", "decode_number"]

_NUMBER = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_VECTOR = {"type": "array", "items": _NUMBER, "minItems": 1}
_POSITION = {"type": "integer", "minimum": 1}

_EDIT = {
    "oneOf": [
        {"type": "object", "required": ["op", "index"], "additionalProperties": False,
         "properties": {"op": {"const": "drop"}, "index": _POSITION}},
        {"type": "object", "required": ["op", "position", "vector"], "additionalProperties": False,
         "properties": {"op": {"const": "insert"}, "position": _POSITION, "vector": _VECTOR}},
        {"type": "object", "required": ["op", "index", "vector"], "additionalProperties": False,
         "properties": {"op": {"const": "replace"}, "index": _POSITION, "vector": _VECTOR}},
    ]
}
_TERM = {
    "type": "object",
    "required": ["index", "coeff"],
    "properties": {
        "index": {"type": "object", "required": ["a", "b"],
                  "properties": {"a": {"type": "integer", "minimum": 0}, "b": {"type": "integer"}}},
        "coeff": {"type": "object", "required": ["poly"],
                  "properties": {"poly": {"type": "array", "items": _NUMBER, "minItems": 1, "maxItems": 3}}},
    },
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["v", "kind"],
    "properties": {
        "v": {"const": 1},
        "field": {"enum": ["real", "complex"]},
        "kind": {"enum": ["finite", "structured"]},
    },
    "if": {"properties": {"kind": {"const": "finite"}}},
    "then": {
        "required": ["vectors"],
        "properties": {"vectors": {"type": "array", "items": _VECTOR, "minItems": 1}},
    },
    "else": {
        "properties": {
            "base": {"const": "onb"},
            "edits": {"type": "array", "items": _EDIT},
            "rule": {"type": "object", "required": ["terms"],
                     "properties": {"terms": {"type": "array", "items": _TERM}}},
        },
        # an edit script and a rule are alternatives
        "not": {"required": ["rule"], "anyOf": [{"required": ["edits"]}, {"required": ["base"]}]},
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def validate(doc) -> None:
    """Raise :class:`InvalidInput` naming the offending location."""
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise InvalidInput(f"schema violation at {where}: {err.message}")


def decode_number(x) -> complex | float:
    if isinstance(x, list):
        return complex(x[0], x[1]) if x[1] else float(x[0])
    return float(x)


def encode_number(z, field: str):
    z = complex(z)
    if field == "complex" and z.imag:
        return [z.real, z.imag]
    return z.real


def _vec(values) -> list:
    return [decode_number(x) for x in values]


def parse(doc) -> VectorSequence:
    """Model for a JSON document (already loaded into Python objects)."""
    validate(doc)
    field = doc.get("field")
    if doc["kind"] == "finite":
        return make_finite([_vec(v) for v in doc["vectors"]], field)
    if "rule" in doc:
        terms = [RuleTerm(t["index"]["a"], t["index"]["b"], tuple(_vec(t["coeff"]["poly"])))
                 for t in doc["rule"]["terms"]]
        return make_rule(terms, field)
    edits = []
    for e in doc.get("edits", []):
        if e["op"] == "drop":
            edits.append(Drop(e["index"]))
        elif e["op"] == "insert":
            edits.append(Insert(e["position"], _vec(e["vector"])))
        else:
            edits.append(Replace(e["index"], _vec(e["vector"])))
    return make_structured(edits, doc.get("base", "onb"), field)


def serialize(s: VectorSequence) -> dict:
    field = s.field
    enc = lambda values: [encode_number(z, field) for z in values]  # noqa: E731
    doc = {"v": 1, "field": field}
    if isinstance(s, FiniteSequence):
        doc.update(kind="finite", vectors=[enc(col) for col in np.asarray(s.matrix).T])
    elif isinstance(s, EditedBasis):
        edits = []
        for e in s.edits:
            if isinstance(e, Drop):
                edits.append({"op": "drop", "index": e.index})
            elif isinstance(e, Insert):
                edits.append({"op": "insert", "position": e.position, "vector": enc(e.vector)})
            else:
                edits.append({"op": "replace", "index": e.index, "vector": enc(e.vector)})
        doc.update(kind="structured", base="onb", edits=edits)
    elif isinstance(s, RuleSequence):
        terms = [{"index": {"a": t.a, "b": t.b}, "coeff": {"poly": enc(t.poly)}} for t in s.terms]
        doc.update(kind="structured", rule={"terms": terms})
    else:
        raise InvalidInput(f"cannot serialize {type(s).__name__}")
    return doc


def load(path) -> VectorSequence:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse(doc)


def dump(s: VectorSequence, path) -> None:
    Path(path).write_text(json.dumps(serialize(s), indent=2) + "\n", encoding="utf-8")
