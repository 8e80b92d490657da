"""JSON instance documents: schema, parsing, and positioned errors."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import jsonschema

from .algebra import Algebra, AlgebraError, Arrow, Path, Quiver, Relation
from .complexes import ComplexPoint, DimArray
from .linalg import Field, PrimeField, Rationals
from .representations import Representation

_SCALAR = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_VECTORS = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}
_ARRAY = {
    "type": "object",
    "required": ["vectors"],
    "properties": {"start": {"type": "integer"}, "vectors": _VECTORS},
    "additionalProperties": False,
}

SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["algebra"],
    "additionalProperties": False,
    "properties": {
        "algebra": {
            "type": "object",
            "required": ["vertices"],
            "additionalProperties": False,
            "properties": {
                "vertices": {"type": "array", "items": {"type": ["string", "integer"]}, "minItems": 1},
                "arrows": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["name", "source", "target"],
                        "additionalProperties": False,
                        "properties": {
                            "name": {"type": "string", "minLength": 1},
                            "source": {"type": ["string", "integer"]},
                            "target": {"type": ["string", "integer"]},
                        },
                    },
                },
                "relations": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["path"],
                            "additionalProperties": False,
                            "properties": {
                                "coeff": _SCALAR,
                                "path": {"type": "array", "items": {"type": "string"}},
                            },
                        },
                    },
                },
                "length_cap": {"type": "integer", "minimum": 2},
            },
        },
        "field": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["prime", "rationals"]},
                "p": {"type": "integer", "minimum": 2},
            },
        },
        "dimension_array": _ARRAY,
        "rank_array": _ARRAY,
        "seed": {"type": "integer"},
        "budgets": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "enumeration": {"type": "integer", "minimum": 1},
                "count": {"type": "integer", "minimum": 1},
                "sampler": {"type": "integer", "minimum": 1},
                "global_dimension_cap": {"type": "integer", "minimum": 0},
            },
        },
        "primes": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "complex": {"type": "object"},
        "homology": {"type": "object"},
    },
}


class DocumentError(ValueError):
    """A document problem located by a JSON pointer."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.message = message


def _pointer(parts) -> str:
    return "".join(f"/{p}" for p in parts)


DEFAULT_BUDGETS = {"enumeration": 1 << 20, "count": 10**7, "sampler": 200, "global_dimension_cap": 8}


@dataclass
class Instance:
    algebra: Algebra
    d: DimArray
    r: DimArray
    seed: int = 0
    budgets: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_BUDGETS))
    primes: tuple[int, ...] = ()
    raw: dict = field(default_factory=dict)

    def complex_payload(self) -> ComplexPoint | None:
        doc = self.raw.get("complex")
        if doc is None:
            return None
        try:
            return ComplexPoint.from_json(self.algebra, doc)
        except (KeyError, ValueError, TypeError) as exc:
            raise DocumentError("/complex", str(exc)) from exc

    def homology_payload(self) -> dict[int, Representation] | None:
        doc = self.raw.get("homology")
        if doc is None:
            return None
        out = {}
        for key, val in doc.items():
            try:
                out[int(key)] = Representation.from_json(self.algebra, val)
            except (KeyError, ValueError, TypeError) as exc:
                raise DocumentError(f"/homology/{key}", str(exc)) from exc
        return out


def _field(doc: dict) -> Field:
    fdoc = doc.get("field", {"kind": "prime", "p": 5})
    if fdoc["kind"] == "rationals":
        return Rationals()
    if "p" not in fdoc:
        raise DocumentError("/field", "a prime field needs 'p'")
    try:
        return PrimeField(fdoc["p"])
    except ValueError as exc:
        raise DocumentError("/field/p", str(exc)) from exc


def _coeff(c) -> Fraction:
    return Fraction(c) if not isinstance(c, str) else Fraction(c)


def _array(doc: dict, key: str, n: int) -> DimArray:
    arr = doc.get(key)
    if arr is None:
        return DimArray(n)
    for j, v in enumerate(arr["vectors"]):
        if len(v) != n:
            raise DocumentError(f"/{key}/vectors/{j}", f"expected {n} entries, got {len(v)}")
    return DimArray(n, arr.get("start", 0), tuple(tuple(v) for v in arr["vectors"]))


def parse_algebra(doc: dict, fld: Field) -> Algebra:
    alg = doc["algebra"]
    labels = [str(v) for v in alg["vertices"]]
    if len(set(labels)) != len(labels):
        raise DocumentError("/algebra/vertices", "vertex labels must be distinct")
    index = {v: i for i, v in enumerate(labels)}
    arrows = []
    names = set()
    for j, a in enumerate(alg.get("arrows", [])):
        for end in ("source", "target"):
            if str(a[end]) not in index:
                raise DocumentError(f"/algebra/arrows/{j}/{end}", f"unknown vertex {a[end]!r}")
        if a["name"] in names:
            raise DocumentError(f"/algebra/arrows/{j}/name", f"duplicate arrow name {a['name']!r}")
        names.add(a["name"])
        arrows.append(Arrow(a["name"], index[str(a["source"])], index[str(a["target"])]))
    quiver = Quiver(tuple(labels), tuple(arrows))
    relations = []
    for j, rel in enumerate(alg.get("relations", [])):
        terms = []
        for t, term in enumerate(rel):
            where = f"/algebra/relations/{j}/{t}"
            seq = []
            for name in reversed(term["path"]):
                if name not in names:
                    raise DocumentError(where + "/path", f"unknown arrow {name!r}")
                seq.append(quiver.arrow_index(name))
            if not seq:
                raise DocumentError(where + "/path", "relation paths must have length at least 2")
            for x, y in zip(seq, seq[1:]):
                if arrows[x].target != arrows[y].source:
                    raise DocumentError(where + "/path", "arrows do not compose")
            path = Path(arrows[seq[0]].source, arrows[seq[-1]].target, tuple(seq))
            terms.append((_coeff(term.get("coeff", 1)), path))
        relations.append(Relation(tuple(terms)))
    try:
        return Algebra(quiver, relations, fld, alg.get("length_cap", 8))
    except AlgebraError as exc:
        raise DocumentError("/algebra/relations", str(exc)) from exc


def parse_document(doc: Any) -> Instance:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise DocumentError(_pointer(err.absolute_path), err.message)
    fld = _field(doc)
    alg = parse_algebra(doc, fld)
    budgets = dict(DEFAULT_BUDGETS)
    budgets.update(doc.get("budgets", {}))
    return Instance(
        alg,
        _array(doc, "dimension_array", alg.n),
        _array(doc, "rank_array", alg.n),
        int(doc.get("seed", 0)),
        budgets,
        tuple(doc.get("primes", ())),
        doc,
    )


def load_document(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_document(doc)
