"""Instance files: JSON documents describing algebras, ring maps and modules.

Layout::

    {
      "id": "remark38",                      # optional, defaults to the file stem
      "field": {"kind": "Q"} | {"kind": "Fp", "p": 5},
      "algebras": {name: {"dim", "unit", "mul", "maximal_ideal"?, "labels"?, "provenance"?}},
      "maps":     {name: {"from", "to", "matrix"}},
      "modules":  {name: {"algebra", "dim", "actions"}},
      "verify":   {name: {"map", "modules"?, "s_modules"?, "expect"?}}
    }

Q scalars are strings "a/b" (integers may be bare JSON ints); F_p scalars are
ints in [0, p).  ``emit`` writes the canonical form: sorted keys, reduced
fractions, RREF maximal ideals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema

from .errors import AlgebraError, InstanceSyntaxError, SchemaError, ValidationError
from .exactla import Field, Matrix, Subspace
from .modules import ModulePresentation, validate_module
from .rings import AlgebraPresentation, LocalAlgebra, RingMap, validate_algebra, validate_ring_map

_scalar = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_vector = {"type": "array", "items": _scalar}
_matrix = {"type": "array", "items": _vector}
_name = {"type": "string", "minLength": 1}

SCHEMA = {
    "type": "object",
    "required": ["field", "algebras"],
    "additionalProperties": False,
    "properties": {
        "id": _name,
        "description": {"type": "string"},
        "field": {
            "oneOf": [
                {"type": "object", "properties": {"kind": {"const": "Q"}},
                 "required": ["kind"], "additionalProperties": False},
                {"type": "object", "properties": {"kind": {"const": "Fp"}, "p": {"type": "integer"}},
                 "required": ["kind", "p"], "additionalProperties": False},
            ]
        },
        "algebras": {
            "type": "object", "minProperties": 1,
            "additionalProperties": {
                "type": "object",
                "required": ["dim", "unit", "mul"],
                "additionalProperties": False,
                "properties": {
                    "dim": {"type": "integer", "minimum": 1},
                    "unit": _vector,
                    "mul": {"type": "array", "items": {"type": "array", "items": _vector}},
                    "maximal_ideal": _matrix,
                    "labels": {"type": "array", "items": {"type": "string"}},
                    "provenance": {"type": "string"},
                },
            },
        },
        "maps": {
            "type": "object",
            "additionalProperties": {
                "type": "object", "required": ["from", "to", "matrix"], "additionalProperties": False,
                "properties": {"from": _name, "to": _name, "matrix": _matrix},
            },
        },
        "modules": {
            "type": "object",
            "additionalProperties": {
                "type": "object", "required": ["algebra", "dim", "actions"],
                "additionalProperties": False,
                "properties": {"algebra": _name, "dim": {"type": "integer", "minimum": 0},
                               "actions": {"type": "array", "items": _matrix}},
            },
        },
        "verify": {
            "type": "object",
            "additionalProperties": {
                "type": "object", "required": ["map"], "additionalProperties": False,
                "properties": {
                    "map": _name,
                    "modules": {"type": "array", "items": _name},
                    "s_modules": {"type": "array", "items": _name},
                    "expect": {"enum": ["pass", "NotFree"]},
                },
            },
        },
    },
}


@dataclass
class VerifyRequest:
    map: str
    modules: list = field(default_factory=list)
    s_modules: list = field(default_factory=list)
    expect: str = "pass"


@dataclass
class Instance:
    id: str
    field: Field
    algebras: dict
    maps: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    verify: dict = field(default_factory=dict)
    description: str = ""

    def algebra_name(self, A: LocalAlgebra) -> str:
        return next(k for k, v in self.algebras.items() if v is A)


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "$"


def _scalars(F: Field, raw, path):
    try:
        if F.p:
            out = []
            for x in raw:
                if isinstance(x, str) or not 0 <= x < F.p:
                    raise ValueError(f"F_{F.p} scalars are integers in [0, {F.p})")
                out.append(x)
            return out
        return [Fraction(x) for x in raw]
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(str(exc), path) from None


def _matrix(F: Field, rows, ncols, path) -> Matrix:
    rows = [_scalars(F, r, f"{path}[{i}]") for i, r in enumerate(rows)]
    for i, r in enumerate(rows):
        if len(r) != ncols:
            raise SchemaError(f"row has {len(r)} entries, expected {ncols}", f"{path}[{i}]")
    return Matrix(F, rows, cols=ncols)


def _wrap(exc: AlgebraError, base: str) -> ValidationError:
    idx = getattr(exc, "index", None)
    path = base
    if idx is not None and base.endswith(".mul") and len(idx) >= 2:
        path = f"{base}[{idx[0]}][{idx[1]}]"
    elif idx is not None and base.endswith(".actions"):
        path = f"{base}[{idx[0]}]"
    return ValidationError(exc, path)


def from_json(doc, default_id: str = "instance") -> Instance:
    """Validate a decoded JSON document into an :class:`Instance`."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _path(err.absolute_path))
    fdoc = doc["field"]
    try:
        F = Field(fdoc["kind"], fdoc.get("p"))
    except ValueError as exc:
        raise SchemaError(str(exc), "field") from None

    algebras = {}
    for name, a in sorted(doc["algebras"].items()):
        base = f"algebras.{name}"
        n = a["dim"]
        unit = _scalars(F, a["unit"], base + ".unit")
        if len(unit) != n:
            raise SchemaError(f"unit has {len(unit)} entries, expected {n}", base + ".unit")
        if len(a["mul"]) != n or any(len(row) != n for row in a["mul"]):
            raise SchemaError(f"mul must be {n}x{n}", base + ".mul")
        mul = [[_scalars(F, v, f"{base}.mul[{i}][{j}]") for j, v in enumerate(row)]
               for i, row in enumerate(a["mul"])]
        for i, row in enumerate(mul):
            for j, v in enumerate(row):
                if len(v) != n:
                    raise SchemaError(f"vector has {len(v)} entries, expected {n}",
                                      f"{base}.mul[{i}][{j}]")
        labels = a.get("labels")
        if labels is not None and len(labels) != n:
            raise SchemaError("one label per basis element", base + ".labels")
        pres = AlgebraPresentation(F, n, unit, mul, a.get("provenance"), labels)
        m = None
        if "maximal_ideal" in a:
            vecs = [_scalars(F, v, f"{base}.maximal_ideal[{i}]") for i, v in enumerate(a["maximal_ideal"])]
            if any(len(v) != n for v in vecs):
                raise SchemaError("maximal ideal vectors have the wrong length", base + ".maximal_ideal")
            m = Subspace(F, n, vecs)
        try:
            algebras[name] = validate_algebra(pres, m)
        except AlgebraError as exc:
            raise _wrap(exc, base + ".mul") from None

    def lookup(table, key, path, what):
        if key not in table:
            raise SchemaError(f"unknown {what} {key!r}", path)
        return table[key]

    maps = {}
    for name, mp in sorted(doc.get("maps", {}).items()):
        base = f"maps.{name}"
        R = lookup(algebras, mp["from"], base + ".from", "algebra")
        S = lookup(algebras, mp["to"], base + ".to", "algebra")
        if len(mp["matrix"]) != S.dim:
            raise SchemaError(f"matrix needs {S.dim} rows", base + ".matrix")
        M = _matrix(F, mp["matrix"], R.dim, base + ".matrix")
        try:
            maps[name] = validate_ring_map(R, S, M)
        except AlgebraError as exc:
            raise ValidationError(exc, base + ".matrix") from None

    modules = {}
    for name, md in sorted(doc.get("modules", {}).items()):
        base = f"modules.{name}"
        A = lookup(algebras, md["algebra"], base + ".algebra", "algebra")
        d = md["dim"]
        if len(md["actions"]) != A.dim:
            raise SchemaError(f"need {A.dim} action matrices", base + ".actions")
        acts = []
        for i, rows in enumerate(md["actions"]):
            if len(rows) != d:
                raise SchemaError(f"action must have {d} rows", f"{base}.actions[{i}]")
            acts.append(_matrix(F, rows, d, f"{base}.actions[{i}]"))
        try:
            modules[name] = validate_module(A, acts, name)
        except AlgebraError as exc:
            raise _wrap(exc, base + ".actions") from None

    verify = {}
    for name, v in sorted(doc.get("verify", {}).items()):
        base = f"verify.{name}"
        phi = lookup(maps, v["map"], base + ".map", "map")
        for key, side in (("modules", phi.source), ("s_modules", phi.target)):
            for i, mname in enumerate(v.get(key, [])):
                mod = lookup(modules, mname, f"{base}.{key}[{i}]", "module")
                if mod.algebra is not side:
                    raise SchemaError(f"module {mname!r} is over the wrong algebra", f"{base}.{key}[{i}]")
        verify[name] = VerifyRequest(v["map"], list(v.get("modules", [])), list(v.get("s_modules", [])),
                                     v.get("expect", "pass"))
    return Instance(doc.get("id", default_id), F, algebras, maps, modules, verify,
                    doc.get("description", ""))


def parse_instance(data: bytes | str, default_id: str = "instance") -> Instance:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InstanceSyntaxError(f"not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(f"invalid JSON: {exc}") from None
    return from_json(doc, default_id)


def load_instance(path) -> Instance:
    path = Path(path)
    return parse_instance(path.read_bytes(), default_id=path.stem)


def _mat_json(F, M: Matrix):
    return [[F.fmt(x) for x in r] for r in M.data]


def to_json(inst: Instance) -> dict:
    F = inst.field
    names = {id(A): k for k, A in inst.algebras.items()}
    doc = {"id": inst.id, "field": F.to_json(), "algebras": {}}
    if inst.description:
        doc["description"] = inst.description
    for name, A in inst.algebras.items():
        a = A.presentation.to_json()
        a["maximal_ideal"] = _mat_json(F, A.maximal_ideal.basis)
        doc["algebras"][name] = a
    if inst.maps:
        doc["maps"] = {name: {"from": names[id(phi.source)], "to": names[id(phi.target)],
                              "matrix": _mat_json(F, phi.matrix)}
                       for name, phi in inst.maps.items()}
    if inst.modules:
        doc["modules"] = {name: {"algebra": names[id(M.algebra)], "dim": M.dim,
                                 "actions": [_mat_json(F, a) for a in M.actions]}
                          for name, M in inst.modules.items()}
    if inst.verify:
        doc["verify"] = {}
        for name, v in inst.verify.items():
            d = {"map": v.map}
            if v.modules:
                d["modules"] = list(v.modules)
            if v.s_modules:
                d["s_modules"] = list(v.s_modules)
            if v.expect != "pass":
                d["expect"] = v.expect
            doc["verify"][name] = d
    return doc


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit(inst: Instance) -> bytes:
    return canonical_dumps(to_json(inst)).encode("utf-8")


def module_to_json(M: ModulePresentation, algebra_name: str) -> dict:
    F = M.field
    return {"algebra": algebra_name, "dim": M.dim, "actions": [_mat_json(F, a) for a in M.actions]}


def map_to_json(phi: RingMap, source: str, target: str) -> dict:
    return {"from": source, "to": target, "matrix": _mat_json(phi.source.field, phi.matrix)}
