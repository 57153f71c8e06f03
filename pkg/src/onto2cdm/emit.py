"""Diagram text and canonical model files."""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from onto2cdm.dl import Datatype
from onto2cdm.model import (
    Attribute,
    ConceptualModel,
    Direction,
    EntityType,
    Generalization,
    Multiplicity,
    Origin,
    Relationship,
    canonicalize,
)

FORMAT = "cdm/1"


class BadModelFile(ValueError):
    code = "BAD_MODEL_FILE"


def to_diagram_text(m: ConceptualModel) -> str:
    """PlantUML class diagram for a canonical model."""
    lines = ["@startuml"]
    for e in m.entities:
        lines.append(f"class {e.name} <<{e.origin.value}>> {{")
        lines.extend(f"  {a.name} : {a.datatype.short}" for a in e.attributes)
        lines.append("}")
    for g in m.generalizations:
        lines.append(f"{g.sub} --|> {g.super}")
    for r in m.relationships:
        arrow = "<-->" if r.direction is Direction.BI else "-->"
        lines.append(f'{r.source} {arrow} "{r.multiplicity.encode()}" {r.target} : {r.name}')
    lines.append("@enduml")
    return "\n".join(lines) + "\n"


def model_to_dict(m: ConceptualModel) -> dict:
    m = canonicalize(m)
    return {
        "format": FORMAT,
        "entities": [
            {
                "name": e.name,
                "origin": e.origin.value,
                "attributes": [{"name": a.name, "datatype": a.datatype.value} for a in e.attributes],
            }
            for e in m.entities
        ],
        "relationships": [
            {
                "name": r.name,
                "source": r.source,
                "target": r.target,
                "direction": r.direction.value,
                "multiplicity": [r.multiplicity.lower, "*" if r.multiplicity.upper is None else r.multiplicity.upper],
            }
            for r in m.relationships
        ],
        "generalizations": [{"sub": g.sub, "super": g.super} for g in m.generalizations],
    }


def dumps_model(m: ConceptualModel) -> str:
    return json.dumps(model_to_dict(m), indent=2, ensure_ascii=False) + "\n"


def _field(obj, name, kind, where):
    if not isinstance(obj, dict) or name not in obj:
        raise BadModelFile(f"{where}: missing field {name!r}")
    value = obj[name]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise BadModelFile(f"{where}: field {name!r} has the wrong type")
    return value


def _bound(value, where):
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise BadModelFile(f"{where}: multiplicity bounds must be non-negative integers")
    return value


def model_from_dict(doc) -> ConceptualModel:
    if not isinstance(doc, dict):
        raise BadModelFile("model document must be an object")
    fmt = doc.get("format")
    if fmt != FORMAT:
        raise BadModelFile(f"unsupported format version {fmt!r}, expected {FORMAT!r}")
    try:
        entities = []
        for i, e in enumerate(_field(doc, "entities", list, "model")):
            where = f"entities[{i}]"
            attrs = [
                Attribute(_field(a, "name", str, where), Datatype(_field(a, "datatype", str, where)))
                for a in _field(e, "attributes", list, where)
            ]
            entities.append(EntityType(_field(e, "name", str, where), attrs, Origin(_field(e, "origin", str, where))))
        relationships = []
        for i, r in enumerate(_field(doc, "relationships", list, "model")):
            where = f"relationships[{i}]"
            mult = _field(r, "multiplicity", list, where)
            if len(mult) != 2:
                raise BadModelFile(f"{where}: multiplicity must be [lower, upper]")
            upper = None if mult[1] == "*" else _bound(mult[1], where)
            relationships.append(Relationship(
                _field(r, "name", str, where),
                _field(r, "source", str, where),
                _field(r, "target", str, where),
                Direction(_field(r, "direction", str, where)),
                Multiplicity(_bound(mult[0], where), upper),
            ))
        gens = [
            Generalization(_field(g, "sub", str, f"generalizations[{i}]"), _field(g, "super", str, f"generalizations[{i}]"))
            for i, g in enumerate(_field(doc, "generalizations", list, "model"))
        ]
    except BadModelFile:
        raise
    except (ValueError, TypeError) as exc:
        raise BadModelFile(str(exc)) from exc
    model = ConceptualModel(entities, relationships, gens)
    problems = model.integrity_errors()
    if problems:
        raise BadModelFile(problems[0])
    return canonicalize(model)


def loads_model(text: str) -> ConceptualModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadModelFile(f"not a JSON document: {exc}") from exc
    return model_from_dict(doc)


def read_model(path) -> ConceptualModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise BadModelFile(f"{path}: not UTF-8 text") from exc
    return loads_model(text)


def atomic_write(path, text: str):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_model(m: ConceptualModel, path):
    atomic_write(path, dumps_model(m))
