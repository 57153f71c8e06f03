"""Conceptual data model elements, merging and statistics."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

from onto2cdm.diagnostics import Diagnostic
from onto2cdm.dl import Datatype

UNBOUNDED = None


@dataclass(frozen=True)
class Multiplicity:
    """Closed integer interval ``[lower, upper]``; ``upper=None`` is unbounded."""

    lower: int
    upper: Optional[int] = UNBOUNDED

    def __post_init__(self):
        if self.lower < 0 or (self.upper is not None and self.upper < self.lower):
            raise ValueError(f"invalid multiplicity [{self.lower}, {self.upper}]")

    @property
    def bounded(self) -> bool:
        return self.upper is not None

    def encode(self) -> str:
        return f"{self.lower}..{'*' if self.upper is None else self.upper}"

    def sort_key(self):
        return (self.lower, float("inf") if self.upper is None else self.upper)

    def __str__(self) -> str:
        return self.encode()


ONE_TO_MANY = Multiplicity(1)
ZERO_TO_MANY = Multiplicity(0)
ZERO_OR_ONE = Multiplicity(0, 1)


def intersect(a: Multiplicity, b: Multiplicity) -> Optional[Multiplicity]:
    """Interval intersection; ``None`` stands for the empty interval."""
    lower = max(a.lower, b.lower)
    if a.upper is None:
        upper = b.upper
    elif b.upper is None:
        upper = a.upper
    else:
        upper = min(a.upper, b.upper)
    if upper is not None and lower > upper:
        return None
    return Multiplicity(lower, upper)


class Origin(str, enum.Enum):
    SEED = "seed"
    SUBCONCEPT = "subconcept"
    TARGET = "relationship-target"

    @property
    def rank(self) -> int:
        return _ORIGIN_RANK[self]


_ORIGIN_RANK = {Origin.SEED: 2, Origin.SUBCONCEPT: 1, Origin.TARGET: 0}


class Direction(str, enum.Enum):
    UNI = "uni"
    BI = "bi"


@dataclass(frozen=True)
class Attribute:
    name: str
    datatype: Datatype


@dataclass(frozen=True)
class EntityType:
    name: str
    attributes: tuple = ()
    origin: Origin = Origin.TARGET

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "origin", Origin(self.origin))


@dataclass(frozen=True)
class Relationship:
    name: str
    source: str
    target: str
    direction: Direction = Direction.UNI
    multiplicity: Multiplicity = ZERO_TO_MANY

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))

    @property
    def key(self) -> tuple:
        return (self.name.casefold(), self.source.casefold(), self.target.casefold())


@dataclass(frozen=True)
class Generalization:
    sub: str
    super: str

    @property
    def key(self) -> tuple:
        return (self.sub.casefold(), self.super.casefold())


@dataclass(frozen=True)
class ConceptualModel:
    entities: tuple = ()
    relationships: tuple = ()
    generalizations: tuple = ()

    def __post_init__(self):
        for f in ("entities", "relationships", "generalizations"):
            object.__setattr__(self, f, tuple(getattr(self, f)))

    def entity(self, name: str) -> Optional[EntityType]:
        key = name.casefold()
        for e in self.entities:
            if e.name.casefold() == key:
                return e
        return None

    def integrity_errors(self) -> list:
        names = {e.name.casefold() for e in self.entities}
        bad = []
        for r in self.relationships:
            for end in (r.source, r.target):
                if end.casefold() not in names:
                    bad.append(f"relationship {r.name} refers to missing entity {end}")
        for g in self.generalizations:
            for end in (g.sub, g.super):
                if end.casefold() not in names:
                    bad.append(f"generalization {g.sub} -> {g.super} refers to missing entity {end}")
        return bad


EMPTY_MODEL = ConceptualModel()


class ModelStats(NamedTuple):
    entity_count: int
    relationship_count: int
    attribute_count: int
    generalization_count: int

    def __str__(self) -> str:
        return (f"entities: {self.entity_count}, relationships: {self.relationship_count}, "
                f"attributes: {self.attribute_count}, generalizations: {self.generalization_count}")


def stats(m: ConceptualModel) -> ModelStats:
    return ModelStats(
        len(m.entities),
        len(m.relationships),
        sum(len(e.attributes) for e in m.entities),
        len(m.generalizations),
    )


def _rel_sort_key(r: Relationship):
    return (r.name, r.source, r.target, r.direction.value, r.multiplicity.sort_key())


def canonicalize(m: ConceptualModel) -> ConceptualModel:
    """Sort every element list; generalizations are deduplicated."""
    entities = sorted(
        (EntityType(e.name, sorted(e.attributes, key=lambda a: (a.name, a.datatype.value)), e.origin)
         for e in m.entities),
        key=lambda e: (e.name, e.origin.value),
    )
    gens = {}
    for g in m.generalizations:
        gens.setdefault(g.key, g)
    return ConceptualModel(
        entities,
        sorted(m.relationships, key=_rel_sort_key),
        sorted(gens.values(), key=lambda g: (g.sub, g.super)),
    )


def fold_relationships(members, diagnostics: Optional[list] = None) -> Relationship:
    """Combine relationships sharing one key into a single relationship.

    Multiplicities are intersected; ``bi`` wins over ``uni``. If the
    intersection is empty a MULT_CONFLICT diagnostic is recorded and the
    member interval with the smallest encoding is kept.
    """
    members = list(members)
    lower = max(r.multiplicity.lower for r in members)
    uppers = [r.multiplicity.upper for r in members if r.multiplicity.upper is not None]
    upper = min(uppers) if uppers else None
    first = min(members, key=_rel_sort_key)
    if upper is not None and lower > upper:
        mult = min((r.multiplicity for r in members), key=Multiplicity.encode)
        if diagnostics is not None:
            shown = ", ".join(sorted({r.multiplicity.encode() for r in members}))
            diagnostics.append(Diagnostic.warning(
                "MULT_CONFLICT",
                f"{first.name} {first.source} -> {first.target}: multiplicities {shown} do not intersect; kept {mult.encode()}",
            ))
    else:
        mult = Multiplicity(lower, upper)
    direction = Direction.BI if any(r.direction is Direction.BI for r in members) else Direction.UNI
    return Relationship(
        min(r.name for r in members),
        min(r.source for r in members),
        min(r.target for r in members),
        direction,
        mult,
    )


def merge(a: ConceptualModel, b: ConceptualModel, diagnostics: Optional[list] = None) -> ConceptualModel:
    """Union two models, folding relationships that share a key.

    Entities match by case-insensitive name; the lexicographically smallest
    spelling is kept and every reference is rewritten to it.
    """
    entities = {}
    for e in list(a.entities) + list(b.entities):
        key = e.name.casefold()
        if key in entities:
            entities[key] = merge_entity(entities[key], e, diagnostics)
        else:
            entities[key] = e
    spelling = {k: e.name for k, e in entities.items()}

    def spell(name):
        return spelling.get(name.casefold(), name)

    groups = {}
    for r in list(a.relationships) + list(b.relationships):
        groups.setdefault(r.key, []).append(r)
    relationships = []
    for members in groups.values():
        r = fold_relationships(members, diagnostics)
        relationships.append(Relationship(r.name, spell(r.source), spell(r.target), r.direction, r.multiplicity))

    gens = {}
    for g in list(a.generalizations) + list(b.generalizations):
        g = Generalization(spell(g.sub), spell(g.super))
        gens.setdefault(g.key, g)

    return canonicalize(ConceptualModel(entities.values(), relationships, gens.values()))


def merge_entity(x: EntityType, y: EntityType, diagnostics) -> EntityType:
    attrs = {}
    for attr in list(x.attributes) + list(y.attributes):
        key = attr.name.casefold()
        prev = attrs.get(key)
        if prev is None:
            attrs[key] = attr
            continue
        if prev.datatype is not attr.datatype and diagnostics is not None:
            diagnostics.append(Diagnostic.warning(
                "ATTR_CONFLICT",
                f"{x.name}.{attr.name} declared as {prev.datatype.value} and {attr.datatype.value}",
            ))
        attrs[key] = min(prev, attr, key=lambda t: (t.datatype.value, t.name))
    origin = x.origin if x.origin.rank >= y.origin.rank else y.origin
    return EntityType(min(x.name, y.name), attrs.values(), origin)
