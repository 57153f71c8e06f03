"""Ontology to conceptual-model transformation.

Each named class that is expanded contributes a fragment built by the
mapping rules:

* named class -> entity type
* atomic superclass or intersection operand -> generalization
* top-level union -> the union members become subtypes of the concept
* object restriction -> relationship from the concept to each named class in
  the filler, with a multiplicity derived from the quantifier; restrictions
  nested inside a filler become further relationships of the same concept
* datatype restriction -> attribute
* object property with the concept as domain -> relationship to the range
  (bi-directional when the property has an inverse, at most one target when
  it is functional); datatype property -> attribute

Fragments are merged as they are produced and the result is refined: duplicate
relationships are collapsed by intersecting their multiplicities, and
relationships pointing at configured datatype classes turn into attributes.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional

from onto2cdm import dl
from onto2cdm.diagnostics import Diagnostic, has_errors
from onto2cdm.dl import Datatype
from onto2cdm.model import (
    EMPTY_MODEL,
    ONE_TO_MANY,
    ZERO_OR_ONE,
    ZERO_TO_MANY,
    Attribute,
    ConceptualModel,
    Direction,
    EntityType,
    Generalization,
    Multiplicity,
    Origin,
    Relationship,
    canonicalize,
    fold_relationships,
    intersect,
    merge,
    merge_entity,
)
from onto2cdm.ontology import Ontology, subconcepts_of

log = logging.getLogger(__name__)

intersect_multiplicity = intersect


@dataclass(frozen=True)
class TransformOptions:
    seeds: tuple
    expand_subconcepts: bool = True
    max_iterations: Optional[int] = None
    # class name -> datatype, for ontologies that model datatypes as classes
    datatype_classes: Mapping = field(default_factory=dict)

    def __post_init__(self):
        seeds = (self.seeds,) if isinstance(self.seeds, str) else tuple(self.seeds)
        if not seeds:
            raise ValueError("at least one seed concept is required")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        object.__setattr__(self, "seeds", tuple(dl.normalize_name(s) for s in seeds))


@dataclass
class SubModel:
    model: ConceptualModel
    discovered: set = field(default_factory=set)
    diagnostics: list = field(default_factory=list)


class _Fragment:
    def __init__(self):
        self.entities = {}
        self.relationships = []
        self.generalizations = []
        self.discovered = set()
        self.diagnostics = []

    def entity(self, name, origin=Origin.TARGET, attributes=()):
        e = EntityType(name, attributes, origin)
        key = name.casefold()
        self.entities[key] = merge_entity(self.entities[key], e, self.diagnostics) if key in self.entities else e

    def relate(self, r: Relationship):
        self.entity(r.target)
        self.discovered.add(r.target)
        self.relationships.append(r)

    def generalize(self, sub, sup):
        if sub.casefold() == sup.casefold():
            return
        self.entity(sub)
        self.entity(sup)
        self.generalizations.append(Generalization(sub, sup))

    def absorb(self, other: SubModel):
        for e in other.model.entities:
            self.entity(e.name, e.origin, e.attributes)
        self.relationships.extend(other.model.relationships)
        self.generalizations.extend(other.model.generalizations)
        self.discovered |= other.discovered
        self.diagnostics.extend(other.diagnostics)

    def freeze(self) -> SubModel:
        model = ConceptualModel(self.entities.values(), self.relationships, self.generalizations)
        return SubModel(model, set(self.discovered), list(self.diagnostics))


def multiplicity_of(r) -> Multiplicity:
    if isinstance(r, dl.Exists):
        return ONE_TO_MANY
    if isinstance(r, dl.ForAll):
        return ZERO_TO_MANY
    if isinstance(r, dl.MinCard):
        return Multiplicity(r.n)
    if isinstance(r, dl.MaxCard):
        return Multiplicity(0, r.n)
    if isinstance(r, dl.ExactCard):
        return Multiplicity(r.n, r.n)
    raise TypeError(f"not an object-property restriction: {r!r}")


def _filler_parts(expr):
    """Named classes and nested restrictions inside a restriction filler."""
    names, nested = [], []

    def walk(node):
        if isinstance(node, dl.Atomic):
            if node.name not in names:
                names.append(node.name)
        elif isinstance(node, (dl.Intersection, dl.Union)):
            for op in node.operands:
                walk(op)
        elif dl.is_restriction(node):
            nested.append(node)

    if expr is not None:
        walk(expr)
    return names, nested


def _direction(o: Ontology, prop: str) -> Direction:
    info = o.object_property(prop)
    return Direction.BI if info is not None and info.inverse_of is not None else Direction.UNI


def apply_restriction(o: Ontology, source: str, r) -> SubModel:
    """Relationships (or an attribute) contributed by one restriction on ``source``."""
    frag = _Fragment()
    frag.entity(source)
    if isinstance(r, dl.DATA_RESTRICTIONS):
        frag.entity(source, attributes=[Attribute(r.property, r.datatype)])
        return frag.freeze()
    if not isinstance(r, dl.OBJECT_RESTRICTIONS):
        raise TypeError(f"not a restriction: {r!r}")

    mult = multiplicity_of(r)
    direction = _direction(o, r.property)
    targets, nested = _filler_parts(r.filler)
    if r.filler is None:
        # unqualified cardinality: the property's declared range is the filler
        info = o.object_property(r.property)
        if info is not None and info.range is not None:
            targets = [info.range]
    if not targets and not nested:
        frag.diagnostics.append(Diagnostic.warning(
            "EMPTY_FILLER", f"{dl.render(r)} on {source} names no class; nothing emitted"))
    for t in targets:
        frag.relate(Relationship(r.property, source, t, direction, mult))
    for inner in nested:
        frag.absorb(apply_restriction(o, source, inner))
    return frag.freeze()


def apply_property_axioms(o: Ontology, concept: str) -> SubModel:
    """Relationships and attributes from properties whose domain is ``concept``."""
    frag = _Fragment()
    frag.entity(concept)
    key = concept.casefold()
    for name, info in o.object_properties.items():
        if info.domain is None or info.domain.casefold() != key:
            continue
        if info.range is None:
            frag.diagnostics.append(Diagnostic.warning(
                "RANGELESS_PROPERTY", f"object property {name} has domain {concept} but no range"))
            continue
        mult = ZERO_OR_ONE if info.functional else ZERO_TO_MANY
        direction = Direction.BI if info.inverse_of is not None else Direction.UNI
        frag.relate(Relationship(name, concept, info.range, direction, mult))
    for name, info in o.datatype_properties.items():
        if info.domain is None or info.domain.casefold() != key:
            continue
        if info.range is None:
            frag.diagnostics.append(Diagnostic.warning(
                "RANGELESS_PROPERTY", f"datatype property {name} has domain {concept} but no range"))
            continue
        frag.entity(concept, attributes=[Attribute(name, info.range)])
    return frag.freeze()


def transform_concept(o: Ontology, concept: str, origin: Origin = Origin.SEED) -> SubModel:
    name = o.resolve_class(concept)
    if name is None:
        raise KeyError(concept)
    frag = _Fragment()
    frag.entity(name, origin)
    for _, expr in o.axioms_for(name):
        frag.discovered |= dl.atomic_names(expr)
        for role, part in dl.split_definition(expr):
            if role == "super":
                frag.generalize(name, part.name)
            elif role == "partition":
                frag.generalize(part.name, name)
            elif role == "restriction":
                frag.absorb(apply_restriction(o, name, part))
            else:
                frag.diagnostics.append(Diagnostic.warning(
                    "UNSUPPORTED_SHAPE", f"skipping {dl.render(part)} in the definition of {name}"))
    frag.absorb(apply_property_axioms(o, name))
    frag.discovered.discard(name)
    return frag.freeze()


def refine(m: ConceptualModel, datatype_classes: Optional[Mapping] = None) -> tuple:
    """Collapse duplicate relationships and turn datatype-class targets into attributes."""
    diags = []
    groups = {}
    for r in m.relationships:
        groups.setdefault(r.key, []).append(r)
    folded = [fold_relationships(members, diags) for members in groups.values()]

    dt_classes = {k.casefold(): Datatype(v) for k, v in (datatype_classes or {}).items()}
    entities = {e.name.casefold(): e for e in m.entities}
    kept = []
    for r in folded:
        dt = dt_classes.get(r.target.casefold())
        if dt is None:
            kept.append(r)
            continue
        src = r.source.casefold()
        owner = entities.get(src, EntityType(r.source))
        entities[src] = merge_entity(owner, EntityType(owner.name, [Attribute(r.name, dt)], owner.origin), diags)

    referenced = {n.casefold() for r in kept for n in (r.source, r.target)}
    referenced |= {n.casefold() for g in m.generalizations for n in (g.sub, g.super)}
    for key in dt_classes:
        e = entities.get(key)
        if e is not None and key not in referenced and e.origin is Origin.TARGET and not e.attributes:
            del entities[key]

    return canonicalize(ConceptualModel(entities.values(), kept, m.generalizations)), diags


def defined_only(o: Ontology, m: ConceptualModel) -> list:
    """Flag defined concepts that carry no attributes and only take part in inverse-paired relationships."""
    diags = []
    for e in m.entities:
        if e.attributes or not o.is_defined(e.name):
            continue
        key = e.name.casefold()
        touching = [r for r in m.relationships if key in (r.source.casefold(), r.target.casefold())]
        if not touching:
            continue
        if all((info := o.object_property(r.name)) is not None and info.inverse_of is not None for r in touching):
            props = ", ".join(sorted({r.name for r in touching}))
            diags.append(Diagnostic.warning(
                "DEFINED_ONLY",
                f"{e.name} is a defined concept with no attributes that only participates via {props}; "
                "consider removing it from the model"))
    return diags


def transform(o: Ontology, opts: TransformOptions) -> tuple:
    """Seed-driven generate-and-merge. Returns ``(model, diagnostics)``."""
    diags = []
    seeds = []
    for s in opts.seeds:
        name = o.resolve_class(s)
        if name is None:
            diags.append(Diagnostic.error("UNKNOWN_SEED", f"seed {s!r} is not a class of the ontology"))
        elif name not in seeds:
            seeds.append(name)
    if has_errors(diags):
        return EMPTY_MODEL, diags

    cap = opts.max_iterations or max(len(o.classes), 1)
    queue = deque((s, Origin.SEED) for s in seeds)
    queued = {s.casefold() for s in seeds}
    acc = EMPTY_MODEL
    done = 0
    while queue:
        if done >= cap:
            diags.append(Diagnostic.warning(
                "ITERATION_CAP", f"stopped after {done} concepts; {len(queue)} left unexpanded"))
            break
        concept, origin = queue.popleft()
        sub = transform_concept(o, concept, origin)
        log.debug("transformed %s: %d relationships", concept, len(sub.model.relationships))
        diags.extend(sub.diagnostics)
        acc = merge(acc, sub.model, diags)
        done += 1
        if opts.expand_subconcepts:
            for s in sorted(subconcepts_of(o, concept)):
                if s.casefold() not in queued:
                    queued.add(s.casefold())
                    queue.append((s, Origin.SUBCONCEPT))

    model, refine_diags = refine(acc, opts.datatype_classes)
    diags.extend(refine_diags)
    diags.extend(defined_only(o, model))
    return model, diags
