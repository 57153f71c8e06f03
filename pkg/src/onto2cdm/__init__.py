"""Derive conceptual data models from description-logic ontologies."""

from onto2cdm.diagnostics import Diagnostic, Severity
from onto2cdm.dl import (
    Atomic,
    ClassExpression,
    DataExists,
    DataForAll,
    Datatype,
    ExactCard,
    Exists,
    ForAll,
    Intersection,
    MaxCard,
    MinCard,
    Union,
    atomic_names,
    deconstruct,
    normalize_name,
)
from onto2cdm.engine import TransformOptions, refine, transform, transform_concept
from onto2cdm.evaluate import diff, metrics
from onto2cdm.model import (
    ConceptualModel,
    Direction,
    EntityType,
    Generalization,
    Multiplicity,
    Origin,
    Relationship,
    canonicalize,
    merge,
    stats,
)
from onto2cdm.ontology import Ontology, parse_ontology, serialize_ontology, subconcepts_of, validate

__version__ = "0.1.0"

__all__ = [
    "Atomic",
    "ClassExpression",
    "ConceptualModel",
    "DataExists",
    "DataForAll",
    "Datatype",
    "Diagnostic",
    "Direction",
    "EntityType",
    "ExactCard",
    "Exists",
    "ForAll",
    "Generalization",
    "Intersection",
    "MaxCard",
    "MinCard",
    "Multiplicity",
    "Ontology",
    "Origin",
    "Relationship",
    "Severity",
    "TransformOptions",
    "Union",
    "atomic_names",
    "canonicalize",
    "deconstruct",
    "diff",
    "merge",
    "metrics",
    "normalize_name",
    "parse_ontology",
    "refine",
    "serialize_ontology",
    "stats",
    "subconcepts_of",
    "transform",
    "transform_concept",
    "validate",
]
