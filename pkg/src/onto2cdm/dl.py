"""Description-logic class expressions.

The node types form a small immutable AST covering the OWL constructs the
transformation understands: named classes, intersection and union, the
existential/universal/cardinality restrictions over object properties, and
existential/universal restrictions over datatype properties.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Optional, Union as _U

_WS = re.compile(r"\s+")


class Datatype(str, enum.Enum):
    STRING = "xsd:string"
    INTEGER = "xsd:integer"
    FLOAT = "xsd:float"
    BOOLEAN = "xsd:boolean"
    DATE = "xsd:date"

    @property
    def short(self) -> str:
        return self.value.split(":", 1)[1]

    @classmethod
    def parse(cls, text: str) -> Datatype:
        try:
            return cls(text.strip())
        except ValueError:
            raise ValueError(f"unknown datatype {text!r}") from None


def normalize_name(name: str) -> str:
    """Trim and hyphenate runs of whitespace; case is preserved.

    >>> normalize_name("  protein   function ")
    'protein-function'
    """
    out = _WS.sub("-", name.strip())
    if not out:
        raise ValueError("empty concept name")
    return out


def name_key(name: str) -> str:
    """Comparison key for concept and property names (case-insensitive)."""
    return normalize_name(name).casefold()


@dataclass(frozen=True)
class Atomic:
    name: str

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_name(self.name))


def _flatten(kind, operands) -> tuple:
    flat = []
    for op in operands:
        if isinstance(op, kind):
            flat.extend(op.operands)
        else:
            flat.append(op)
    return tuple(flat)


@dataclass(frozen=True)
class Intersection:
    operands: tuple

    def __post_init__(self):
        ops = _flatten(Intersection, self.operands)
        if len(ops) < 2:
            raise ValueError("Intersection needs at least two operands")
        object.__setattr__(self, "operands", ops)


@dataclass(frozen=True)
class Union:
    operands: tuple

    def __post_init__(self):
        ops = _flatten(Union, self.operands)
        if len(ops) < 2:
            raise ValueError("Union needs at least two operands")
        object.__setattr__(self, "operands", ops)


@dataclass(frozen=True)
class Exists:
    property: str
    filler: ClassExpression

    def __post_init__(self):
        object.__setattr__(self, "property", normalize_name(self.property))


@dataclass(frozen=True)
class ForAll:
    property: str
    filler: ClassExpression

    def __post_init__(self):
        object.__setattr__(self, "property", normalize_name(self.property))


@dataclass(frozen=True)
class _Cardinality:
    property: str
    n: int
    filler: Optional[ClassExpression] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "property", normalize_name(self.property))
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"cardinality must be a non-negative integer, got {self.n!r}")


class MinCard(_Cardinality):
    pass


class MaxCard(_Cardinality):
    pass


class ExactCard(_Cardinality):
    pass


@dataclass(frozen=True)
class DataExists:
    property: str
    datatype: Datatype

    def __post_init__(self):
        object.__setattr__(self, "property", normalize_name(self.property))
        object.__setattr__(self, "datatype", Datatype(self.datatype))


@dataclass(frozen=True)
class DataForAll:
    property: str
    datatype: Datatype

    def __post_init__(self):
        object.__setattr__(self, "property", normalize_name(self.property))
        object.__setattr__(self, "datatype", Datatype(self.datatype))


ClassExpression = _U[
    Atomic, Intersection, Union, Exists, ForAll, MinCard, MaxCard, ExactCard, DataExists, DataForAll
]

OBJECT_RESTRICTIONS = (Exists, ForAll, MinCard, MaxCard, ExactCard)
DATA_RESTRICTIONS = (DataExists, DataForAll)
RESTRICTIONS = OBJECT_RESTRICTIONS + DATA_RESTRICTIONS


def is_restriction(expr) -> bool:
    return isinstance(expr, RESTRICTIONS)


def deconstruct(expr: ClassExpression) -> list:
    """Split an intersection or union into its operands.

    Any other expression comes back as a one-element list.
    """
    if isinstance(expr, (Intersection, Union)):
        return list(expr.operands)
    return [expr]


def atomic_names(expr: ClassExpression) -> set:
    names = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Atomic):
            names.add(node.name)
        elif isinstance(node, (Intersection, Union)):
            stack.extend(node.operands)
        elif isinstance(node, OBJECT_RESTRICTIONS) and node.filler is not None:
            stack.append(node.filler)
    return names


def properties_of(expr: ClassExpression) -> set:
    """All property names used by restrictions anywhere in ``expr``."""
    props = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, (Intersection, Union)):
            stack.extend(node.operands)
        elif isinstance(node, RESTRICTIONS):
            props.add(node.property)
            if isinstance(node, OBJECT_RESTRICTIONS) and node.filler is not None:
                stack.append(node.filler)
    return props


_CARD_KEYWORDS = {MinCard: "Min", MaxCard: "Max", ExactCard: "Exact"}


def render(expr: ClassExpression) -> str:
    """Functional-syntax text for ``expr``, as accepted by the ontology parser."""
    if isinstance(expr, Atomic):
        return expr.name
    if isinstance(expr, Intersection):
        return "And(" + ", ".join(render(o) for o in expr.operands) + ")"
    if isinstance(expr, Union):
        return "Or(" + ", ".join(render(o) for o in expr.operands) + ")"
    if isinstance(expr, Exists):
        return f"Some({expr.property}, {render(expr.filler)})"
    if isinstance(expr, ForAll):
        return f"Only({expr.property}, {render(expr.filler)})"
    if isinstance(expr, _Cardinality):
        kw = _CARD_KEYWORDS[type(expr)]
        if expr.filler is None:
            return f"{kw}({expr.property}, {expr.n})"
        return f"{kw}({expr.property}, {expr.n}, {render(expr.filler)})"
    if isinstance(expr, DataExists):
        return f"DataSome({expr.property}, {expr.datatype.value})"
    if isinstance(expr, DataForAll):
        return f"DataOnly({expr.property}, {expr.datatype.value})"
    raise TypeError(f"not a class expression: {expr!r}")


def split_definition(expr: ClassExpression) -> list:
    """Route the top level of a class definition into tagged parts.

    Returns ``(role, expr)`` pairs where role is one of ``"super"`` (an atomic
    superclass), ``"partition"`` (an atomic member of a top-level union, to
    become a subtype), ``"restriction"`` or ``"unsupported"``.
    """
    ops = [expr] if isinstance(expr, Union) else deconstruct(expr)
    parts = []
    for op in ops:
        if isinstance(op, Atomic):
            parts.append(("super", op))
        elif is_restriction(op):
            parts.append(("restriction", op))
        elif isinstance(op, Union):
            for member in op.operands:
                if isinstance(member, Atomic):
                    parts.append(("partition", member))
                elif is_restriction(member):
                    parts.append(("restriction", member))
                else:
                    parts.append(("unsupported", member))
        else:
            parts.append(("unsupported", op))
    return parts
