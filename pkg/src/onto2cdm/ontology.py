"""Line-oriented ontology format: parsing, validation and serialization.

One statement per line; ``#`` starts a comment::

    Class(Protein)
    ObjectProperty(polymer-of)
    EquivalentClasses(Protein, And(Macromolecular-compound, Some(polymer-of, Amino-Acid)))
"""
from __future__ import annotations

import graphlib
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from onto2cdm import dl
from onto2cdm.diagnostics import Diagnostic
from onto2cdm.dl import Datatype, name_key

MAX_DEPTH = 64

_TOKEN = re.compile(r"\s*(?:(?P<name>[\w-]+(?::[\w-]+)?)|(?P<punct>[(),])|(?P<bad>\S))", re.UNICODE)
_NUMBER = re.compile(r"[0-9]+")

_UNSUPPORTED = frozenset({
    "Not", "ComplementOf", "ObjectComplementOf", "OneOf", "ObjectOneOf", "HasValue",
    "ObjectHasValue", "HasSelf", "ObjectHasSelf", "PropertyChain", "ObjectPropertyChain",
    "SubPropertyOf", "SubObjectPropertyOf", "DisjointClasses",
})


class UnknownConceptError(LookupError):
    pass


@dataclass
class ObjectPropertyInfo:
    domain: Optional[str] = None
    range: Optional[str] = None
    inverse_of: Optional[str] = None
    functional: bool = False


@dataclass
class DatatypePropertyInfo:
    domain: Optional[str] = None
    range: Optional[Datatype] = None


@dataclass
class Ontology:
    classes: set = field(default_factory=set)
    subclass_axioms: list = field(default_factory=list)
    equivalence_axioms: list = field(default_factory=list)
    object_properties: dict = field(default_factory=dict)
    datatype_properties: dict = field(default_factory=dict)
    # (kind, index) -> (line, column); kind is "sub" or "equiv"
    locations: dict = field(default_factory=dict, compare=False, repr=False)

    def resolve_class(self, name: str) -> Optional[str]:
        """Declared spelling of ``name`` (case-insensitive), or None."""
        try:
            key = name_key(name)
        except ValueError:
            return None
        for c in self.classes:
            if c.casefold() == key:
                return c
        return None

    def property_kind(self, name: str) -> Optional[str]:
        key = name_key(name)
        if any(p.casefold() == key for p in self.object_properties):
            return "object"
        if any(p.casefold() == key for p in self.datatype_properties):
            return "datatype"
        return None

    def object_property(self, name: str) -> Optional[ObjectPropertyInfo]:
        key = name_key(name)
        for p, info in self.object_properties.items():
            if p.casefold() == key:
                return info
        return None

    def axioms_for(self, concept: str):
        """Yield ``(kind, expr)`` for every subclass/equivalence axiom on ``concept``."""
        key = name_key(concept)
        for subject, expr in self.equivalence_axioms:
            if subject.casefold() == key:
                yield "equiv", expr
        for subject, expr in self.subclass_axioms:
            if subject.casefold() == key:
                yield "sub", expr

    def is_defined(self, concept: str) -> bool:
        return any(kind == "equiv" for kind, _ in self.axioms_for(concept))


# -- parsing ---------------------------------------------------------------


class _ParseError(Exception):
    def __init__(self, code, message, column):
        super().__init__(message)
        self.code = code
        self.column = column


@dataclass
class _Term:
    name: str
    column: int
    args: Optional[list] = None  # None for a bare name


def _tokenize(line: str):
    tokens = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None or m.end() == pos:
            break
        if m.group("bad") is not None:
            col = m.start("bad") + 1
            raise _ParseError("PARSE_SYNTAX", f"unexpected character {m.group('bad')!r}", col)
        if m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name") + 1))
        else:
            punct = m.group("punct")
            tokens.append((punct, punct, m.start("punct") + 1))
        pos = m.end()
    return tokens


class _TermParser:
    def __init__(self, tokens, eol_col):
        self.tokens = tokens
        self.i = 0
        self.eol_col = eol_col

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eol", "", self.eol_col)

    def expect(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            found = "end of line" if tok[0] == "eol" else repr(tok[1])
            raise _ParseError("PARSE_SYNTAX", f"expected {kind!r}, found {found}", tok[2])
        self.i += 1
        return tok

    def term(self, depth=0):
        if depth > MAX_DEPTH:
            raise _ParseError("PARSE_SYNTAX", "expression nested too deeply", self.peek()[2])
        _, name, col = self.expect("name")
        if self.peek()[0] != "(":
            return _Term(name, col)
        self.i += 1
        args = []
        if self.peek()[0] != ")":
            args.append(self.term(depth + 1))
            while self.peek()[0] == ",":
                self.i += 1
                args.append(self.term(depth + 1))
        self.expect(")")
        return _Term(name, col, args)


def _bare(term: _Term, what: str) -> str:
    if term.args is not None:
        raise _ParseError("PARSE_SYNTAX", f"expected {what} name, found {term.name}(...)", term.column)
    if ":" in term.name:
        raise _ParseError("PARSE_NAME", f"{term.name!r} is not a valid {what} name", term.column)
    return term.name


def _datatype(term: _Term) -> Datatype:
    if term.args is not None or not term.name.startswith("xsd:"):
        raise _ParseError("PARSE_DATATYPE", f"expected an xsd datatype, found {term.name!r}", term.column)
    try:
        return Datatype(term.name)
    except ValueError:
        raise _ParseError("PARSE_DATATYPE", f"unsupported datatype {term.name!r}", term.column) from None


def _arity(term: _Term, allowed):
    n = len(term.args)
    if n not in allowed:
        want = " or ".join(str(a) for a in sorted(allowed))
        raise _ParseError("PARSE_ARITY", f"{term.name} takes {want} argument(s), got {n}", term.column)


def _class_expression(term: _Term):
    if term.args is None:
        return dl.Atomic(_bare(term, "class"))
    kw = term.name
    args = term.args
    if kw in ("And", "Or"):
        if len(args) < 2:
            raise _ParseError("PARSE_ARITY", f"{kw} takes at least 2 arguments, got {len(args)}", term.column)
        ops = tuple(_class_expression(a) for a in args)
        return dl.Intersection(ops) if kw == "And" else dl.Union(ops)
    if kw in ("Some", "Only"):
        _arity(term, {2})
        prop = _bare(args[0], "property")
        filler = _class_expression(args[1])
        return dl.Exists(prop, filler) if kw == "Some" else dl.ForAll(prop, filler)
    if kw in ("Min", "Max", "Exact"):
        _arity(term, {2, 3})
        prop = _bare(args[0], "property")
        if args[1].args is not None or not _NUMBER.fullmatch(args[1].name):
            raise _ParseError("PARSE_SYNTAX", f"expected a non-negative integer, found {args[1].name!r}", args[1].column)
        n = int(args[1].name)
        filler = _class_expression(args[2]) if len(args) == 3 else None
        cls = {"Min": dl.MinCard, "Max": dl.MaxCard, "Exact": dl.ExactCard}[kw]
        return cls(prop, n, filler)
    if kw in ("DataSome", "DataOnly"):
        _arity(term, {2})
        prop = _bare(args[0], "property")
        dt = _datatype(args[1])
        return dl.DataExists(prop, dt) if kw == "DataSome" else dl.DataForAll(prop, dt)
    if kw in _UNSUPPORTED:
        raise _ParseError("PARSE_UNSUPPORTED", f"{kw} is not supported", term.column)
    raise _ParseError("PARSE_UNKNOWN", f"unknown constructor {kw!r}", term.column)


_STATEMENTS = {
    "Class": 1, "SubClassOf": 2, "EquivalentClasses": 2, "ObjectProperty": 1,
    "DatatypeProperty": 1, "Domain": 2, "Range": 2, "InverseOf": 2, "Functional": 1,
}


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_ontology(text) -> tuple:
    """Parse ontology text into ``(Ontology, diagnostics)``.

    Malformed statements are reported and skipped; parsing never raises.
    Property metadata (domain, range, inverse, functional) is applied after
    all declarations are read, so statement order does not matter.
    """
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8", errors="replace")
    text = text.lstrip("﻿")

    onto = Ontology()
    diags = []
    pending = []  # deferred property statements: (kw, args, line, col)
    class_refs = []  # (name, line, col) referenced but maybe undeclared

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        try:
            tokens = _tokenize(line)
            parser = _TermParser(tokens, len(line.rstrip()) + 1)
            stmt = parser.term()
            if parser.peek()[0] != "eol":
                tok = parser.peek()
                raise _ParseError("PARSE_SYNTAX", f"unexpected {tok[1]!r} after statement", tok[2])
            _statement(onto, stmt, lineno, pending, class_refs)
        except _ParseError as exc:
            diags.append(Diagnostic.error(exc.code, str(exc), lineno, exc.column))

    _apply_property_statements(onto, pending, class_refs, diags)
    _declare_referenced_classes(onto, class_refs, diags)
    _respell(onto)
    return onto, diags


def _statement(onto: Ontology, stmt: _Term, lineno: int, pending: list, class_refs: list):
    kw = stmt.name
    if stmt.args is None:
        raise _ParseError("PARSE_SYNTAX", f"expected a statement, found bare name {kw!r}", stmt.column)
    if kw not in _STATEMENTS:
        code = "PARSE_UNSUPPORTED" if kw in _UNSUPPORTED else "PARSE_UNKNOWN"
        raise _ParseError(code, f"unknown statement {kw!r}", stmt.column)
    _arity(stmt, {_STATEMENTS[kw]})
    args = stmt.args

    if kw == "Class":
        name = _bare(args[0], "class")
        if onto.resolve_class(name) is None:
            onto.classes.add(name)
    elif kw in ("SubClassOf", "EquivalentClasses"):
        subject = _bare(args[0], "class")
        expr = _class_expression(args[1])
        target = onto.subclass_axioms if kw == "SubClassOf" else onto.equivalence_axioms
        onto.locations[("sub" if kw == "SubClassOf" else "equiv", len(target))] = (lineno, stmt.column)
        target.append((subject, expr))
        for n in {subject} | dl.atomic_names(expr):
            class_refs.append((n, lineno, stmt.column))
    elif kw in ("ObjectProperty", "DatatypeProperty"):
        name = _bare(args[0], "property")
        kind = onto.property_kind(name)
        wanted = "object" if kw == "ObjectProperty" else "datatype"
        if kind is None:
            if wanted == "object":
                onto.object_properties[name] = ObjectPropertyInfo()
            else:
                onto.datatype_properties[name] = DatatypePropertyInfo()
        elif kind != wanted:
            raise _ParseError("PROPERTY_KIND_CONFLICT", f"{name} is already declared as a {kind} property", stmt.column)
    else:
        # validate shape now, apply once every declaration is known
        prop = _bare(args[0], "property")
        if kw == "Range" and args[1].args is None and args[1].name.startswith("xsd:"):
            value = _datatype(args[1])
        elif kw in ("Domain", "Range"):
            value = _bare(args[1], "class")
        elif kw == "InverseOf":
            value = _bare(args[1], "property")
        else:
            value = None
        pending.append((kw, prop, value, lineno, stmt.column))


def _find(mapping: dict, name: str):
    key = name.casefold()
    for k in mapping:
        if k.casefold() == key:
            return k
    return None


def _apply_property_statements(onto, pending, class_refs, diags):
    for kw, prop, value, line, col in pending:
        okey = _find(onto.object_properties, prop)
        dkey = _find(onto.datatype_properties, prop)
        if okey is None and dkey is None:
            diags.append(Diagnostic.error("UNDECLARED_PROPERTY", f"{kw} refers to undeclared property {prop!r}", line, col))
            continue
        if okey is not None:
            info = onto.object_properties[okey]
            if isinstance(value, Datatype):
                diags.append(Diagnostic.error("PARSE_RANGE_KIND", f"object property {okey} cannot have datatype range {value.value}", line, col))
                continue
            if kw in ("Domain", "Range"):
                attr = kw.lower()
                current = getattr(info, attr)
                if current is not None and current.casefold() != value.casefold():
                    diags.append(Diagnostic.warning("DUPLICATE_" + kw.upper(), f"{okey} already has {attr} {current}; ignoring {value}", line, col))
                    continue
                setattr(info, attr, value)
                class_refs.append((value, line, col))
            elif kw == "InverseOf":
                if info.inverse_of is not None and info.inverse_of.casefold() != value.casefold():
                    diags.append(Diagnostic.error("INVERSE_CONFLICT", f"{okey} is already the inverse of {info.inverse_of}", line, col))
                    continue
                info.inverse_of = _find(onto.object_properties, value) or value
            elif kw == "Functional":
                info.functional = True
        else:
            info = onto.datatype_properties[dkey]
            if kw == "Domain":
                if info.domain is not None and info.domain.casefold() != value.casefold():
                    diags.append(Diagnostic.warning("DUPLICATE_DOMAIN", f"{dkey} already has domain {info.domain}; ignoring {value}", line, col))
                    continue
                info.domain = value
                class_refs.append((value, line, col))
            elif kw == "Range":
                if not isinstance(value, Datatype):
                    diags.append(Diagnostic.error("PARSE_RANGE_KIND", f"datatype property {dkey} needs an xsd range, got {value}", line, col))
                    continue
                if info.range is not None and info.range is not value:
                    diags.append(Diagnostic.warning("DUPLICATE_RANGE", f"{dkey} already has range {info.range.value}; ignoring {value.value}", line, col))
                    continue
                info.range = value
            elif kw == "InverseOf":
                diags.append(Diagnostic.error("PARSE_RANGE_KIND", f"datatype property {dkey} cannot have an inverse", line, col))
            elif kw == "Functional":
                diags.append(Diagnostic.warning("IGNORED_FUNCTIONAL", f"Functional on datatype property {dkey} has no effect", line, col))


def _declare_referenced_classes(onto, class_refs, diags):
    for name, line, col in class_refs:
        if onto.resolve_class(name) is None:
            onto.classes.add(name)
            diags.append(Diagnostic.warning("UNDECLARED_CLASS", f"class {name!r} used without a Class declaration", line, col))


def _respell_expr(expr, classes: dict, props: dict):
    if isinstance(expr, dl.Atomic):
        return dl.Atomic(classes.get(expr.name.casefold(), expr.name))
    if isinstance(expr, dl.Intersection):
        return dl.Intersection(tuple(_respell_expr(o, classes, props) for o in expr.operands))
    if isinstance(expr, dl.Union):
        return dl.Union(tuple(_respell_expr(o, classes, props) for o in expr.operands))
    prop = props.get(expr.property.casefold(), expr.property)
    if isinstance(expr, (dl.Exists, dl.ForAll)):
        return type(expr)(prop, _respell_expr(expr.filler, classes, props))
    if isinstance(expr, (dl.MinCard, dl.MaxCard, dl.ExactCard)):
        filler = None if expr.filler is None else _respell_expr(expr.filler, classes, props)
        return type(expr)(prop, expr.n, filler)
    return type(expr)(prop, expr.datatype)


def _respell(onto: Ontology):
    """Rewrite every reference to the declared spelling of its class or property."""
    classes = {c.casefold(): c for c in onto.classes}
    props = {p.casefold(): p for p in list(onto.object_properties) + list(onto.datatype_properties)}
    fix = lambda n: None if n is None else classes.get(n.casefold(), n)  # noqa: E731
    onto.subclass_axioms[:] = [(fix(s), _respell_expr(e, classes, props)) for s, e in onto.subclass_axioms]
    onto.equivalence_axioms[:] = [(fix(s), _respell_expr(e, classes, props)) for s, e in onto.equivalence_axioms]
    for info in onto.object_properties.values():
        info.domain = fix(info.domain)
        info.range = fix(info.range)
    for info in onto.datatype_properties.values():
        info.domain = fix(info.domain)


# -- validation ------------------------------------------------------------


def told_generalizations(onto: Ontology) -> list:
    """``(sub, super)`` edges stated by the axioms, without any reasoning.

    Atomic superclasses and atomic intersection operands give ``subject ⊑ A``;
    atomic members of a top-level union give ``member ⊑ subject``.
    """
    edges = []
    for subject, expr in list(onto.equivalence_axioms) + list(onto.subclass_axioms):
        for role, part in dl.split_definition(expr):
            if role == "super":
                edges.append((subject, part.name))
            elif role == "partition":
                edges.append((part.name, subject))
    return edges


def validate(onto: Ontology) -> list:
    """Check referential integrity and complete inverse links in place."""
    diags = []

    for kind, axioms in (("sub", onto.subclass_axioms), ("equiv", onto.equivalence_axioms)):
        for i, (subject, expr) in enumerate(axioms):
            line, col = onto.locations.get((kind, i), (0, 0))
            diags.extend(_check_restrictions(onto, subject, expr, line, col))

    diags.extend(_complete_inverses(onto))

    for name, info in list(onto.object_properties.items()) + list(onto.datatype_properties.items()):
        if info.domain is None and info.range is None:
            diags.append(Diagnostic.warning("NO_DOMAIN_RANGE", f"property {name} has neither domain nor range"))

    graph = {}
    for sub, sup in told_generalizations(onto):
        graph.setdefault(sub.casefold(), set()).add(sup.casefold())
    try:
        tuple(graph_order(graph))
    except graphlib.CycleError as exc:
        cycle = exc.args[1]
        spelled = [onto.resolve_class(c) or c for c in cycle]
        diags.append(Diagnostic.error("SUBSUMPTION_CYCLE", "subsumption cycle: " + " ⊑ ".join(spelled)))
    return diags


def graph_order(graph: dict):
    return graphlib.TopologicalSorter(graph).static_order()


def _walk_restrictions(expr):
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, (dl.Intersection, dl.Union)):
            stack.extend(node.operands)
        elif dl.is_restriction(node):
            yield node
            if isinstance(node, dl.OBJECT_RESTRICTIONS) and node.filler is not None:
                stack.append(node.filler)


def _check_restrictions(onto, subject, expr, line, col):
    for r in _walk_restrictions(expr):
        kind = onto.property_kind(r.property)
        if kind is None:
            yield Diagnostic.error("UNDECLARED_PROPERTY", f"axiom on {subject} uses undeclared property {r.property!r}", line, col)
        elif kind == "datatype" and isinstance(r, dl.OBJECT_RESTRICTIONS):
            yield Diagnostic.error("PROPERTY_KIND_MISMATCH", f"{r.property} is a datatype property but is restricted as an object property", line, col)
        elif kind == "object" and isinstance(r, dl.DATA_RESTRICTIONS):
            yield Diagnostic.error("PROPERTY_KIND_MISMATCH", f"{r.property} is an object property but is restricted as a datatype property", line, col)


def _complete_inverses(onto: Ontology):
    diags = []
    for name, info in list(onto.object_properties.items()):
        if info.inverse_of is None:
            continue
        other = _find(onto.object_properties, info.inverse_of)
        if other is None:
            if _find(onto.datatype_properties, info.inverse_of) is not None:
                diags.append(Diagnostic.error("INVERSE_KIND", f"{name} is declared inverse of datatype property {info.inverse_of}"))
                continue
            other = info.inverse_of
            onto.object_properties[other] = ObjectPropertyInfo()
            diags.append(Diagnostic.warning("IMPLICIT_INVERSE", f"inverse property {other} declared implicitly by InverseOf({name}, {other})"))
        partner = onto.object_properties[other]
        if partner.inverse_of is None:
            partner.inverse_of = name
        elif partner.inverse_of.casefold() != name.casefold():
            diags.append(Diagnostic.error("INVERSE_CONFLICT", f"{other} is inverse of both {name} and {partner.inverse_of}"))
    return diags


def subconcepts_of(onto: Ontology, concept: str) -> set:
    """Every class that reaches ``concept`` through told subsumption edges."""
    root = onto.resolve_class(concept)
    if root is None:
        raise UnknownConceptError(concept)
    below = {}
    for sub, sup in told_generalizations(onto):
        below.setdefault(sup.casefold(), []).append(sub)
    seen = {}
    queue = deque([root])
    while queue:
        cur = queue.popleft()
        for sub in below.get(cur.casefold(), ()):
            if sub.casefold() not in seen and sub.casefold() != root.casefold():
                seen[sub.casefold()] = sub
                queue.append(sub)
    return set(seen.values())


# -- serialization ---------------------------------------------------------


def serialize_ontology(onto: Ontology) -> str:
    lines = [f"Class({c})" for c in sorted(onto.classes)]
    for name, info in onto.object_properties.items():
        lines.append(f"ObjectProperty({name})")
        if info.domain is not None:
            lines.append(f"Domain({name}, {info.domain})")
        if info.range is not None:
            lines.append(f"Range({name}, {info.range})")
        if info.inverse_of is not None:
            lines.append(f"InverseOf({name}, {info.inverse_of})")
        if info.functional:
            lines.append(f"Functional({name})")
    for name, info in onto.datatype_properties.items():
        lines.append(f"DatatypeProperty({name})")
        if info.domain is not None:
            lines.append(f"Domain({name}, {info.domain})")
        if info.range is not None:
            lines.append(f"Range({name}, {info.range.value})")
    lines += [f"SubClassOf({s}, {dl.render(e)})" for s, e in onto.subclass_axioms]
    lines += [f"EquivalentClasses({s}, {dl.render(e)})" for s, e in onto.equivalence_axioms]
    return "\n".join(lines) + "\n" if lines else ""
